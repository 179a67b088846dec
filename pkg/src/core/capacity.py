"""
Conteúdo de Hausdorff diádico, capacidades variacionais e normas de medidas.

Convenções:
    - a célula k do grid é o cubo [x_k, x_k + h)^n; um DyadicSet marca células
      finas e a restrição u >= 1 vale nos nós correspondentes;
    - as capacidades usam todos os campos do grid como funções teste, com
      u = 0 numa moldura junto à fronteira do box e |u| <= B;
    - os objetivos são integrais (peso h^n), de modo que os valores escalam
      como as seminormas contínuas.
"""

import math
from dataclasses import replace
from itertools import product
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.spatial import cKDTree

from core.config import Config
from core.exceptions import InvalidOrderError, MeanNotZeroError, PreconditionError
from core.models import (
    Grid, ScalarField, DyadicSet, DiscreteMeasure, CapacityProblem, CapacityKind,
    SolveReport, LevelIntegral, FracOrder, TraceMode, SeminormKind,
)
from core.grid import coordinates
from core.parallel import parallel_map
from core import fracops, norms, quadrature, solver

# acima deste valor o crescimento de uma medida é reportado como infinito
GROWTH_DIVERGENCE = 1e12

# bolas abertas: raio efetivo r (1 - OPEN_BALL_SHRINK)
OPEN_BALL_SHRINK = 1e-9


# ============================================================================
# CONJUNTOS E MEDIDAS
# ============================================================================

def dyadic_set_from_mask(grid: Grid, mask) -> DyadicSet:
    """Cria um DyadicSet a partir de uma máscara booleana de células."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size != grid.size:
        raise PreconditionError("dyadic_set_from_mask", f"mascara com {mask.size} celulas, grid tem {grid.size}")
    return DyadicSet(grid, mask.reshape(grid.shape))


def _cell_centers(grid: Grid):
    half = grid.h / 2.0
    return [x + half for x in coordinates(grid)]


def ball_set(grid: Grid, r: float, center: Optional[Sequence[float]] = None) -> DyadicSet:
    """Células cujo centro está na bola fechada B(center, r)."""
    center = np.zeros(grid.n) if center is None else np.asarray(center, dtype=np.float64)
    r2 = sum((x - c) ** 2 for x, c in zip(_cell_centers(grid), center))
    return DyadicSet(grid, r2 <= r * r)


def cube_set(grid: Grid, side: float, center: Optional[Sequence[float]] = None) -> DyadicSet:
    """Células cujo centro está no cubo fechado de aresta ``side``."""
    center = np.zeros(grid.n) if center is None else np.asarray(center, dtype=np.float64)
    mask = np.ones(grid.shape, dtype=bool)
    for x, c in zip(_cell_centers(grid), center):
        mask &= np.abs(x - c) <= side / 2.0
    return DyadicSet(grid, mask)


def segment_measure(n: int = 2, length: float = 1.0, spacing: float = 1.0 / 128) -> DiscreteMeasure:
    """Átomos uniformes no segmento [-length/2, length/2] x {0}, peso = espaçamento."""
    count = int(round(length / spacing))
    atoms = np.zeros((count, n))
    atoms[:, 0] = (np.arange(count) + 0.5) * spacing - length / 2.0
    return DiscreteMeasure(atoms, np.full(count, spacing))


def square_measure(n: int = 2, side: float = 1.0, spacing: float = 1.0 / 128) -> DiscreteMeasure:
    """Átomos nos centros das células do quadrado [-side/2, side/2]^2, peso = espaçamento^2."""
    count = int(round(side / spacing))
    axis = (np.arange(count) + 0.5) * spacing - side / 2.0
    mesh = np.meshgrid(axis, axis, indexing="ij")
    atoms = np.zeros((count * count, n))
    atoms[:, 0] = mesh[0].ravel()
    atoms[:, 1] = mesh[1].ravel()
    return DiscreteMeasure(atoms, np.full(count * count, spacing * spacing))


# ============================================================================
# CONTEÚDO DE HAUSDORFF
# ============================================================================

def hausdorff_content(K: DyadicSet, alpha: float) -> float:
    """
    Conteúdo de Hausdorff diádico de dimensão alpha.

    Programação dinâmica de baixo para cima na árvore diádica do box:
    content(Q) = min(l(Q)^alpha, soma dos filhos), com 0 para cubos que não
    tocam K. A raiz é o box inteiro, de aresta 2L.

    Raises:
        InvalidOrderError: Se alpha não estiver em (0, n).

    Example:
        >>> # duas células unitárias a distância 8, alpha=0.5, L=16 -> 2.0
    """
    grid = K.grid
    n = grid.n
    if not 0.0 < alpha < n:
        raise InvalidOrderError("alpha", alpha, f"(0, {n})")
    if K.is_empty:
        return 0.0
    side = grid.h
    content = np.where(K.mask, side ** alpha, 0.0)
    while content.shape[0] > 1:
        half = content.shape[0] // 2
        shape = []
        for _ in range(n):
            shape.extend([half, 2])
        children = content.reshape(shape).sum(axis=tuple(range(1, 2 * n, 2)))
        side *= 2.0
        content = np.where(children > 0.0, np.minimum(side ** alpha, children), 0.0)
    return float(content.reshape(-1)[0])


def content_comparability(n: int, alpha: float) -> Dict[str, float]:
    """
    Fatores entre o conteúdo diádico (arestas l^alpha) e o por bolas (raios r^alpha).

    Um cubo de aresta l cabe numa bola de raio l sqrt(n)/2; uma bola de raio
    r é coberta por 2^n cubos diádicos de aresta < 4r.
    """
    return {
        "ball_over_dyadic_max": (math.sqrt(n) / 2.0) ** alpha,
        "dyadic_over_ball_max": 2.0 ** n * 4.0 ** alpha,
    }


# ============================================================================
# CAPACIDADES VARIACIONAIS
# ============================================================================

def _frame_mask(grid: Grid, frame_fraction: float) -> np.ndarray:
    limit = grid.L * (1.0 - frame_fraction)
    mask = np.zeros(grid.shape, dtype=bool)
    for x in coordinates(grid):
        mask |= np.abs(x) >= limit
    return mask


def _half_offsets(n: int, radius: int):
    for shift in product(range(-radius, radius + 1), repeat=n):
        nonzero = [c for c in shift if c != 0]
        if nonzero and nonzero[0] > 0:
            yield shift


def _ws1_terms(grid: Grid, order: FracOrder, config: Config) -> List[solver.LinearTerm]:
    """
    Seminorma W^{s,1} como soma de diferenças de pares, em níveis.

    Nível 0: pares |k|_inf <= R da rede fina, peso 2 |kh|^{-n-s} h^{2n}.
    Nível l >= 1, blocos de lado b = 2^l: médias U por bloco e pares de
    blocos K com peso 2 (bh)^{n-s} w(K), onde w(K) integra |z|^{-n-s} na
    célula K cortada pela casca (R + 1/2)/2 < |z|_inf <= R + 1/2. As cascas
    cobrem (R + 1/2) h < |z|_inf <= (R + 1/2) b_max h sem sobreposição.

    Além da última casca resta 2 T ||u||_1 h^n, T a integral de |z|^{-n-s}
    fora do cubo; exato quando o suporte de u tem diâmetro (norma do máximo)
    abaixo de (R + 1/2) b_max h.
    """
    n, h, s = grid.n, grid.h, order.s
    radius = config.ws1_radius
    volume = grid.cell_volume
    terms = []
    for shift in _half_offsets(n, radius):
        distance = h * math.sqrt(sum(c * c for c in shift))
        terms.append(solver.pair_difference_term(shift, 2.0 * distance ** (-(n + s)) * volume ** 2, grid.shape))

    outer = radius + 0.5
    block = 1
    while (2 * grid.N) % (2 * block) == 0 and 2 * grid.N // (2 * block) >= 2 * radius + 1:
        block *= 2
        scale = 2.0 * (block * h) ** (n - s)
        for shift in _half_offsets(n, radius):
            w = quadrature.shell_cell_integral(tuple(shift), outer / 2.0, outer, n + s)
            if w > 0.0:
                terms.append(solver.pair_difference_term(shift, scale * w, grid.shape, block))

    tail = quadrature.outside_cube_integral(n, outer * block * h, n + s)
    terms.append(solver.diagonal_term("far_field", 2.0 * tail * volume))
    return terms


def objective_terms(grid: Grid, kind: CapacityKind, order: FracOrder,
                    config: Config) -> List[solver.LinearTerm]:
    """
    Termos L^1 do objetivo de cada capacidade.

    ws1: pares de R^n no campo estendido por zero (ver ``_ws1_terms``).
    hs1_plus: h^n ||A u||_1. hs1_minus: h^n sum_j ||R_j A u||_1. hs1: ambos.
    """
    kind = CapacityKind(kind)
    n = grid.n
    volume = grid.cell_volume
    if kind == CapacityKind.WS1:
        return _ws1_terms(grid, order, config)

    fracops.require_periodic(grid, "variational_capacity")
    power = fracops.symbol_power(grid, order.s)
    terms = []
    if kind in (CapacityKind.HS1, CapacityKind.HS1_PLUS):
        terms.append(solver.multiplier_term("laplacian", power, volume))
    if kind in (CapacityKind.HS1, CapacityKind.HS1_MINUS):
        for j in range(n):
            terms.append(solver.multiplier_term(f"riesz_{j}", fracops.riesz_symbol(grid, j) * power, volume))
    return terms


def variational_capacity(prob: CapacityProblem, config: Optional[Config] = None) -> SolveReport:
    """
    Cap_X(K) = inf{[u]_X : u >= 1 em K}, pelo solver primal-dual.

    Sem convergência em max_iter o relatório sai com converged=False e o
    melhor valor primal viável, que continua sendo um limitante superior.

    Args:
        prob: Conjunto, tipo de capacidade, ordem e knobs do solver.
        config: Configuração (default: Config()).

    Returns:
        SolveReport: value, gap, iters, dual_value, converged, minimizer, trace.
    """
    config = config or Config()
    grid = prob.K.grid
    if prob.order.n != grid.n:
        raise PreconditionError("variational_capacity", f"ordem para n={prob.order.n} em grid com n={grid.n}")
    if prob.tol_gap <= 0:
        raise PreconditionError("variational_capacity", "tol_gap deve ser positivo")
    if prob.K.is_empty:
        return SolveReport(value=0.0, gap=0.0, iters=0, dual_value=0.0, converged=True,
                           minimizer=np.zeros(grid.shape))

    frame = _frame_mask(grid, config.frame_fraction)
    if (prob.K.mask & frame).any():
        raise PreconditionError(
            "variational_capacity", "o conjunto K toca a moldura de campo distante",
            suggestion="Use um conjunto menor ou reduza frame_fraction."
        )

    if prob.warm_start is not None:
        initial = np.asarray(prob.warm_start, dtype=np.float64).reshape(grid.shape)
        bound = max(config.gap_box, float(np.max(np.abs(initial))))
    else:
        initial = prob.K.mask.astype(np.float64)
        bound = config.gap_box

    terms = objective_terms(grid, prob.kind, prob.order, config)
    engine = solver.PrimalDualSolver(
        terms, prob.K.mask, frame, bound, config,
        max_iter=prob.max_iter, tol_gap=prob.tol_gap,
    )
    report = engine.solve(initial)
    report.details["kind"] = CapacityKind(prob.kind).value
    report.details["cells"] = prob.K.cell_count
    return report


def _problem(K: DyadicSet, kind: CapacityKind, order: FracOrder, config: Config,
             warm_start=None) -> CapacityProblem:
    return CapacityProblem(K=K, kind=CapacityKind(kind), order=order, max_iter=config.max_iter,
                           tol_gap=config.tol_gap, warm_start=warm_start)


# ============================================================================
# INTEGRAIS DE NÍVEIS
# ============================================================================

def dyadic_levels(u: ScalarField, level_floor: float) -> List[float]:
    """
    Níveis 2^k entre max(min+|u|, level_floor max|u|) e max|u|.

    O primeiro nível é 2^floor(log2 do piso), de modo que ele nunca excede o piso.
    """
    values = np.abs(u.values)
    top = float(values.max()) if values.size else 0.0
    if top == 0.0:
        return []
    floor_value = max(float(values[values > 0].min()), level_floor * top)
    first = math.floor(math.log2(floor_value))
    last = math.floor(math.log2(top))
    return [2.0 ** k for k in range(first, last + 1)]


def level_set_capacity_integral(u: ScalarField, kind: CapacityKind, order: FracOrder,
                                exponent: float = 1.0,
                                config: Optional[Config] = None) -> LevelIntegral:
    """
    (int_0^inf Cap({|u| > t^theta}) dt)^theta por níveis diádicos, theta = exponent.

    Com E_k = {|u| >= t_k}, para t em (t_{k-1}, t_k] vale
    E_k subset {|u| > t} subset E_{k-1}, o que dá o colchete
    sum (g(t_k) - g(t_{k-1})) Cap(E_k) <= integral <= sum (g(t_k) - g(t_{k-1})) Cap(E_{k-1}),
    com g(t) = t^{1/theta}. Abaixo do primeiro nível usa-se Cap(E_0) nos dois
    lados; acima do último, o colchete superior soma (g(max) - g(t_K)) Cap(E_K).

    Returns:
        LevelIntegral: ponto médio, colchete, níveis e capacidades por nível.
    """
    config = config or Config()
    if exponent <= 0:
        raise PreconditionError("level_set_capacity_integral", "expoente deve ser positivo")
    levels = dyadic_levels(u, config.level_floor)
    if not levels:
        return LevelIntegral(value=0.0, lower=0.0, upper=0.0)
    values = np.abs(u.values)
    top = float(values.max())

    def solve(level):
        K = DyadicSet(u.grid, values >= level)
        return variational_capacity(_problem(K, kind, order, config), config).value

    capacities = parallel_map(solve, levels)

    def g(t):
        return t ** (1.0 / exponent)

    lower = upper = g(levels[0]) * capacities[0]
    for k in range(1, len(levels)):
        step = g(levels[k]) - g(levels[k - 1])
        lower += step * capacities[k]
        upper += step * capacities[k - 1]
    upper += (g(top) - g(levels[-1])) * capacities[-1]
    lower, upper = lower ** exponent, upper ** exponent
    return LevelIntegral(value=0.5 * (lower + upper), lower=lower, upper=upper,
                         levels=levels, capacities=capacities)


def weak_capacitary_levels(u: ScalarField, kind: CapacityKind, order: FracOrder,
                           config: Optional[Config] = None,
                           warm_start: bool = True) -> List[Dict[str, float]]:
    """
    t Cap({u > t}) em cada nível diádico.

    Com warm_start a partida é u/t, viável para {u > t} (se u se anula na
    moldura), e t Cap <= [u]_X vale para o valor reportado por construção: o
    solver nunca devolve algo pior que a partida. Sem ela o solver parte do
    indicador de {u > t} e a desigualdade só é informativa com convergência.

    Returns:
        list: dicionários {level, capacity, product, dual_product, seminorm,
            converged}.
    """
    config = config or Config()
    kind = CapacityKind(kind)
    # [u]_X no mesmo funcional discreto que o solver minimiza
    seminorm = solver.objective(objective_terms(u.grid, kind, order, config), u.values)
    positive = ScalarField(u.grid, np.maximum(u.values, 0.0))
    levels = dyadic_levels(positive, config.level_floor)

    def solve(level):
        K = DyadicSet(u.grid, u.values > level)
        scaled = u.values / level
        if warm_start:
            report = variational_capacity(_problem(K, kind, order, config, scaled), config)
        else:
            # mesma caixa |u| <= B da partida a quente, para comparar os dois
            local = replace(config, gap_box=max(config.gap_box, float(np.max(np.abs(scaled)))))
            report = variational_capacity(_problem(K, kind, order, local), local)
        return {
            "level": level,
            "capacity": report.value,
            "product": level * report.value,
            "dual_product": level * report.dual_value,
            "seminorm": seminorm,
            "converged": report.converged,
        }

    return parallel_map(solve, levels)


# ============================================================================
# MEDIDAS
# ============================================================================

def measure_resolution(mu: DiscreteMeasure) -> float:
    """Menor distância entre átomos distintos (0 se houver um único ponto)."""
    points = np.unique(mu.atoms, axis=0)
    if points.shape[0] < 2:
        return 0.0
    distances, _ = cKDTree(points).query(points, k=2)
    return float(distances[:, 1].min())


def _ball_masses(tree: cKDTree, weights: np.ndarray, centers: np.ndarray, r: float) -> np.ndarray:
    radius = r * (1.0 - OPEN_BALL_SHRINK)
    if np.all(weights == weights[0]):
        counts = tree.query_ball_point(centers, radius, return_length=True)
        return np.asarray(counts, dtype=np.float64) * weights[0]
    lists = tree.query_ball_point(centers, radius)
    return np.array([weights[idx].sum() for idx in lists])


def _dyadic_centers(atoms: np.ndarray, r: float) -> np.ndarray:
    """Pontos k r a menos de r de algum átomo (em cada coordenada), sem repetição."""
    base = np.floor(atoms / r).astype(np.int64)
    corners = np.array(list(product((0, 1), repeat=atoms.shape[1])), dtype=np.int64)
    cells = (base[:, None, :] + corners[None, :, :]).reshape(-1, atoms.shape[1])
    return np.unique(cells, axis=0) * r


def measure_growth_profile(mu: DiscreteMeasure, beta: float,
                           start_factor: float = 1.0) -> List[Dict[str, float]]:
    """
    sup_x r^{beta-n} mu(B(x, r)) por raio, para r = start_factor delta 2^k.

    delta é a resolução da medida; os raios vão até cobrir o suporte.
    Com start_factor > 1 as escalas da própria rede de átomos ficam de fora.
    Os centros são os átomos e os pontos diádicos de espaçamento r vizinhos
    de algum átomo; os demais dão bolas vazias. Bolas abertas.
    """
    n = mu.dim
    if not 0.0 <= beta < n:
        raise InvalidOrderError("beta", beta, f"[0, {n})")
    mass = mu.weights > 0
    if not mass.any():
        return []
    atoms, weights = mu.atoms[mass], mu.weights[mass]
    delta = measure_resolution(DiscreteMeasure(atoms, weights))
    if delta == 0.0:
        return [{"radius": 0.0, "value": math.inf}]
    tree = cKDTree(atoms)
    diameter = float(np.linalg.norm(atoms.max(axis=0) - atoms.min(axis=0)))
    profile = []
    r = delta * max(1.0, float(start_factor))
    while True:
        centers = np.concatenate([atoms, _dyadic_centers(atoms, r)])
        value = float(_ball_masses(tree, weights, centers, r).max()) * r ** (beta - n)
        profile.append({"radius": r, "value": value})
        if r > diameter:
            break
        r *= 2.0
    return profile


def measure_growth_norm(mu: DiscreteMeasure, beta: float, start_factor: float = 1.0) -> float:
    """
    |||mu|||_{n-beta} = sup r^{beta-n} mu(B(x, r)) sobre a varredura diádica.

    Exato para medidas atômicas a menos da discretização dos raios (fator
    <= 2^{n-beta}). Medida com um único ponto de massa diverge: +inf.
    """
    profile = measure_growth_profile(mu, beta, start_factor)
    if not profile:
        return 0.0
    value = max(p["value"] for p in profile)
    return math.inf if value > GROWTH_DIVERGENCE else value


# ============================================================================
# TRAÇO
# ============================================================================

def evaluate_at_atoms(u: ScalarField, mu: DiscreteMeasure) -> np.ndarray:
    """u nos átomos por interpolação multilinear (0 fora do box)."""
    grid = u.grid
    if mu.dim != grid.n:
        raise PreconditionError("trace_ratio", f"medida em dimensao {mu.dim}, campo em {grid.n}")
    interpolator = RegularGridInterpolator(
        (grid.axis(),) * grid.n, u.values, method="linear", bounds_error=False, fill_value=0.0
    )
    return interpolator(mu.atoms)


def trace_ratio(mu: DiscreteMeasure, u: ScalarField, order: FracOrder, mode: TraceMode,
                kind: Optional[SeminormKind] = None) -> float:
    """
    Razão ||u||_{L^{n/(n-s)}(mu)} / [u]_X.

    strong: X = H^{s,1} (default); weak: norma L^{n/(n-s),inf}(mu) e
    X = H^{s,1}_- (default). 0/0 vale 0; seminorma nula com numerador não
    nulo vale +inf.

    Raises:
        MeanNotZeroError: Se u não tiver média zero (a seminorma não vê
            constantes e o numerador vê).
    """
    if mu.dim != u.grid.n:
        raise PreconditionError("trace_ratio", f"medida em dimensao {mu.dim}, campo em {u.grid.n}")
    if not u.mean_zero:
        raise MeanNotZeroError("trace_ratio", float(np.mean(u.values)))
    mode = TraceMode(mode)
    if kind is None:
        kind = SeminormKind.HS1 if mode == TraceMode.STRONG else SeminormKind.MINUS
    n, s = u.grid.n, order.s
    q = n / (n - s)
    values = evaluate_at_atoms(u, mu)
    if mode == TraceMode.STRONG:
        numerator = norms.mu_lp_norm(values, mu.weights, q)
    else:
        numerator = norms.mu_weak_norm(values, mu.weights, q)
    denominator = norms.seminorm(u, kind, order)
    if numerator == 0.0:
        return 0.0
    if denominator == 0.0:
        return math.inf
    return numerator / denominator
