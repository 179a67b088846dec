"""
Normas e seminormas de campos no grid.

Todas as integrais são somas de Riemann com peso h^n. As normas fracas e de
Lorentz usam os níveis efetivamente atingidos pelo campo, o que as torna
exatas para funções de grid (funções escada nas células).
"""

import math
from typing import Optional, Dict, Any

import numpy as np
from scipy.ndimage import gaussian_filter

from core.exceptions import InvalidNormError, MeanNotZeroError, InvalidOrderError
from core.models import (
    ScalarField, VectorField, FracOrder, NormKind, SeminormKind, HardyVariant, NormResult,
)
from core.grid import boundary_max
from core import fracops, quadrature


def _check_p(kind: str, p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise InvalidNormError(kind, f"expoente p={p} < 1")
    return p


def lp_norm(field: ScalarField, p: float) -> float:
    """
    ||u||_p = (sum |u|^p h^n)^{1/p}; p = inf devolve max |u|.

    Raises:
        InvalidNormError: Se p < 1.

    Example:
        >>> # gaussiana e^{-pi x^2} em n=1, p=1 -> 1
    """
    p = _check_p(NormKind.LP.value, p)
    values = np.abs(field.values)
    if math.isinf(p):
        return float(values.max()) if values.size else 0.0
    if p == 1.0:
        return float(values.sum() * field.grid.cell_volume)
    return float((values ** p).sum() * field.grid.cell_volume) ** (1.0 / p)


def vector_lp_norm(field: VectorField, p: float) -> float:
    """Soma das normas L^p das componentes."""
    return sum(lp_norm(field.component(j), p) for j in range(field.grid.n))


def mu_lp_norm(values: np.ndarray, weights: np.ndarray, q: float) -> float:
    """||u||_{L^q(mu)} com u dado nos átomos de mu."""
    q = _check_p(NormKind.LP.value, q)
    return float(np.sum(weights * np.abs(values) ** q)) ** (1.0 / q)


def mu_weak_norm(values: np.ndarray, weights: np.ndarray, q: float) -> float:
    """
    ||u||_{L^{q,inf}(mu)} = sup_v v mu({|u| >= v})^{1/q} sobre os níveis atingidos.
    """
    q = _check_p(NormKind.WEAK_LP.value, q)
    magnitude = np.abs(values)
    positive = magnitude > 0
    levels, inverse = np.unique(magnitude[positive], return_inverse=True)
    if levels.size == 0:
        return 0.0
    mass = np.bincount(inverse, weights=weights[positive], minlength=levels.size)
    at_least = np.cumsum(mass[::-1])[::-1]
    return float(np.max(levels * at_least ** (1.0 / q)))


def _levels(field: ScalarField):
    """Níveis positivos distintos de |u| (crescentes) e a medida de {|u| >= nível}."""
    values = np.abs(field.values).ravel()
    levels, counts = np.unique(values[values > 0], return_counts=True)
    at_least = np.cumsum(counts[::-1])[::-1]
    return levels, at_least * field.grid.cell_volume


def weak_lp_norm(field: ScalarField, p: float) -> float:
    """
    ||u||_{p,inf} = sup_t t |{|u| > t}|^{1/p}.

    O sup é atingido no limite t -> v^- de cada nível v, onde
    |{|u| > t}| = |{|u| >= v}|; por isso a avaliação usa >= nos níveis.
    """
    p = _check_p(NormKind.WEAK_LP.value, p)
    levels, measure = _levels(field)
    if levels.size == 0:
        return 0.0
    if math.isinf(p):
        return float(levels[-1])
    return float(np.max(levels * measure ** (1.0 / p)))


def lorentz_norm(field: ScalarField, order: FracOrder) -> float:
    """
    ||u||_{L^{n/(n-s),1}} = int_0^inf |{|u| > t}|^{(n-s)/n} dt, exata por níveis.
    """
    n, s = field.grid.n, order.s
    levels, measure = _levels(field)
    if levels.size == 0:
        return 0.0
    steps = np.diff(np.concatenate(([0.0], levels)))
    return float(np.sum(steps * measure ** ((n - s) / n)))


_PAIR_CHUNK = 1 << 22


def _inner_pair_sum(values: np.ndarray, s: float) -> float:
    """
    sum |u(x) - u(y)| |k|^{-n-s} sobre pares não ordenados de nós do box,
    k = y - x em unidades de h.

    Os deslocamentos dos eixos iniciais são percorridos (metade deles); o
    último eixo entra inteiro como matriz de pares (i, j), em blocos de linhas.
    """
    n = values.ndim
    N = values.shape[-1]
    index = np.arange(N)
    gap = (index[None, :] - index[:, None]).astype(np.float64)
    total = 0.0
    for lead in np.ndindex(*([2 * N - 1] * (n - 1))):
        shift = tuple(c - (N - 1) for c in lead)
        nonzero = [c for c in shift if c != 0]
        if nonzero and nonzero[0] < 0:
            continue
        r2 = float(sum(c * c for c in shift)) + gap ** 2
        if nonzero:
            weight = r2 ** (-(n + s) / 2.0)
        else:
            weight = np.where(gap > 0, np.maximum(r2, 1.0) ** (-(n + s) / 2.0), 0.0)
        src = values[tuple(slice(max(0, -c), N - max(0, c)) for c in shift)].reshape(-1, N)
        dst = values[tuple(slice(max(0, c), N - max(0, -c)) for c in shift)].reshape(-1, N)
        step = max(1, _PAIR_CHUNK // (N * N))
        for start in range(0, src.shape[0], step):
            a, b = src[start:start + step], dst[start:start + step]
            diff = np.abs(b[:, None, :] - a[:, :, None]).sum(axis=0)
            total += float(np.sum(diff * weight))
    return total


def gagliardo_seminorm(field: ScalarField, s: float, details: Optional[Dict[str, Any]] = None) -> float:
    """
    [u]_{W^{s,1}} = int int |u(x) - u(y)| / |x - y|^{n+s} dx dy.

    Pares dentro do box somados exatamente (cada par não ordenado uma vez,
    depois dobrado); pares com y fora do box (u = 0 lá) pela cauda de
    rede 2 sum |u(x)| T(x) h^n. A diagonal x = y fica de fora; uma cota da
    massa omitida vai em ``details['diagonal_mass_bound']``.
    """
    if not 0.0 < s < 1.0:
        raise InvalidOrderError("s", s, "(0, 1)")
    grid = field.grid
    n, h = grid.n, grid.h
    values = field.values
    inner = 2.0 * _inner_pair_sum(values, s) * h ** (n - s)
    outer = 2.0 * float(np.sum(np.abs(values) * quadrature.box_tail(grid, s))) * h ** n
    if details is not None:
        slope = sum(np.abs(quadrature.central_difference(values, h, j)) for j in range(n))
        bound = float(slope.sum()) * h ** n * quadrature.cell_moment(n, 1.0 - n - s) * h ** (1.0 - s)
        details["diagonal_mass_bound"] = bound
        details["inner_pairs"] = inner
        details["outer_pairs"] = outer
    return inner + outer


def _require_mean_zero(field: ScalarField, operation: str) -> None:
    if not field.mean_zero:
        raise MeanNotZeroError(operation, float(np.mean(field.values)))


def _riesz_h1(field: ScalarField) -> float:
    total = lp_norm(field, 1.0)
    for j in range(field.grid.n):
        total += lp_norm(fracops.riesz_transform(field, j), 1.0)
    return total


def maximal_function(field: ScalarField) -> np.ndarray:
    """
    max(|u|, sup_t |phi_t * u|) com phi(x) = e^{-pi |x|^2} e t = h 2^k, 0 <= k <= log2 N.

    |u| é o limite t -> 0 da média gaussiana.

    phi_t é a gaussiana de desvio t / sqrt(2 pi); o filtro usa modo 'wrap'
    em grids periódicos e extensão por zero nos demais.
    """
    grid = field.grid
    mode = "wrap" if grid.periodic else "constant"
    result = np.abs(field.values).copy()
    levels = int(round(math.log2(grid.N)))
    for k in range(levels + 1):
        sigma = 2.0 ** k / math.sqrt(2.0 * math.pi)
        smoothed = gaussian_filter(field.values, sigma=sigma, mode=mode, truncate=6.0)
        np.maximum(result, np.abs(smoothed), out=result)
    return result


def hardy_h1_norm(field: ScalarField, variant: HardyVariant = HardyVariant.RIESZ) -> float:
    """
    Norma de Hardy H^1.

    riesz: ||u||_1 + sum_j ||R_j u||_1. maximal: ||max(|u|, sup_t |phi_t * u|)||_1.

    Raises:
        MeanNotZeroError: Se o campo não tiver média zero.
    """
    _require_mean_zero(field, "hardy_h1_norm")
    if HardyVariant(variant) == HardyVariant.RIESZ:
        return _riesz_h1(field)
    return float(maximal_function(field).sum() * field.grid.cell_volume)


def bmo_norm(field: ScalarField) -> float:
    """
    Máximo, sobre todos os cubos diádicos do grid, da oscilação média
    (1/|Q|) int_Q |u - u_Q|.
    """
    grid = field.grid
    n, N = grid.n, grid.N
    best = 0.0
    block = 2
    while block <= N:
        count = N // block
        shape = []
        for _ in range(n):
            shape.extend([count, block])
        blocks = field.values.reshape(shape)
        inner_axes = tuple(range(1, 2 * n, 2))
        means = blocks.mean(axis=inner_axes, keepdims=True)
        oscillation = np.abs(blocks - means).mean(axis=inner_axes)
        best = max(best, float(oscillation.max()))
        block *= 2
    return best


def seminorm(field: ScalarField, kind: SeminormKind, order: FracOrder) -> float:
    """
    Seminormas de Riesz, pelo caminho espectral.

    hs1: ||A u||_1 + sum_j ||R_j A u||_1 com A = (-Delta)^{s/2}.
    hs1_plus: ||A u||_1. hs1_minus: sum_j ||grad^s_j u||_1.
    Constantes têm seminorma zero (o modo zero é anulado).
    """
    kind = SeminormKind(kind)
    if kind == SeminormKind.MINUS:
        return vector_lp_norm(fracops.frac_gradient(field, order), 1.0)
    laplacian = fracops.frac_laplacian(field, order)
    if kind == SeminormKind.PLUS:
        return lp_norm(laplacian, 1.0)
    return _riesz_h1(laplacian)


def truncation_report(field: ScalarField) -> Dict[str, Any]:
    """Extensão do truncamento: grid e maior |u| na camada de fronteira."""
    grid = field.grid
    return {
        "L": grid.L,
        "N": grid.N,
        "h": grid.h,
        "periodic": grid.periodic,
        "boundary_max_abs": boundary_max(field.values),
    }


def compute_norm(field: ScalarField, kind: NormKind, p: Optional[float] = None,
                 s: Optional[float] = None,
                 variant: HardyVariant = HardyVariant.RIESZ) -> NormResult:
    """
    Despacha o cálculo de uma norma pelo tipo.

    Raises:
        InvalidNormError: Se faltar p ou s para o tipo pedido.
    """
    kind = NormKind(kind)
    details = truncation_report(field)

    def need(name, value):
        if value is None:
            raise InvalidNormError(kind.value, f"parametro --{name} obrigatorio")
        return value

    if kind == NormKind.LP:
        value = lp_norm(field, need("p", p))
    elif kind == NormKind.WEAK_LP:
        value = weak_lp_norm(field, need("p", p))
    elif kind == NormKind.LORENTZ:
        value = lorentz_norm(field, fracops.make_frac_order(field.grid.n, need("s", s)))
    elif kind == NormKind.GAGLIARDO:
        value = gagliardo_seminorm(field, need("s", s), details)
    elif kind == NormKind.HARDY:
        value = hardy_h1_norm(field, variant)
        details["variant"] = HardyVariant(variant).value
    elif kind == NormKind.BMO:
        value = bmo_norm(field)
    else:
        order = fracops.make_frac_order(field.grid.n, need("s", s))
        value = seminorm(field, SeminormKind(kind.value), order)
    return NormResult(kind=kind.value, value=value, grid=field.grid, details=details)
