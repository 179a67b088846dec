"""
Suítes de verificação.

Cada suíte mede identidades exatas (resíduos contra tolerâncias) e medições
empíricas de desigualdades (constantes medidas, deriva sob refinamento e
dilatação, crescimento ao longo de famílias que concentram). Todo limiar vem
da Config e fica gravado no relatório junto com o valor medido.

Convenção de Fourier: f^(xi) = int f(x) e^{-2 pi i x.xi} dx, com
R_j de símbolo -i xi_j/|xi|. Nessa convenção grad^s = -R (-Delta)^{s/2} e
sum_j R_j g_j = -div((-Delta)^{-1/2} g).
"""

import math
from dataclasses import replace
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter

from core.config import Config
from core.exceptions import PreconditionError
from core.models import (
    Grid, ScalarField, TestFamily, FamilyKind, OperatorMethod, SuiteReport, Check, Verdict,
    CapacityKind, CapacityProblem, SeminormKind, TraceMode, DiscreteMeasure,
)
from core.grid import make_grid, default_grid, sample, subtract_mean, dilate, coordinates
from core.special import gamma_eval
from core.parallel import parallel_map
from core import fracops, norms, capacity

DEFAULT_S_LIST = (0.3, 0.5, 0.7)
DEFAULT_S = 0.5


# ============================================================================
# AUXILIARES
# ============================================================================

def _check(check_id: str, statement: str, measured, threshold, passed: bool) -> Check:
    return Check(
        id=check_id,
        statement=statement,
        measured=measured,
        threshold=threshold,
        verdict=Verdict.PASS if passed else Verdict.FAIL,
    )


def _max_abs(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if np.size(values) else 0.0


def _relative_max(actual: np.ndarray, expected: np.ndarray) -> float:
    """max|a - b| / max|b| (ou max|a - b| se b = 0)."""
    scale = _max_abs(expected)
    error = _max_abs(np.asarray(actual) - np.asarray(expected))
    return error / scale if scale > 0 else error


def _relative_l2(actual: np.ndarray, expected: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    if mask is not None:
        actual, expected = actual[mask], expected[mask]
    scale = float(np.linalg.norm(expected))
    error = float(np.linalg.norm(actual - expected))
    return error / scale if scale > 0 else error


def _drift(values: Sequence[float]) -> float:
    """max/min - 1 de uma lista de valores positivos."""
    values = [v for v in values if math.isfinite(v)]
    if not values or min(values) <= 0:
        return math.inf
    return max(values) / min(values) - 1.0


def _growth(values: Sequence[float]) -> float:
    """Menor razão entre valores consecutivos."""
    ratios = [b / a if a > 0 else math.inf for a, b in zip(values, values[1:])]
    return min(ratios) if ratios else math.inf


def _finite_positive(value: float) -> bool:
    return math.isfinite(value) and value > 0.0


def _run_tasks(tasks: List[Callable[[], List[Check]]]) -> List[Check]:
    """Executa as tarefas (em paralelo) e concatena na ordem canônica."""
    results = parallel_map(lambda task: task(), tasks)
    return [check for group in results for check in group]


def _gaussian(width: float = 1.0) -> TestFamily:
    return TestFamily(kind=FamilyKind.GAUSSIAN, width=width)


def _bump(width: float = 1.0) -> TestFamily:
    return TestFamily(kind=FamilyKind.BUMP, width=width)


def _bump_pair(width: float, separation: float) -> TestFamily:
    return TestFamily(kind=FamilyKind.SHIFTED_BUMP_PAIR, width=width, params={"separation": separation})


def _mollified(width: float) -> TestFamily:
    return TestFamily(kind=FamilyKind.RIESZ_KERNEL_MOLLIFIED, width=width)


# ============================================================================
# SUÍTE IDENTITY
# ============================================================================

def _identity_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    tol = config.inversion_tol_endpoint if s >= config.endpoint_s else config.inversion_tol
    checks = []
    for family in (_gaussian(1.0), _bump(1.0)):
        name = FamilyKind(family.kind).value
        phi = sample(family, grid)
        centered = subtract_mean(phi)
        laplacian = fracops.frac_laplacian(phi, order)

        recovered = fracops.riesz_potential(subtract_mean(laplacian), order)
        residue = _max_abs(recovered.values - centered.values) / _max_abs(phi.values)
        checks.append(_check(
            f"inversion.{name}.s={s}",
            "I_s((-Delta)^{s/2} phi) = phi modulo constantes",
            residue, tol, residue <= tol,
        ))

        frac_grad = fracops.frac_gradient(phi, order)
        gradient = fracops.gradient(phi)
        complement = fracops.make_frac_order(grid.n, 1.0 - s)
        residue = max(
            _relative_max(frac_grad.components[j],
                          fracops.riesz_potential(subtract_mean(gradient.component(j)), complement).values)
            for j in range(grid.n)
        )
        checks.append(_check(
            f"gradient_identity.{name}.s={s}",
            "grad^s phi = I_{1-s} grad phi",
            residue, config.gradient_tol, residue <= config.gradient_tol,
        ))

        composed = max(
            _relative_max(frac_grad.components[j], -fracops.riesz_transform(laplacian, j).values)
            for j in range(grid.n)
        )
        commuted = max(
            _relative_max(fracops.frac_laplacian(fracops.riesz_transform(phi, j), order).values,
                          fracops.riesz_transform(laplacian, j).values)
            for j in range(grid.n)
        )
        residue = max(composed, commuted)
        checks.append(_check(
            f"riesz_composition.{name}.s={s}",
            "grad^s = -R (-Delta)^{s/2} e R_j (-Delta)^{s/2} = (-Delta)^{s/2} R_j",
            residue, config.commutation_tol, residue <= config.commutation_tol,
        ))

        half = fracops.symbol_power(grid, s / 2.0)
        twice, _ = fracops.spectral_apply(fracops.spectral_apply(phi, half)[0], half)
        residue = _relative_max(twice.values, laplacian.values)
        checks.append(_check(
            f"semigroup.{name}.s={s}",
            "(-Delta)^{s/4} (-Delta)^{s/4} = (-Delta)^{s/2}",
            residue, config.commutation_tol, residue <= config.commutation_tol,
        ))

        _, imaginary = fracops.spectral_apply(phi, fracops.symbol_power(grid, s))
        for j in range(grid.n):
            imaginary = max(imaginary, fracops.spectral_apply(phi, fracops.riesz_symbol(grid, j))[1])
        residue = imaginary / _max_abs(phi.values)
        checks.append(_check(
            f"realness.{name}.s={s}",
            "multiplicadores espectrais levam campos reais em campos reais",
            residue, config.realness_tol, residue <= config.realness_tol,
        ))

        doubled = fracops.frac_laplacian(phi.with_values(2.0 * phi.values), order)
        residue = _relative_max(doubled.values, 2.0 * laplacian.values)
        checks.append(_check(
            f"homogeneity.{name}.s={s}",
            "(-Delta)^{s/2}(2 phi) = 2 (-Delta)^{s/2} phi",
            residue, config.homogeneity_tol, residue <= config.homogeneity_tol,
        ))

    # gaussiana: sem massa no plano de Nyquist, onde R_j é zerado
    centered = subtract_mean(sample(_gaussian(1.0), grid))
    square = sum(fracops.riesz_transform(fracops.riesz_transform(centered, j), j).values
                 for j in range(grid.n))
    residue = _relative_max(square, -centered.values)
    checks.append(_check(
        f"riesz_square.s={s}",
        "sum_j R_j R_j f = -f para f de media zero",
        residue, config.riesz_square_tol, residue <= config.riesz_square_tol,
    ))
    return checks


def _zero_input_checks(grid: Grid, s: float) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    zero = ScalarField(grid, np.zeros(grid.shape))
    outputs = [
        fracops.frac_laplacian(zero, order).values,
        fracops.riesz_potential(zero, order).values,
        fracops.frac_laplacian(zero, order, OperatorMethod.SINGULAR).values,
        fracops.riesz_potential(zero, order, OperatorMethod.SINGULAR).values,
    ]
    outputs.extend(fracops.frac_gradient(zero, order).components)
    outputs.extend(fracops.riesz_transform_all(zero).components)
    residue = max(_max_abs(v) for v in outputs)
    return [_check("zero_input", "operadores lineares levam 0 em 0", residue, 0.0, residue == 0.0)]


def _cross_method_checks(s: float, config: Config) -> List[Check]:
    errors = []
    for N in (1024, 2048):
        grid = make_grid(1, N, 16.0)
        order = fracops.make_frac_order(1, s)
        phi = sample(_gaussian(1.0), grid)
        spectral = fracops.frac_laplacian(phi, order).values
        singular = fracops.frac_laplacian(phi, order, OperatorMethod.SINGULAR).values
        errors.append(_relative_l2(singular, spectral))
    tol = config.cross_method_tol
    return [
        _check(f"cross_method.s={s}",
               "(-Delta)^{s/2} espectral = singular no toro (N=1024)",
               errors[0], tol, errors[0] <= tol),
        _check(f"cross_method_refinement.s={s}",
               "o desacordo entre metodos cai de N=1024 para N=2048",
               errors, "erro(2N) < erro(N)", errors[1] < errors[0]),
    ]


def _liouville_checks(s: float, config: Config) -> List[Check]:
    grid = make_grid(1, 4096, 16.0)
    fit = fracops.fit_liouville_constants(grid, s)
    tol = config.liouville_residual
    plus_gap = abs(fit.c_plus / fit.kernel_c_plus - 1.0)
    minus_gap = abs(fit.c_minus / fit.kernel_c_minus - 1.0)
    return [
        _check(f"liouville_plus.s={s}",
               "(-Delta)^{s/2} = c_+ (d_+ + d_-) em n = 1",
               {"residual": fit.residual_plus, "c_plus": fit.c_plus, "kernel_c_plus": fit.kernel_c_plus},
               tol, fit.residual_plus <= tol),
        _check(f"liouville_minus.s={s}",
               "grad^s = c_- (d_+ - d_-) em n = 1",
               {"residual": fit.residual_minus, "c_minus": fit.c_minus, "kernel_c_minus": fit.kernel_c_minus},
               tol, fit.residual_minus <= tol),
        _check(f"liouville_constants.s={s}",
               "constantes ajustadas c_+ e c_- coincidem com as dos kernels",
               max(plus_gap, minus_gap), config.cross_method_tol,
               max(plus_gap, minus_gap) <= config.cross_method_tol),
    ]


def hilbert_log_error(config: Config) -> float:
    """
    max |R 1_{[-1,1]}(x) - (1/pi) ln|(x+1)/(x-1)|| em |x| <= 2, |x +- 1| >= 1/4.

    O indicador usa valor 1/2 nos nós da fronteira.
    """
    grid = make_grid(1, config.hilbert_N, 16.0)
    indicator = sample(TestFamily(kind=FamilyKind.INDICATOR_BALL, radius=1.0, params={"edge": "midpoint"}), grid)
    transformed = fracops.riesz_transform(indicator, 0).values
    x = grid.axis()
    window = (np.abs(x) <= 2.0) & (np.abs(x - 1.0) >= 0.25) & (np.abs(x + 1.0) >= 0.25)
    exact = np.log(np.abs((x[window] + 1.0) / (x[window] - 1.0))) / math.pi
    return _max_abs(transformed[window] - exact)


def _hilbert_checks(config: Config) -> List[Check]:
    error = hilbert_log_error(config)
    return [_check("hilbert_log",
                   "pi H(1_{[-1,1]})(x) = ln|(x+1)/(x-1)|",
                   error, config.hilbert_tol, error <= config.hilbert_tol)]


def run_identity_suite(grid: Optional[Grid] = None, s_list: Optional[Sequence[float]] = None,
                       config: Optional[Config] = None) -> SuiteReport:
    """
    Identidades exatas: inversão, gradiente fracionário, composição e
    comutação com R_j, semigrupo, realidade, homogeneidade, R_j^2, entrada
    nula, acordo entre métodos, forma de Liouville e identidade de Hilbert.
    """
    config = config or Config()
    grid = grid or default_suite_grid("identity", config)
    s_list = [float(s) for s in (s_list or DEFAULT_S_LIST)]
    tasks = [partial(_identity_checks, grid, s, config) for s in s_list]
    tasks.append(partial(_zero_input_checks, grid, s_list[0]))
    tasks.extend(partial(_cross_method_checks, s, config) for s in s_list)
    tasks.extend(partial(_liouville_checks, s, config) for s in s_list)
    tasks.append(partial(_hilbert_checks, config))
    return SuiteReport(
        suite="identity",
        environment=_environment(grid, s_list, config, (
            "inversion_tol", "inversion_tol_endpoint", "endpoint_s", "gradient_tol",
            "commutation_tol", "riesz_square_tol", "realness_tol", "homogeneity_tol",
            "cross_method_tol", "liouville_residual", "hilbert_N", "hilbert_tol",
        )),
        checks=_run_tasks(tasks),
    )


# ============================================================================
# SUÍTE STEIN-WEISS
# ============================================================================

def stein_weiss_ratio(f: ScalarField, s: float) -> float:
    """||I_s f||_{n/(n-s)} / ||f||_{H^1} para f de média zero."""
    n = f.grid.n
    order = fracops.make_frac_order(n, s)
    potential = fracops.riesz_potential(f, order)
    return norms.lp_norm(potential, n / (n - s)) / norms.hardy_h1_norm(f)


def _stein_weiss_family() -> List[TestFamily]:
    return [_bump_pair(1.0, 1.5), _bump_pair(2.0, 3.0)]


def _stein_weiss_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    def sup_ratio(g):
        return max(stein_weiss_ratio(subtract_mean(sample(fam, g)), s) for fam in _stein_weiss_family())

    coarse = sup_ratio(grid)
    fine = sup_ratio(make_grid(grid.n, 2 * grid.N, grid.L, grid.periodic))
    drift = abs(fine / coarse - 1.0)

    base = subtract_mean(sample(_bump_pair(1.0, 1.5), grid))
    ratio = stein_weiss_ratio(base, s)
    scaled = stein_weiss_ratio(base.with_values(2.0 * base.values), s)
    homogeneity = abs(scaled / ratio - 1.0)

    dilated = [stein_weiss_ratio(subtract_mean(sample(dilate(_bump_pair(1.0, 1.5), r, grid.n), grid)), s)
               for r in (0.5, 1.0, 2.0)]
    return [
        _check(f"stein_weiss_constant.s={s}",
               "||I_s f||_{n/(n-s)} <= C ||f||_{H^1}: constante medida finita",
               coarse, "finito e positivo", _finite_positive(coarse)),
        _check(f"stein_weiss_refinement.s={s}",
               "constante de Stein-Weiss estavel de N para 2N",
               drift, config.refinement_drift, drift <= config.refinement_drift),
        _check(f"stein_weiss_homogeneity.s={s}",
               "razao invariante por f -> 2f",
               homogeneity, config.homogeneity_tol, homogeneity <= config.homogeneity_tol),
        _check(f"stein_weiss_dilation.s={s}",
               "razao invariante por dilatacao r em {1/2, 1, 2}",
               _drift(dilated), config.dilation_drift, _drift(dilated) <= config.dilation_drift),
    ]


def run_stein_weiss_suite(grid: Optional[Grid] = None, s_list: Optional[Sequence[float]] = None,
                          config: Optional[Config] = None) -> SuiteReport:
    """Desigualdade de Stein-Weiss em p = 1: constante finita e estável."""
    config = config or Config()
    grid = grid or default_suite_grid("stein-weiss", config)
    s_list = [float(s) for s in (s_list or DEFAULT_S_LIST)]
    tasks = [partial(_stein_weiss_checks, grid, s, config) for s in s_list]
    return SuiteReport(
        suite="stein-weiss",
        environment=_environment(grid, s_list, config,
                                 ("refinement_drift", "dilation_drift", "homogeneity_tol")),
        checks=_run_tasks(tasks),
    )


# ============================================================================
# SUÍTE WEAK-TYPE
# ============================================================================

WEAK_EPSILONS = (1.0, 0.5, 0.25, 0.125)


def weak_type_ratios(f: ScalarField, s: float) -> Dict[str, float]:
    """
    Razões fraca e forte de I_s f contra ||f||_1, e a fraca contra ||R f||_1.

    Em grid periódico I_s é espectral e f deve ter média zero; em grid aberto
    I_s é o singular com extensão por zero (R^n) e a razão contra R f não
    é calculada.
    """
    n = f.grid.n
    order = fracops.make_frac_order(n, s)
    q = n / (n - s)
    method = OperatorMethod.SPECTRAL if f.grid.periodic else OperatorMethod.SINGULAR
    potential = fracops.riesz_potential(f, order, method)
    weak = norms.weak_lp_norm(potential, q)
    mass = norms.lp_norm(f, 1.0)
    ratios = {"weak": weak / mass, "strong": norms.lp_norm(potential, q) / mass}
    if f.grid.periodic:
        riesz = norms.vector_lp_norm(fracops.riesz_transform_all(f), 1.0)
        ratios["weak_riesz"] = weak / riesz if riesz > 0 else math.inf
    return ratios


def strong_log_increment(n: int, s: float) -> float:
    """
    Acréscimo de ||I_s f_eps||_q^q a cada eps/2, q = n/(n-s), para massa 1.

    I_s f_eps tende a c |x|^{s-n} e |x|^{(s-n) q} = |x|^{-n}: cada oitava de
    raios contribui ln 2 |S^{n-1}| c^q.
    """
    q = n / (n - s)
    sphere = 2.0 * math.pi ** (n / 2.0) / gamma_eval(n / 2.0)
    return math.log(2.0) * sphere * fracops.make_frac_order(n, s).c_ns ** q


def _weak_type_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    n = grid.n
    q = n / (n - s)
    # massa pontual em R^n: grid aberto, sem subtração de média
    open_grid = make_grid(n, grid.N, grid.L, periodic=False)
    ratios = [weak_type_ratios(sample(_mollified(eps), open_grid), s) for eps in WEAK_EPSILONS]
    weak = [r["weak"] for r in ratios]
    strong = [r["strong"] for r in ratios]
    riesz = [weak_type_ratios(subtract_mean(sample(_mollified(eps), grid)), s)["weak_riesz"]
             for eps in WEAK_EPSILONS]

    base = sample(_mollified(1.0), open_grid)
    scaled = weak_type_ratios(base.with_values(2.0 * base.values), s)["weak"]
    homogeneity = abs(scaled / weak[0] - 1.0)

    expected = strong_log_increment(n, s)
    increments = [(b ** q - a ** q) / expected for a, b in zip(strong, strong[1:])]
    law_gap = max(abs(x - 1.0) for x in increments)
    return [
        _check(f"weak_constant.s={s}",
               "||I_s f||_{L^{n/(n-s),inf}} <= C ||f||_1: constante medida finita",
               max(weak), "finito e positivo", _finite_positive(max(weak))),
        _check(f"weak_stability.s={s}",
               "razao fraca estavel na familia eps em {1, 1/2, 1/4, 1/8}",
               _drift(weak), config.weak_drift, _drift(weak) <= config.weak_drift),
        _check(f"weak_riesz_constant.s={s}",
               "||I_s f||_{L^{n/(n-s),inf}} <= C ||R f||_1: razao medida finita",
               max(riesz), "finito e positivo", _finite_positive(max(riesz))),
        _check(f"weak_homogeneity.s={s}",
               "razao fraca invariante por f -> 2f",
               homogeneity, config.homogeneity_tol, homogeneity <= config.homogeneity_tol),
        _check(f"strong_failure.s={s}",
               "||I_s f_eps||_q^q cresce ln2 |S^{n-1}| c_{n,s}^q a cada eps/2 (I_s delta fora de L^q)",
               {"strong": strong, "increments": increments, "growth": [b / a for a, b in zip(strong, strong[1:])]},
               config.strong_log_tol, law_gap <= config.strong_log_tol),
    ]


def run_weak_type_suite(grid: Optional[Grid] = None, s: float = DEFAULT_S,
                        config: Optional[Config] = None) -> SuiteReport:
    """
    Tipo fraco de I_s em L^1 e falha do tipo forte.

    As razões contra ||f||_1 usam massas pontuais mollificadas em R^n (grid
    aberto); a razão contra ||R f||_1 usa o toro com média subtraída.
    Em n = 1 o grid é refinado 4 vezes para resolver eps = 1/8.
    """
    config = config or Config()
    grid = grid or default_suite_grid("weak-type", config)
    N = 4 * grid.N if grid.n == 1 else grid.N
    grid = make_grid(grid.n, N, grid.L)
    return SuiteReport(
        suite="weak-type",
        environment=_environment(grid, [s], config, ("weak_drift", "strong_log_tol", "homogeneity_tol")),
        checks=_weak_type_checks(grid, float(s), config),
    )


# ============================================================================
# SUÍTE CAPACITARY
# ============================================================================

def capacity_grid(config: Config) -> Grid:
    """Grid padrão das capacidades (capacity_n, capacity_N, capacity_L)."""
    return make_grid(config.capacity_n, config.capacity_N, config.capacity_L)


def default_suite_grid(name: str, config: Config) -> Grid:
    """
    Grid padrão de cada suíte.

    identity, stein-weiss e weak-type: n = 1; capacitary: grid de
    capacidade; trace: grid de capacidade com 4N; fs: n = 2 com fs_N;
    divergence: n = 2.
    """
    if name == "capacitary":
        return capacity_grid(config)
    if name == "trace":
        base = capacity_grid(config)
        return make_grid(base.n, 4 * base.N, base.L)
    if name == "fs":
        return make_grid(2, config.fs_N, 16.0)
    if name == "divergence":
        return default_grid(2)
    return default_grid(1)


def _solve(K, kind: CapacityKind, order, config: Config, warm_start=None):
    problem = CapacityProblem(K=K, kind=CapacityKind(kind), order=order, max_iter=config.max_iter,
                              tol_gap=config.tol_gap, warm_start=warm_start)
    return capacity.variational_capacity(problem, config)


def _certified(report, config: Config) -> bool:
    """Convergiu e o gap final cabe em tol_gap vezes o valor."""
    return bool(report.converged) and report.gap <= config.tol_gap * report.value


def ordering_sets(grid: Grid, count: int = 10):
    """
    Conjuntos de teste determinísticos: uniões de dois cubos com centros
    dados pela sequência de Weyl frac(k * golden) em [-1.5, 1.5]^n.
    """
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    sets = []
    for k in range(count):
        mask = np.zeros(grid.shape, dtype=bool)
        for part in range(2):
            index = 2 * k + part
            center = [3.0 * ((index * (j + 1) * golden) % 1.0) - 1.5 for j in range(grid.n)]
            side = 0.25 if (index % 3) else 0.5
            mask |= capacity.cube_set(grid, side, center).mask
        sets.append(capacity.dyadic_set_from_mask(grid, mask))
    return sets


def _ball_scaling_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    radii = (0.25, 0.5, 1.0)
    reports = [_solve(capacity.ball_set(grid, r), CapacityKind.HS1, order, config) for r in radii]
    scaled = [rep.value / r ** (grid.n - s) for rep, r in zip(reports, radii)]
    drift = _drift(scaled)
    certified = all(_certified(rep, config) for rep in reports)
    return [_check(
        f"ball_scaling.s={s}",
        "Cap_{H^{s,1}}(B(0,r)) = r^{n-s} Cap_{H^{s,1}}(B(0,1)), com gap <= tol_gap Cap",
        {"normalized": scaled, "gaps": [rep.gap for rep in reports],
         "converged": [rep.converged for rep in reports], "iters": [rep.iters for rep in reports]},
        {"drift": config.ball_drift, "tol_gap": config.tol_gap},
        certified and drift <= config.ball_drift,
    )]


def _monotonicity_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    small, large = capacity.cube_set(grid, 0.5), capacity.cube_set(grid, 1.0)
    checks = []
    for kind in CapacityKind:
        inner = _solve(small, kind, order, config)
        outer = _solve(large, kind, order, config)
        checks.append(_check(
            f"monotonicity.{kind.value}.s={s}",
            "K1 contido em K2 implica Cap(K1) <= Cap(K2)",
            {"values": [inner.value, outer.value], "gaps": [inner.gap, outer.gap]},
            "Cap(K1) (1 - tol_gap) <= Cap(K2), gaps <= tol_gap Cap",
            _certified(inner, config) and _certified(outer, config)
            and inner.value * (1.0 - config.tol_gap) <= outer.value,
        ))
    alpha = grid.n - s
    contents = [capacity.hausdorff_content(small, alpha), capacity.hausdorff_content(large, alpha)]
    checks.append(_check(
        f"monotonicity.content.s={s}",
        "K1 contido em K2 implica Lambda^{n-s}(K1) <= Lambda^{n-s}(K2)",
        contents, "Lambda(K1) <= Lambda(K2)", contents[0] <= contents[1],
    ))
    return checks


def _ordering_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    alpha = grid.n - s

    def solve_all(K):
        full = _solve(K, CapacityKind.HS1, order, config)
        plus = _solve(K, CapacityKind.HS1_PLUS, order, config)
        minus = _solve(K, CapacityKind.HS1_MINUS, order, config)
        return full, plus, minus, capacity.hausdorff_content(K, alpha)

    results = [solve_all(K) for K in ordering_sets(grid)]
    certified = all(plus.dual_value <= full.value and minus.dual_value <= full.value
                    for full, plus, minus, _ in results)
    constants = [full.value / content for full, _, _, content in results]
    return [
        _check(f"capacity_ordering.s={s}",
               "max(Cap_{H^{s,1}_+}, Cap_{H^{s,1}_-}) <= Cap_{H^{s,1}} (limitante dual <= valor)",
               [[plus.value, minus.value, full.value] for full, plus, minus, _ in results],
               "dual(+/-) <= Cap_{H^{s,1}}", certified),
        _check(f"capacity_content.s={s}",
               "Cap_{H^{s,1}} <= C Lambda^{n-s}: constante medida finita",
               {"constant": max(constants), "comparability": capacity.content_comparability(grid.n, alpha)},
               "finito e positivo", _finite_positive(max(constants))),
    ]


def _ws1_content_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    ratios = []
    for r in (0.25, 0.5, 1.0):
        K = capacity.ball_set(grid, r)
        ratios.append(_solve(K, CapacityKind.WS1, order, config).value
                      / capacity.hausdorff_content(K, grid.n - s))
    return [_check(
        f"ws1_content.s={s}",
        "Cap_{W^{s,1}} comparavel a Lambda^{n-s}: razoes medidas finitas",
        ratios, "finitas e positivas", all(_finite_positive(r) for r in ratios),
    )]


def _strong_integral_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    def ratio(g):
        order = fracops.make_frac_order(g.n, s)
        u = sample(_bump(1.0), g)
        integral = capacity.level_set_capacity_integral(u, CapacityKind.HS1, order, config=config)
        return integral, integral.value / norms.seminorm(u, SeminormKind.HS1, order)

    coarse_grid = make_grid(grid.n, grid.N // 2, grid.L, grid.periodic)
    integral, fine = ratio(grid)
    _, coarse = ratio(coarse_grid)
    drift = abs(fine / coarse - 1.0)
    return [
        _check(f"strong_capacitary.s={s}",
               "int_0^inf Cap_{H^{s,1}}({|u| > t}) dt <= C [u]_{H^{s,1}}: constante medida finita",
               {"ratio": fine, "lower": integral.lower, "upper": integral.upper},
               "finito e positivo", _finite_positive(fine)),
        _check(f"strong_capacitary_refinement.s={s}",
               "constante capacitaria estavel de N/2 para N",
               drift, config.level_drift, drift <= config.level_drift),
    ]


def _weak_capacitary_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    families = [_bump(1.0), _gaussian(0.8), _bump_pair(0.75, 1.0)]
    checks = []
    for kind in (CapacityKind.HS1_PLUS, CapacityKind.HS1_MINUS):
        worst = 0.0
        for family in families:
            u = sample(family, grid)
            for level in capacity.weak_capacitary_levels(u, kind, order, config):
                worst = max(worst, level["product"] / level["seminorm"])
        limit = 1.0 + config.weak_capacitary_slack
        checks.append(_check(
            f"weak_capacitary.{kind.value}.s={s}",
            "t Cap({u > t}) <= [u] em todo nivel diadico",
            worst, limit, worst <= limit,
        ))

        # partida fria: o limitante vem do solver, não da partida viável u/t
        cold = capacity.weak_capacitary_levels(sample(families[0], grid), kind, order, config, warm_start=False)
        converged = all(level["converged"] for level in cold)
        cold_worst = max((level["product"] / level["seminorm"] for level in cold), default=0.0)
        dual_worst = max((level["dual_product"] / level["seminorm"] for level in cold), default=0.0)
        cold_limit = 1.0 / (1.0 - config.tol_gap) + config.weak_capacitary_slack
        checks.append(_check(
            f"weak_capacitary_cold.{kind.value}.s={s}",
            "t Cap({u > t}) <= [u] com partida fria do indicador, resolucoes certificadas",
            {"worst": cold_worst, "dual_worst": dual_worst, "converged": converged},
            {"worst": cold_limit, "dual_worst": 1.0 + config.weak_capacitary_slack},
            converged and cold_worst <= cold_limit and dual_worst <= 1.0 + config.weak_capacitary_slack,
        ))
    return checks


def _endpoint_strong_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    u = sample(_bump(1.0), grid)
    seminorm = norms.seminorm(u, SeminormKind.MINUS, order)
    measured = {}
    for label, s_hat in (("half", s / 2.0), ("near", 0.9 * s)):
        exponent = (grid.n - s) / (grid.n - s_hat)
        integral = capacity.level_set_capacity_integral(
            u, CapacityKind.HS1_MINUS, fracops.make_frac_order(grid.n, s_hat), exponent, config)
        measured[label] = {"s_hat": s_hat, "ratio": integral.value / seminorm}
    ok = all(_finite_positive(m["ratio"]) for m in measured.values())
    return [_check(
        f"strong_lower_order.s={s}",
        "(int Cap_{H^{s^,1}_-}({|u| > t^theta}) dt)^theta <= C [u]_{H^{s,1}_-}, s^ < s",
        measured, "finito e positivo", ok,
    )]


def _plus_failure_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    order = fracops.make_frac_order(grid.n, s)
    potentials = [fracops.riesz_potential(subtract_mean(sample(_mollified(eps), grid)), order)
                  for eps in (1.0, 0.5, 0.25)]
    # piso absoluto comum: metade do máximo do membro mais largo
    floor_value = 0.5 * _max_abs(potentials[0].values)
    ratios = []
    for u in potentials:
        local = replace(config, level_floor=floor_value / _max_abs(u.values))
        integral = capacity.level_set_capacity_integral(u, CapacityKind.HS1_PLUS, order, config=local)
        ratios.append(integral.value / norms.seminorm(u, SeminormKind.PLUS, order))
    return [_check(
        f"plus_strong_failure.s={s}",
        "int Cap_{H^{s,1}_+}({|u_eps| > t}) dt / [u_eps]_{H^{s,1}_+} cresce a cada eps/2",
        ratios, config.capacitary_growth, _growth(ratios) >= config.capacitary_growth,
    )]


def run_capacitary_suite(grid: Optional[Grid] = None, s: float = DEFAULT_S,
                         config: Optional[Config] = None) -> SuiteReport:
    """Capacidades: escala, monotonia, ordenação, integrais fortes e estimativas fracas."""
    config = config or Config()
    grid = grid or default_suite_grid("capacitary", config)
    s = float(s)
    tasks = [
        partial(_ball_scaling_checks, grid, s, config),
        partial(_monotonicity_checks, grid, s, config),
        partial(_ordering_checks, grid, s, config),
        partial(_ws1_content_checks, grid, s, config),
        partial(_strong_integral_checks, grid, s, config),
        partial(_weak_capacitary_checks, grid, s, config),
        partial(_endpoint_strong_checks, grid, s, config),
        partial(_plus_failure_checks, grid, s, config),
    ]
    return SuiteReport(
        suite="capacitary",
        environment=_environment(grid, [s], config, (
            "tol_gap", "max_iter", "check_every", "gap_box", "frame_fraction", "ws1_radius",
            "level_floor", "ball_drift", "level_drift", "capacitary_growth", "weak_capacitary_slack",
        )),
        checks=_run_tasks(tasks),
    )


# ============================================================================
# SUÍTE TRACE
# ============================================================================

TRACE_SCALES = (1.0, 0.5, 0.25)

# raios abaixo de 8 espaçamentos medem a rede de átomos, não a medida
GROWTH_START_FACTOR = 8.0


def mean_zero_bump(grid: Grid, radius: float) -> ScalarField:
    """
    bump(radius/2) - 2^{-n} bump(radius): massa nula, suporte de raio ``radius``.

    Sem massa, (-Delta)^{s/2} u decai como |x|^{-n-s-2} longe do suporte e a
    seminorma no toro coincide com a de R^n a menos de (radius/L)^{s+2}.
    """
    inner = sample(_bump(radius / 2.0), grid).values
    outer = sample(_bump(radius), grid).values
    return subtract_mean(ScalarField(grid, inner - outer / 2.0 ** grid.n))


def _trace_ratios(mu: DiscreteMeasure, grid: Grid, s: float, mode: TraceMode) -> List[float]:
    order = fracops.make_frac_order(grid.n, s)
    return [capacity.trace_ratio(mu, mean_zero_bump(grid, r), order, mode) for r in TRACE_SCALES]


def _trace_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    area = capacity.square_measure(grid.n, side=2.0, spacing=1.0 / 64)
    segment = capacity.segment_measure(grid.n, length=2.0, spacing=1.0 / 128)
    empty = DiscreteMeasure(area.atoms, np.zeros_like(area.weights))

    area_strong = _trace_ratios(area, grid, s, TraceMode.STRONG)
    area_weak = _trace_ratios(area, grid, s, TraceMode.WEAK)
    segment_strong = _trace_ratios(segment, grid, s, TraceMode.STRONG)
    zero = _trace_ratios(empty, grid, s, TraceMode.STRONG)

    area_growth = capacity.measure_growth_norm(area, 0.0, GROWTH_START_FACTOR)
    segment_growth = capacity.measure_growth_norm(segment, 1.0, GROWTH_START_FACTOR)
    area_error = abs(area_growth / math.pi - 1.0)
    segment_error = abs(segment_growth / 2.0 - 1.0)
    return [
        _check(f"trace_area_strong.s={s}",
               "mu de area: ||u||_{L^{n/(n-s)}(mu)} <= C [u]_{H^{s,1}} com razoes limitadas",
               area_strong, config.trace_drift, _drift(area_strong) <= config.trace_drift),
        _check(f"trace_area_weak.s={s}",
               "mu de area: ||u||_{L^{n/(n-s),inf}(mu)} <= C [u]_{H^{s,1}_-} com razoes limitadas",
               area_weak, config.trace_drift, _drift(area_weak) <= config.trace_drift),
        _check(f"trace_segment_growth.s={s}",
               "mu de segmento: razoes crescem a cada escala/2 (condicao isocapacitaria falha)",
               segment_strong, config.trace_growth, _growth(segment_strong) >= config.trace_growth),
        _check("trace_zero_measure",
               "mu = 0 da razoes nulas",
               zero, 0.0, all(r == 0.0 for r in zero)),
        _check("growth_area",
               "|||mu_area|||_2 ~ pi (mu(B) ~ pi r^2)",
               area_growth, config.trace_drift, area_error <= config.trace_drift),
        _check("growth_segment",
               "|||mu_segmento|||_1 ~ 2 (mu(B) ~ 2r)",
               segment_growth, config.trace_drift, segment_error <= config.trace_drift),
    ]


def run_trace_suite(grid: Optional[Grid] = None, s: float = DEFAULT_S,
                    config: Optional[Config] = None) -> SuiteReport:
    """
    Dicotomia do traço: medida de área (razões limitadas) contra medida de
    segmento (razões crescentes), sobre bumps de massa nula nas escalas
    TRACE_SCALES. O grid padrão é o de capacidade com 4N.
    """
    config = config or Config()
    grid = grid or default_suite_grid("trace", config)
    if grid.n != 2:
        raise PreconditionError("run_trace_suite", "a suite trace exige n = 2")
    return SuiteReport(
        suite="trace",
        environment=_environment(grid, [s], config, ("trace_drift", "trace_growth")),
        checks=_trace_checks(grid, float(s), config),
    )


# ============================================================================
# SUÍTES FS E DIVERGENCE
# ============================================================================

def log_decomposition_constant(n: int) -> float:
    """
    c_n com ln|x| = sum_j R_j(c_n x_j/|x|) módulo constantes.

    Com R_j de símbolo -i xi_j/|xi|: c_n = sqrt(pi) Gamma(n/2) / (2 Gamma((n+1)/2)).
    Em n = 1 dá pi/2, ou seja, H(sgn) = (2/pi) ln|x|; em n = 2 dá 1.
    """
    return math.sqrt(math.pi) * gamma_eval(n / 2.0) / (2.0 * gamma_eval((n + 1) / 2.0))


def _log_reconstruction(grid: Grid):
    """sum_j R_j(x_j/|x|), ln|x| e a máscara do anel 0.5 <= |x| <= L/8."""
    coords = coordinates(grid)
    r = np.sqrt(sum(x * x for x in coords))
    safe = np.where(r == 0.0, 1.0, r)
    total = np.zeros(grid.shape)
    for j, x in enumerate(coords):
        g = np.where(r == 0.0, 0.0, x / safe)
        total += fracops.riesz_transform(ScalarField(grid, g), j).values
    # longe da costura do toro, onde g_j salta
    annulus = (r >= 0.5) & (r <= grid.L / 8.0)
    reconstructed = total[annulus] - total[annulus].mean()
    expected = np.log(r[annulus]) - np.log(r[annulus]).mean()
    return reconstructed, expected


def log_decomposition_error(grid: Grid) -> float:
    """
    Erro L^2 relativo de ln|x| = sum_j R_j(c_n x_j/|x|), com constantes
    ajustadas pela média, no anel 0.5 <= |x| <= L/8.
    """
    reconstructed, expected = _log_reconstruction(grid)
    return _relative_l2(log_decomposition_constant(grid.n) * reconstructed, expected)


def fitted_log_constant(grid: Grid) -> float:
    """Constante c de mínimos quadrados em ln|x| ~ c sum_j R_j(x_j/|x|) no anel."""
    reconstructed, expected = _log_reconstruction(grid)
    return float(np.dot(reconstructed, expected) / np.dot(reconstructed, reconstructed))


def _fs_checks(grid: Grid, config: Config) -> List[Check]:
    checks = []
    if grid.n >= 2:
        c = log_decomposition_constant(grid.n)
        fitted = fitted_log_constant(grid)
        gap = abs(fitted / c - 1.0)
        checks.append(_check(
            f"fs_constant.n={grid.n}",
            "c_n = sqrt(pi) Gamma(n/2) / (2 Gamma((n+1)/2)) recuperada por minimos quadrados",
            {"fitted": fitted, "exact": c}, config.fs_tol, gap <= config.fs_tol,
        ))
        error = log_decomposition_error(grid)
        checks.append(_check(
            f"fs_decomposition.n={grid.n}",
            "ln|x| = sum_j R_j(c_n x_j/|x|) modulo constantes",
            error, config.fs_tol, error <= config.fs_tol,
        ))
    checks.extend(_hilbert_checks(config))
    return checks


def run_fs_decomposition_suite(grid: Optional[Grid] = None,
                               config: Optional[Config] = None) -> SuiteReport:
    """Decomposição de ln|x| como soma de transformadas de Riesz de funções limitadas."""
    config = config or Config()
    grid = grid or default_suite_grid("fs", config)
    return SuiteReport(
        suite="fs",
        environment=_environment(grid, [], config, ("fs_N", "fs_tol", "hilbert_N", "hilbert_tol")),
        checks=_fs_checks(grid, config),
    )


def smoothed_indicator_field(grid: Grid) -> List[ScalarField]:
    """Componentes limitadas: indicadores de bolas suavizados por filtro gaussiano."""
    components = []
    for j in range(grid.n):
        center = tuple((1.0 if k == j else -0.5) for k in range(grid.n))
        family = TestFamily(kind=FamilyKind.INDICATOR_BALL, center=center, radius=2.0 + j)
        indicator = sample(family, grid).values
        sigma = 0.25 / grid.h
        components.append(ScalarField(grid, gaussian_filter(indicator, sigma=sigma, mode="wrap")))
    return components


def _riesz_divergence(components: List[ScalarField]) -> ScalarField:
    grid = components[0].grid
    return ScalarField(grid, sum(fracops.riesz_transform(subtract_mean(g), j).values
                                 for j, g in enumerate(components)))


def _divergence_checks(grid: Grid, s: float, config: Config) -> List[Check]:
    components = [subtract_mean(g) for g in smoothed_indicator_field(grid)]
    lhs = _riesz_divergence(components)
    inverse_root = fracops.symbol_power(grid, -1.0)
    rhs = sum(fracops.spectral_apply(g, fracops.gradient_symbol(grid, j) * inverse_root)[0].values
              for j, g in enumerate(components))
    residue = _relative_max(lhs.values, -rhs)

    zero = [ScalarField(grid, np.zeros(grid.shape)) for _ in range(grid.n)]
    zero_residue = _max_abs(_riesz_divergence(zero).values)

    order = fracops.make_frac_order(grid.n, s)
    u = sample(_bump(2.0), grid)
    frac_grad = fracops.frac_gradient(u, order)
    left = sum(float(np.sum(frac_grad.components[j] * g.values)) for j, g in enumerate(components))
    right = float(np.sum(fracops.frac_laplacian(u, order).values * lhs.values))
    pairing = abs(left - right) / max(abs(left), abs(right), 1e-300)

    fine_grid = make_grid(grid.n, 2 * grid.N, grid.L, grid.periodic)
    bmo = [norms.bmo_norm(lhs), norms.bmo_norm(_riesz_divergence(smoothed_indicator_field(fine_grid)))]
    bmo_drift = abs(bmo[1] / bmo[0] - 1.0) if bmo[0] > 0 else math.inf

    log_error = log_decomposition_error(make_grid(grid.n, config.fs_N, grid.L))
    return [
        _check("riesz_divergence",
               "sum_j R_j g_j = -div((-Delta)^{-1/2} g) (convencao e^{-2 pi i x xi})",
               residue, config.divergence_tol, residue <= config.divergence_tol),
        _check("riesz_divergence_zero", "g = 0 da Y_0 = 0", zero_residue, 0.0, zero_residue == 0.0),
        _check(f"pairing.s={s}",
               "sum_j <grad^s_j u, g_j> = <(-Delta)^{s/2} u, sum_j R_j g_j>",
               pairing, config.divergence_tol, pairing <= config.divergence_tol),
        _check("bmo_stability",
               "Y_0 = sum_j R_j g_j tem norma BMO finita e estavel de N para 2N",
               bmo, config.bmo_drift, _finite_positive(bmo[0]) and bmo_drift <= config.bmo_drift),
        _check("log_reconstruction",
               "ln|x| = Y_0 para g_j = c x_j/|x|",
               log_error, config.fs_tol, log_error <= config.fs_tol),
    ]


def run_divergence_suite(grid: Optional[Grid] = None, s: float = DEFAULT_S,
                         config: Optional[Config] = None) -> SuiteReport:
    """Funções BMO da forma sum_j R_j g_j com g limitado."""
    config = config or Config()
    grid = grid or default_suite_grid("divergence", config)
    if grid.n < 2:
        raise PreconditionError("run_divergence_suite", "a suite divergence exige n >= 2")
    return SuiteReport(
        suite="divergence",
        environment=_environment(grid, [s], config, ("divergence_tol", "bmo_drift", "fs_N", "fs_tol")),
        checks=_divergence_checks(grid, float(s), config),
    )


# ============================================================================
# DESPACHO
# ============================================================================

SUITE_NAMES = ("identity", "stein-weiss", "weak-type", "capacitary", "trace", "fs", "divergence")


def _environment(grid: Grid, s_list: Sequence[float], config: Config, keys: Sequence[str]) -> dict:
    return {
        "grid": grid.to_dict(),
        "s": list(s_list),
        "thresholds": {key: getattr(config, key) for key in keys},
    }


def run_suite(name: str, grid: Optional[Grid] = None, s_list: Optional[Sequence[float]] = None,
              config: Optional[Config] = None) -> SuiteReport:
    """
    Executa uma suíte pelo nome ('all' concatena todas com ids prefixados).

    Em 'all' cada suíte usa o próprio grid padrão.

    Raises:
        ValueError: Nome de suíte desconhecido.
    """
    config = config or Config()
    s_values = [float(s) for s in s_list] if s_list else None
    s = s_values[0] if s_values else DEFAULT_S
    if name == "identity":
        return run_identity_suite(grid, s_values, config)
    if name == "stein-weiss":
        return run_stein_weiss_suite(grid, s_values, config)
    if name == "weak-type":
        return run_weak_type_suite(grid, s, config)
    if name == "capacitary":
        return run_capacitary_suite(grid, s, config)
    if name == "trace":
        return run_trace_suite(grid, s, config)
    if name == "fs":
        return run_fs_decomposition_suite(grid, config)
    if name == "divergence":
        return run_divergence_suite(grid, s, config)
    if name == "all":
        reports = [run_suite(suite, None, s_values, config) for suite in SUITE_NAMES]
        checks = [replace(c, id=f"{r.suite}/{c.id}") for r in reports for c in r.checks]
        return SuiteReport(
            suite="all",
            environment={r.suite: r.environment for r in reports},
            checks=checks,
        )
    raise ValueError(f"suite desconhecida: {name}")
