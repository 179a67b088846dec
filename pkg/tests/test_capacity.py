"""
Testes de conteúdo de Hausdorff, capacidades variacionais, solver
primal-dual e normas de medidas.

As resoluções usam grids pequenos. A maior parte das asserções vale para
qualquer iterado (dualidade fraca, viabilidade da partida a quente); as de
convergência usam n = 1 e gap relativo 1e-3.
"""

import math
import sys
from itertools import combinations, product
from pathlib import Path

import numpy as np
import pytest

# Adiciona src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core import capacity, fracops, norms, quadrature, solver
from core.config import Config
from core.grid import make_grid, sample, subtract_mean
from core.models import (
    DyadicSet, DiscreteMeasure, CapacityProblem, CapacityKind, TestFamily,
    FamilyKind, ScalarField, TraceMode,
)
from core.exceptions import InvalidOrderError, MeanNotZeroError, PreconditionError


@pytest.fixture
def small_config():
    """Config com poucas iterações para resoluções rápidas."""
    return Config(max_iter=400, check_every=20, power_iters=20)


@pytest.fixture
def line_grid():
    """Grid n = 1 com moldura em |x| >= 3.5."""
    return make_grid(1, 64, 4.0)


# ============================================================================
# CONTEÚDO DE HAUSDORFF
# ============================================================================


def _brute_force_content(mask, alpha):
    """Mínimo de sum l^alpha sobre todas as coberturas por cubos diádicos (N = 8, h = 1)."""
    mask = np.asarray(mask, dtype=bool)
    n = mask.ndim
    cubes = []
    length = 1
    while length <= 8:
        for corner in product(range(0, 8, length), repeat=n):
            cells = set(product(*(range(c, c + length) for c in corner)))
            cubes.append((cells, float(length) ** alpha))
        length *= 2
    target = {tuple(int(i) for i in idx) for idx in np.argwhere(mask)}
    cubes = [(cells, cost) for cells, cost in cubes if cells & target]
    best = math.inf
    for size in range(1, len(target) + 1):
        for cover in combinations(cubes, size):
            cost = sum(c for _, c in cover)
            if cost >= best:
                continue
            if target <= set().union(*(cells for cells, _ in cover)):
                best = cost
    return best


def test_hausdorff_content_matches_brute_force():
    """A programação dinâmica coincide com a busca exaustiva de coberturas."""
    grid = make_grid(1, 8, 4.0)
    masks = [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0, 1, 0],
        [1, 1, 1, 1, 0, 0, 1, 1],
    ]
    for mask in masks:
        K = DyadicSet(grid, np.array(mask, dtype=bool))
        for alpha in (0.3, 0.5, 0.8):
            expected = _brute_force_content(mask, alpha)
            assert capacity.hausdorff_content(K, alpha) == pytest.approx(expected, rel=1e-12)


def test_hausdorff_content_matches_brute_force_2d():
    """Mesma comparação em n = 2 com poucas células marcadas."""
    grid = make_grid(2, 8, 4.0)
    cell_lists = [
        [(0, 0)],
        [(0, 0), (1, 1)],
        [(1, 1), (2, 2)],
        [(0, 0), (7, 7), (3, 4)],
        [(4, 4), (4, 5), (5, 4)],
    ]
    for cells in cell_lists:
        mask = np.zeros(grid.shape, dtype=bool)
        for cell in cells:
            mask[cell] = True
        K = DyadicSet(grid, mask)
        for alpha in (0.5, 1.2, 1.8):
            expected = _brute_force_content(mask, alpha)
            assert capacity.hausdorff_content(K, alpha) == pytest.approx(expected, rel=1e-12)


def test_hausdorff_two_separated_cells():
    """Duas células unitárias a distância 8, alpha = 0.5, L = 16: conteúdo 2."""
    grid = make_grid(2, 32, 16.0)
    mask = np.zeros(grid.shape, dtype=bool)
    mask[8, 8] = True
    mask[8, 16] = True
    assert capacity.hausdorff_content(DyadicSet(grid, mask), 0.5) == pytest.approx(2.0)


def test_hausdorff_content_edge_cases():
    """Conjunto vazio vale 0; alpha fora de (0, n) é erro."""
    grid = make_grid(2, 16, 4.0)
    empty = DyadicSet(grid, np.zeros(grid.shape, dtype=bool))
    assert capacity.hausdorff_content(empty, 1.0) == 0.0
    with pytest.raises(InvalidOrderError):
        capacity.hausdorff_content(empty, 2.0)
    with pytest.raises(InvalidOrderError):
        capacity.hausdorff_content(empty, 0.0)


def test_hausdorff_content_monotone():
    """K1 contido em K2 implica conteúdo menor ou igual."""
    grid = make_grid(2, 32, 4.0)
    small = capacity.ball_set(grid, 0.5)
    large = capacity.ball_set(grid, 1.0)
    for alpha in (0.5, 1.5):
        assert capacity.hausdorff_content(small, alpha) <= capacity.hausdorff_content(large, alpha)


def test_content_comparability():
    """Fatores de comparação entre coberturas por cubos e por bolas."""
    factors = capacity.content_comparability(2, 1.0)
    assert factors["ball_over_dyadic_max"] == pytest.approx(math.sqrt(2.0) / 2.0)
    assert factors["dyadic_over_ball_max"] == pytest.approx(16.0)


# ============================================================================
# SOLVER
# ============================================================================


def test_operator_norm_of_diagonal_term():
    """||3 I|| = 3."""
    terms = [solver.diagonal_term("d", 3.0)]
    assert solver.estimate_operator_norm(terms, (16,), 5) == pytest.approx(3.0, rel=1e-12)


def test_multiplier_adjoint():
    """<K u, p> = <u, K^T p> para o termo de Riesz."""
    grid = make_grid(2, 16, 4.0)
    order = fracops.make_frac_order(2, 0.5)
    term = solver.multiplier_term("riesz", fracops.riesz_symbol(grid, 0) * fracops.symbol_power(grid, order.s))
    rng = np.random.default_rng(7)
    u = rng.standard_normal(grid.shape)
    p = rng.standard_normal(grid.shape)
    assert float(np.sum(term.apply(u) * p)) == pytest.approx(float(np.sum(u * term.adjoint(p))), rel=1e-10)


def test_shift_difference_adjoint():
    """<K u, p> = <u, K^T p> para diferenças deslocadas."""
    term = solver.shift_difference_term((1, -2), 0.5)
    rng = np.random.default_rng(3)
    u = rng.standard_normal((8, 8))
    p = rng.standard_normal((8, 8))
    assert float(np.sum(term.apply(u) * p)) == pytest.approx(float(np.sum(u * term.adjoint(p))), rel=1e-12)


def test_dual_bound_below_any_feasible_objective(line_grid, small_config):
    """Dualidade fraca: min_C <u, K^T p> <= objetivo(u) para u viável e |p| <= 1."""
    K = capacity.ball_set(line_grid, 0.5)
    order = fracops.make_frac_order(1, 0.5)
    terms = capacity.objective_terms(line_grid, CapacityKind.HS1, order, small_config)
    frame = np.abs(line_grid.axis()) >= 3.5
    engine = solver.PrimalDualSolver(terms, K.mask, frame, 4.0, small_config)
    rng = np.random.default_rng(11)
    duals = [np.clip(rng.standard_normal(line_grid.shape), -1.0, 1.0) for _ in terms]
    feasible = engine.project(K.mask.astype(np.float64))
    assert engine.dual_bound(duals) <= solver.objective(terms, feasible) + 1e-12


def test_ws1_objective_terms(line_grid, small_config):
    """ws1 em n = 1: pares finos, pares de blocos 2, 4 e 8, e o resto distante."""
    order = fracops.make_frac_order(1, 0.5)
    terms = capacity.objective_terms(line_grid, CapacityKind.WS1, order, small_config)
    names = [t.name for t in terms]
    assert sum(name.startswith("pair1(") for name in names) == small_config.ws1_radius
    for block in (2, 4, 8):
        assert sum(name.startswith(f"pair{block}(") for name in names) == 3
    assert not any(name.startswith("pair16(") for name in names)
    assert names[-1] == "far_field"


def test_pair_difference_adjoint_with_blocks():
    """<K u, p> = <u, K^T p> com extensão por zero e médias em blocos."""
    term = solver.pair_difference_term((2, -1), 0.7, (8, 8), block=4)
    rng = np.random.default_rng(5)
    u = rng.standard_normal((8, 8))
    p = rng.standard_normal((4, 4))
    assert term.apply(u).shape == (4, 4)
    assert float(np.sum(term.apply(u) * p)) == pytest.approx(float(np.sum(u * term.adjoint(p))), rel=1e-12)


def test_pair_difference_does_not_wrap_onto_box():
    """Deslocamento de N - 1 nós: cada par liga o box à região estendida por zero."""
    u = np.ones((8,))
    term = solver.pair_difference_term((7,), 1.0, (8,))
    assert np.abs(term.apply(u)).sum() == pytest.approx(14.0)


def test_shell_cells_tile_the_shell():
    """As células cortadas somam a integral de |z|^{-sigma} na casca."""
    inner, outer, sigma = 2.25, 4.5, 2.5
    total = sum(quadrature.shell_cell_integral(k, inner, outer, sigma)
                for k in product(range(-5, 6), repeat=2))
    exact = (quadrature.outside_cube_integral(2, inner, sigma)
             - quadrature.outside_cube_integral(2, outer, sigma))
    assert total == pytest.approx(exact, rel=1e-6)


def _ws1_seminorm(grid, width, config):
    order = fracops.make_frac_order(grid.n, 0.5)
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=width), grid).values
    terms = capacity.objective_terms(grid, CapacityKind.WS1, order, config)
    return solver.objective(terms, u)


def test_ws1_seminorm_scales_like_dilation(small_config):
    """[u(./r)]_{W^{s,1}} = r^{n-s} [u]: pares dentro do suporte não pagam o campo distante."""
    grid = make_grid(2, 256, 8.0)
    small = _ws1_seminorm(grid, 1.0, small_config)
    large = _ws1_seminorm(grid, 2.0, small_config)
    assert large / small == pytest.approx(2.0 ** 1.5, rel=0.12)


@pytest.mark.parametrize("r", [0.5, 1.0])
def test_ws1_objective_tracks_gagliardo_on_balls(small_config, r):
    """Indicador de bola: o objetivo ws1 acompanha a seminorma de pares exata."""
    grid = make_grid(2, 64, 4.0)
    u = capacity.ball_set(grid, r).mask.astype(np.float64)
    order = fracops.make_frac_order(2, 0.5)
    terms = capacity.objective_terms(grid, CapacityKind.WS1, order, small_config)
    exact = norms.gagliardo_seminorm(ScalarField(grid, u), 0.5)
    assert solver.objective(terms, u) == pytest.approx(exact, rel=0.1)


# ============================================================================
# CAPACIDADES VARIACIONAIS
# ============================================================================


def test_capacity_report_brackets_value(line_grid, small_config):
    """dual_value <= value; traço registrado; detalhes do problema."""
    order = fracops.make_frac_order(1, 0.5)
    K = capacity.ball_set(line_grid, 0.5)
    for kind in (CapacityKind.WS1, CapacityKind.HS1_PLUS, CapacityKind.HS1_MINUS):
        prob = CapacityProblem(K=K, kind=kind, order=order, max_iter=small_config.max_iter,
                               tol_gap=small_config.tol_gap)
        report = capacity.variational_capacity(prob, small_config)
        assert report.value > 0.0
        assert report.dual_value <= report.value * (1.0 + 1e-9)
        assert report.trace
        assert report.details["kind"] == kind.value
        assert report.details["cells"] == K.cell_count
        assert "trace" not in report.to_dict(include_trace=False)


@pytest.mark.parametrize("kind", [CapacityKind.WS1, CapacityKind.HS1_PLUS, CapacityKind.HS1])
def test_capacity_solve_converges_with_restarts(line_grid, kind):
    """Com reinícios a resolução fecha o gap relativo 1e-3 em n = 1."""
    config = Config(max_iter=6000, check_every=20, power_iters=20, tol_gap=1e-3)
    order = fracops.make_frac_order(1, 0.5)
    prob = CapacityProblem(K=capacity.ball_set(line_grid, 0.5), kind=kind, order=order,
                           max_iter=config.max_iter, tol_gap=config.tol_gap)
    report = capacity.variational_capacity(prob, config)
    assert report.converged
    assert report.gap <= config.tol_gap * report.value
    assert report.details["restarts"] >= 0
    assert report.details["primal_weight"] > 0.0


def test_restart_rules():
    """Reinício suficiente, necessário (gap parou de cair) e artificial."""
    engine = solver.PrimalDualSolver([], np.zeros(4, dtype=bool), np.zeros(4, dtype=bool), 1.0, Config())
    assert engine._should_restart(0.1, 1.0, math.inf, 10, 1000)
    assert engine._should_restart(0.5, 1.0, 0.4, 10, 1000)
    assert not engine._should_restart(0.5, 1.0, 0.6, 10, 1000)
    assert engine._should_restart(0.9, 1.0, 0.6, 400, 1000)
    assert engine._primal_weight(4.0, 1.0, 1.0) == pytest.approx(2.0)
    assert engine._primal_weight(4.0, 0.0, 1.0) == 4.0


def test_capacity_of_empty_set(line_grid):
    """Cap(vazio) = 0, convergido, sem iterações."""
    order = fracops.make_frac_order(1, 0.5)
    empty = DyadicSet(line_grid, np.zeros(line_grid.shape, dtype=bool))
    report = capacity.variational_capacity(CapacityProblem(K=empty, kind=CapacityKind.HS1, order=order))
    assert report.value == 0.0
    assert report.converged
    assert report.iters == 0


def test_capacity_rejects_set_touching_frame(line_grid):
    """K dentro da moldura de campo distante é erro de pré-condição."""
    order = fracops.make_frac_order(1, 0.5)
    K = capacity.cube_set(line_grid, 7.9)
    with pytest.raises(PreconditionError):
        capacity.variational_capacity(CapacityProblem(K=K, kind=CapacityKind.HS1, order=order))


def test_capacity_monotone_through_certificates(line_grid, small_config):
    """dual(K1) <= Cap(K1) <= Cap(K2) <= value(K2) para K1 contido em K2."""
    order = fracops.make_frac_order(1, 0.5)
    reports = []
    for r in (0.25, 1.0):
        prob = CapacityProblem(K=capacity.ball_set(line_grid, r), kind=CapacityKind.HS1_PLUS, order=order,
                               max_iter=small_config.max_iter, tol_gap=small_config.tol_gap)
        reports.append(capacity.variational_capacity(prob, small_config))
    assert reports[0].dual_value <= reports[1].value * (1.0 + 1e-9)


def test_weak_capacitary_levels_respect_seminorm(line_grid, small_config):
    """t Cap({u > t}) <= [u]_X: a partida a quente u/t é viável."""
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), line_grid)
    order = fracops.make_frac_order(1, 0.5)
    rows = capacity.weak_capacitary_levels(u, CapacityKind.HS1_PLUS, order, small_config)
    assert [row["level"] for row in rows] == [0.0625, 0.125, 0.25, 0.5, 1.0]
    for row in rows:
        assert row["product"] <= row["seminorm"] * (1.0 + 1e-9)


def test_weak_capacitary_levels_cold_start(line_grid):
    """Partida fria: o dual certifica t Cap <= [u] sem usar a partida u/t."""
    config = Config(max_iter=6000, check_every=20, power_iters=20, tol_gap=1e-3)
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), line_grid)
    order = fracops.make_frac_order(1, 0.5)
    rows = capacity.weak_capacitary_levels(u, CapacityKind.HS1_PLUS, order, config, warm_start=False)
    assert len(rows) == 5
    for row in rows:
        assert row["dual_product"] <= row["product"] * (1.0 + 1e-9)
        assert row["dual_product"] <= row["seminorm"] * (1.0 + 1e-9)
        assert row["converged"]
        assert row["product"] <= row["seminorm"] / (1.0 - config.tol_gap)


def test_level_set_integral_bracket(line_grid, small_config):
    """lower <= value <= upper e uma capacidade por nível."""
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), line_grid)
    order = fracops.make_frac_order(1, 0.5)
    result = capacity.level_set_capacity_integral(u, CapacityKind.HS1_PLUS, order, config=small_config)
    assert result.lower <= result.value <= result.upper
    assert len(result.levels) == len(result.capacities)
    assert result.lower > 0.0


def test_level_set_integral_of_zero(line_grid):
    """Campo nulo: integral 0 sem resoluções."""
    zero = ScalarField(line_grid, np.zeros(line_grid.shape))
    order = fracops.make_frac_order(1, 0.5)
    result = capacity.level_set_capacity_integral(zero, CapacityKind.HS1, order)
    assert result.value == 0.0
    assert result.levels == []


def test_dyadic_levels():
    """Níveis 2^k de 2^floor(log2 0.3) até 2^floor(log2 3)."""
    grid = make_grid(1, 8, 4.0)
    u = ScalarField(grid, [0.0, 0.3, 1.0, 3.0, 0.0, 0.0, 0.0, 0.0])
    assert capacity.dyadic_levels(u, 0.0625) == [0.25, 0.5, 1.0, 2.0]


# ============================================================================
# MEDIDAS E TRAÇO
# ============================================================================


def test_growth_of_single_point_diverges():
    """Massa concentrada num ponto: |||mu||| = inf."""
    mu = DiscreteMeasure(np.zeros((1, 2)), [1.0])
    assert capacity.measure_growth_norm(mu, 0.5) == math.inf


def test_growth_of_zero_measure():
    """Medida nula: crescimento 0."""
    mu = DiscreteMeasure(np.zeros((3, 2)), [0.0, 0.0, 0.0])
    assert capacity.measure_growth_norm(mu, 1.0) == 0.0


def test_growth_of_segment():
    """Segmento de comprimento 2: mu(B(x, r)) <= 2r."""
    mu = capacity.segment_measure(2, length=2.0, spacing=1.0 / 128)
    assert capacity.measure_growth_norm(mu, 1.0) == pytest.approx(2.0, rel=1e-2)


def test_growth_of_square_above_atom_scale():
    """Quadrado de lado 2 com beta = 0: mu(B(x, r)) ~ pi r^2 acima da escala dos átomos."""
    mu = capacity.square_measure(2, side=2.0, spacing=1.0 / 64)
    assert capacity.measure_growth_norm(mu, 0.0, start_factor=8.0) == pytest.approx(math.pi, rel=0.1)


def test_growth_rejects_beta():
    """beta deve estar em [0, n)."""
    mu = capacity.segment_measure(2, length=1.0, spacing=1.0 / 16)
    with pytest.raises(InvalidOrderError):
        capacity.measure_growth_norm(mu, 2.0)


def test_measure_resolution():
    """Menor distância entre átomos."""
    mu = capacity.segment_measure(2, length=1.0, spacing=1.0 / 16)
    assert capacity.measure_resolution(mu) == pytest.approx(1.0 / 16)


def test_growth_profile_with_separated_scales():
    """Átomos a 1e-5 e a 14 de distância: só os centros vizinhos dos átomos entram."""
    atoms = np.array([[0.0, 0.0], [1e-5, 0.0], [10.0, 10.0]])
    mu = DiscreteMeasure(atoms, np.ones(3))
    profile = capacity.measure_growth_profile(mu, 1.0)
    assert len(profile) == 22
    assert profile[0]["value"] == pytest.approx(1e5, rel=1e-9)
    assert profile[-1]["value"] == pytest.approx(3.0 / profile[-1]["radius"], rel=1e-12)


def test_trace_ratio_of_zero_measure():
    """Medida nula: numerador 0, razão 0."""
    grid = make_grid(2, 64, 4.0)
    u = subtract_mean(sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), grid))
    mu = DiscreteMeasure(np.zeros((4, 2)), np.zeros(4))
    order = fracops.make_frac_order(2, 0.5)
    assert capacity.trace_ratio(mu, u, order, TraceMode.STRONG) == 0.0


def test_trace_ratio_positive():
    """Segmento que cruza o suporte do bump: razão finita e positiva nos dois modos."""
    grid = make_grid(2, 64, 4.0)
    u = subtract_mean(sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), grid))
    mu = capacity.segment_measure(2, length=2.0, spacing=1.0 / 64)
    order = fracops.make_frac_order(2, 0.5)
    for mode in (TraceMode.STRONG, TraceMode.WEAK):
        ratio = capacity.trace_ratio(mu, u, order, mode)
        assert math.isfinite(ratio) and ratio > 0.0


def test_trace_ratio_requires_mean_zero():
    """Campo com média não nula é recusado."""
    grid = make_grid(2, 64, 4.0)
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), grid)
    mu = capacity.segment_measure(2, length=2.0, spacing=1.0 / 64)
    with pytest.raises(MeanNotZeroError):
        capacity.trace_ratio(mu, u, fracops.make_frac_order(2, 0.5), TraceMode.STRONG)


def test_evaluate_at_atoms_dimension_mismatch():
    """Medida em n = 2 com campo em n = 1."""
    grid = make_grid(1, 16, 4.0)
    u = ScalarField(grid, np.ones(16))
    with pytest.raises(PreconditionError):
        capacity.evaluate_at_atoms(u, capacity.segment_measure(2))
