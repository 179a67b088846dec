"""
Testes das suítes de verificação.

Cada suíte roda uma vez por módulo (fixtures de escopo de módulo), no grid
padrão ou num grid reduzido onde o veredito não depende do tamanho, e os
vereditos dos critérios de aceitação são conferidos um a um. As resoluções
de capacidade são conferidas também quanto a convergência e gap.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Adiciona src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from app import verify
from app.field_repo import dumps_report
from core.config import Config
from core.grid import coordinates, make_grid, sample, subtract_mean
from core.models import TestFamily, FamilyKind, SuiteReport, Verdict
from core.exceptions import PreconditionError


def _by_prefix(report, prefix):
    return [c for c in report.checks if c.id.startswith(prefix)]


# ============================================================================
# IDENTITY
# ============================================================================

@pytest.fixture(scope="module")
def identity_report():
    """Suíte identity em n = 1 com uma única ordem."""
    return verify.run_identity_suite(make_grid(1, 256, 16.0), [0.5])


def test_identity_ids_are_unique(identity_report):
    """Cada verificação tem id próprio."""
    ids = [c.id for c in identity_report.checks]
    assert len(ids) == len(set(ids))
    assert identity_report.suite == "identity"
    assert identity_report.environment["s"] == [0.5]


def test_identity_exact_checks_pass(identity_report):
    """Identidades espectrais valem no arredondamento."""
    for prefix in ("inversion.", "riesz_composition.", "semigroup.", "realness.",
                   "homogeneity.", "zero_input", "riesz_square", "hilbert_log"):
        checks = _by_prefix(identity_report, prefix)
        assert checks, prefix
        for check in checks:
            assert check.verdict == Verdict.PASS, check.to_dict()


def test_identity_report_serializes(identity_report):
    """to_dict/from_dict preservam ids e vereditos."""
    data = identity_report.to_dict()
    restored = SuiteReport.from_dict(data)
    assert [c.id for c in restored.checks] == [c.id for c in identity_report.checks]
    assert [c.verdict for c in restored.checks] == [c.verdict for c in identity_report.checks]
    assert "statement" in data["checks"][0]


def test_identity_suite_passes(identity_report):
    """Todas as verificações da suíte identity passam, inclusive cross_method."""
    assert identity_report.passed, [c.to_dict() for c in identity_report.failures()]


def test_cross_method_verdicts():
    """Espectral x singular no toro: erro <= 1e-2 em N = 1024 e queda estrita em 2N."""
    checks = {c.id: c for c in verify._cross_method_checks(0.5, Config())}
    assert checks["cross_method.s=0.5"].passed, checks["cross_method.s=0.5"].to_dict()
    refinement = checks["cross_method_refinement.s=0.5"]
    assert refinement.passed, refinement.to_dict()


# ============================================================================
# STEIN-WEISS E TIPO FRACO
# ============================================================================

def test_stein_weiss_ratio_finite():
    """Razão finita e positiva para um par de bumps."""
    grid = make_grid(1, 256, 16.0)
    f = subtract_mean(sample(TestFamily(kind=FamilyKind.SHIFTED_BUMP_PAIR, width=1.0,
                                        params={"separation": 1.5}), grid))
    ratio = verify.stein_weiss_ratio(f, 0.5)
    assert math.isfinite(ratio) and ratio > 0.0


def test_stein_weiss_suite_passes():
    """Suíte stein-weiss no grid padrão."""
    report = verify.run_stein_weiss_suite()
    assert report.passed, [c.to_dict() for c in report.failures()]


def test_weak_type_ratios_homogeneous():
    """As razões não mudam com f -> 2f e a fraca não excede a forte."""
    grid = make_grid(1, 256, 16.0)
    f = subtract_mean(sample(TestFamily(kind=FamilyKind.RIESZ_KERNEL_MOLLIFIED, width=1.0), grid))
    ratios = verify.weak_type_ratios(f, 0.5)
    doubled = verify.weak_type_ratios(f.with_values(2.0 * f.values), 0.5)
    assert doubled["weak"] == pytest.approx(ratios["weak"], rel=1e-12)
    assert ratios["weak"] <= ratios["strong"] * (1.0 + 1e-12)


@pytest.fixture(scope="module")
def weak_type_report():
    """Suíte weak-type no grid padrão (n = 1, refinado para N = 1024)."""
    return verify.run_weak_type_suite()


def test_weak_type_suite_passes(weak_type_report):
    """Razão fraca estável e lei logarítmica da norma forte."""
    assert weak_type_report.passed, [c.to_dict() for c in weak_type_report.failures()]
    for check_id in ("weak_stability.s=0.5", "strong_failure.s=0.5"):
        check = next(c for c in weak_type_report.checks if c.id == check_id)
        assert check.passed, check.to_dict()


def test_strong_failure_growth_is_logarithmic(weak_type_report):
    """Os acréscimos de ||I_s f_eps||_q^q batem ln 2 / pi em n = 1, s = 1/2."""
    check = next(c for c in weak_type_report.checks if c.id == "strong_failure.s=0.5")
    assert verify.strong_log_increment(1, 0.5) == pytest.approx(math.log(2.0) / math.pi, rel=1e-12)
    for increment in check.measured["increments"]:
        assert increment == pytest.approx(1.0, abs=0.1)
    # crescimento geométrico por oitava abaixo de 1.2
    assert all(g < 1.2 for g in check.measured["growth"])


def test_weak_type_ratios_on_open_grid():
    """Grid aberto: I_s singular em R^n, sem a razão contra R f."""
    grid = make_grid(1, 256, 16.0, periodic=False)
    f = sample(TestFamily(kind=FamilyKind.RIESZ_KERNEL_MOLLIFIED, width=1.0), grid)
    ratios = verify.weak_type_ratios(f, 0.5)
    assert set(ratios) == {"weak", "strong"}
    assert 0.0 < ratios["weak"] <= ratios["strong"]


# ============================================================================
# CAPACITARY E TRACE
# ============================================================================

def test_ordering_sets_deterministic():
    """Dez conjuntos não vazios, iguais a cada chamada."""
    grid = make_grid(2, 64, 4.0)
    first = verify.ordering_sets(grid)
    second = verify.ordering_sets(grid)
    assert len(first) == 10
    for a, b in zip(first, second):
        assert not a.is_empty
        assert np.array_equal(a.mask, b.mask)


@pytest.fixture(scope="module")
def capacitary_report():
    """Suíte capacitary no grid de capacidade padrão (n = 2, N = 128, L = 4)."""
    return verify.run_capacitary_suite()


def test_capacitary_suite_passes(capacitary_report):
    """Todas as verificações capacitárias passam."""
    assert capacitary_report.passed, [c.to_dict() for c in capacitary_report.failures()]


def test_ball_scaling_is_certified(capacitary_report):
    """Cap(B_r)/r^{n-s} estável e as três resoluções convergem com gap <= tol_gap Cap."""
    config = Config()
    check = next(c for c in capacitary_report.checks if c.id == "ball_scaling.s=0.5")
    assert check.passed, check.to_dict()
    assert all(check.measured["converged"])
    for gap, value, r in zip(check.measured["gaps"], check.measured["normalized"], (0.25, 0.5, 1.0)):
        assert gap <= config.tol_gap * value * r ** 1.5


def test_capacity_ordering_and_weak_capacitary(capacitary_report):
    """Ordem entre capacidades e t Cap({u > t}) <= [u], a quente e a frio."""
    for prefix in ("capacity_ordering.", "capacity_content.", "weak_capacitary.", "weak_capacitary_cold.",
                   "monotonicity."):
        checks = _by_prefix(capacitary_report, prefix)
        assert checks, prefix
        for check in checks:
            assert check.passed, check.to_dict()


def test_cold_start_levels_converge(capacitary_report):
    """A comparação a frio só vale com todas as resoluções convergidas."""
    for check in _by_prefix(capacitary_report, "weak_capacitary_cold."):
        assert check.measured["converged"] is True
        assert check.measured["dual_worst"] <= check.measured["worst"] * (1.0 + 1e-9)


@pytest.fixture(scope="module")
def trace_report():
    """Suíte trace no grid padrão (n = 2, N = 512, L = 4)."""
    return verify.run_trace_suite()


def test_trace_suite_passes(trace_report):
    """Área limitada nos dois modos e crescimento no segmento."""
    assert trace_report.passed, [c.to_dict() for c in trace_report.failures()]
    for check_id in ("trace_area_strong.s=0.5", "trace_area_weak.s=0.5", "trace_segment_growth.s=0.5"):
        check = next(c for c in trace_report.checks if c.id == check_id)
        assert check.passed, check.to_dict()


def test_mean_zero_bump_has_no_mass():
    """bump(r/2) - 2^{-n} bump(r): média nula e suporte de raio r."""
    grid = make_grid(2, 128, 4.0)
    u = verify.mean_zero_bump(grid, 0.5)
    assert u.mean_zero
    r = np.sqrt(sum(c ** 2 for c in coordinates(grid)))
    outside = u.values[r >= 0.5]
    assert np.allclose(outside, outside[0])


def test_trace_growth_and_zero_measure():
    """Crescimento das medidas de área e segmento e razões nulas para mu = 0."""
    report = verify.run_trace_suite(make_grid(2, 64, 4.0))
    for check_id in ("growth_area", "growth_segment", "trace_zero_measure"):
        check = next(c for c in report.checks if c.id == check_id)
        assert check.passed, check.to_dict()


def test_trace_requires_2d():
    """A suíte trace só roda em n = 2."""
    with pytest.raises(PreconditionError):
        verify.run_trace_suite(make_grid(1, 64, 4.0))


def test_default_suite_grids():
    """trace quadruplica N do grid de capacidade; fs usa fs_N."""
    config = Config()
    assert verify.default_suite_grid("trace", config).N == 4 * config.capacity_N
    assert verify.default_suite_grid("fs", config).N == config.fs_N
    assert verify.default_suite_grid("identity", config).n == 1


# ============================================================================
# FS E DIVERGENCE
# ============================================================================

def test_log_decomposition_constants():
    """c_1 = pi/2, c_2 = 1, c_3 = pi/4."""
    assert verify.log_decomposition_constant(1) == pytest.approx(math.pi / 2.0, rel=1e-12)
    assert verify.log_decomposition_constant(2) == pytest.approx(1.0, rel=1e-12)
    assert verify.log_decomposition_constant(3) == pytest.approx(math.pi / 4.0, rel=1e-12)


def test_hilbert_log_error():
    """Erro da identidade de Hilbert abaixo de 1e-2 com N = 1024."""
    assert verify.hilbert_log_error(Config()) <= 1e-2


def test_fs_suite_passes_on_default_grid():
    """ln|x| reconstruído no anel com a constante exata e a ajustada."""
    report = verify.run_fs_decomposition_suite()
    assert [c.id for c in report.checks] == ["fs_constant.n=2", "fs_decomposition.n=2", "hilbert_log"]
    assert report.passed, [c.to_dict() for c in report.failures()]


def test_divergence_requires_2d():
    """A suíte divergence exige n >= 2."""
    with pytest.raises(PreconditionError):
        verify.run_divergence_suite(make_grid(1, 64, 4.0))



def test_divergence_suite_passes():
    """Suíte divergence no grid padrão."""
    report = verify.run_divergence_suite()
    assert report.passed, [c.to_dict() for c in report.failures()]


# ============================================================================
# DESPACHO
# ============================================================================

def test_unknown_suite():
    """Nome desconhecido é ValueError."""
    with pytest.raises(ValueError):
        verify.run_suite("nope")


def test_report_is_deterministic():
    """Duas execuções dão o mesmo JSON."""
    grid = make_grid(2, 128, 8.0)
    first = dumps_report(verify.run_suite("fs", grid).to_dict())
    second = dumps_report(verify.run_suite("fs", grid).to_dict())
    assert first == second
