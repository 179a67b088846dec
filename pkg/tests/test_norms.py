"""
Testes de normas e seminormas.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Adiciona src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core import norms, fracops
from core.grid import make_grid, sample, subtract_mean
from core.models import (
    ScalarField, TestFamily, FamilyKind, NormKind, SeminormKind, HardyVariant,
)
from core.exceptions import InvalidNormError, MeanNotZeroError, InvalidOrderError


@pytest.fixture
def gaussian():
    """Gaussiana e^{-pi x^2} no grid padrão em n = 1."""
    return sample(TestFamily(kind=FamilyKind.GAUSSIAN, width=1.0), make_grid(1, 256, 16.0))


@pytest.fixture
def step():
    """Campo escada em h = 1: nível 1 em 4 células, nível 2 em 1 célula."""
    grid = make_grid(1, 8, 4.0)
    return ScalarField(grid, [0.0, 0.0, 1.0, 1.0, -1.0, 2.0, 0.0, 0.0])


@pytest.fixture
def dipole():
    """Par de bumps de sinais opostos, média zero."""
    family = TestFamily(kind=FamilyKind.SHIFTED_BUMP_PAIR, width=1.0, params={"separation": 1.5})
    return subtract_mean(sample(family, make_grid(1, 256, 16.0)))


# ============================================================================
# LEBESGUE, FRACA E LORENTZ
# ============================================================================

def test_lp_norms_of_gaussian(gaussian):
    """||g||_1 = 1, ||g||_2 = 2^{-1/4}, ||g||_inf = 1."""
    assert norms.lp_norm(gaussian, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert norms.lp_norm(gaussian, 2.0) == pytest.approx(2.0 ** -0.25, rel=1e-12)
    assert norms.lp_norm(gaussian, math.inf) == pytest.approx(1.0)


def test_lp_rejects_small_exponent(gaussian):
    """p < 1 não define norma."""
    with pytest.raises(InvalidNormError):
        norms.lp_norm(gaussian, 0.5)
    with pytest.raises(InvalidNormError):
        norms.weak_lp_norm(gaussian, 0.0)


def test_step_norms_are_exact(step):
    """Normas de funções escada são calculadas exatamente pelos níveis."""
    assert norms.lp_norm(step, 1.0) == pytest.approx(5.0)
    assert norms.lp_norm(step, math.inf) == 2.0
    # sup_v v |{|u| >= v}|^{1/p}: níveis 1 (medida 4) e 2 (medida 1)
    assert norms.weak_lp_norm(step, 1.0) == pytest.approx(4.0)
    assert norms.weak_lp_norm(step, 2.0) == pytest.approx(2.0)
    order = fracops.make_frac_order(1, 0.5)
    # int_0^inf |{|u| > t}|^{1/2} dt = 1 * 4^{1/2} + 1 * 1^{1/2}
    assert norms.lorentz_norm(step, order) == pytest.approx(3.0)


def test_weak_norm_below_strong(gaussian):
    """||u||_{p,inf} <= ||u||_p."""
    for p in (1.0, 1.5, 2.0):
        assert norms.weak_lp_norm(gaussian, p) <= norms.lp_norm(gaussian, p) * (1.0 + 1e-12)


def test_zero_field_norms():
    """Todas as normas de 0 valem 0."""
    zero = ScalarField(make_grid(1, 16, 4.0), np.zeros(16))
    order = fracops.make_frac_order(1, 0.5)
    assert norms.lp_norm(zero, 2.0) == 0.0
    assert norms.weak_lp_norm(zero, 2.0) == 0.0
    assert norms.lorentz_norm(zero, order) == 0.0
    assert norms.bmo_norm(zero) == 0.0
    assert norms.gagliardo_seminorm(zero, 0.5) == 0.0


def test_mu_norms():
    """Valores [1, 2] com pesos [1, 1]: ||u||_{L^1(mu)} = 3 e ||u||_{L^{1,inf}(mu)} = 2."""
    values = np.array([1.0, 2.0])
    weights = np.array([1.0, 1.0])
    assert norms.mu_lp_norm(values, weights, 1.0) == pytest.approx(3.0)
    assert norms.mu_weak_norm(values, weights, 1.0) == pytest.approx(2.0)
    assert norms.mu_weak_norm(np.zeros(2), weights, 1.0) == 0.0


# ============================================================================
# GAGLIARDO
# ============================================================================

def test_gagliardo_homogeneous_and_positive():
    """[2u] = 2[u] e [u] > 0 para u não constante."""
    grid = make_grid(1, 32, 4.0)
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), grid)
    value = norms.gagliardo_seminorm(u, 0.5)
    assert value > 0.0
    assert norms.gagliardo_seminorm(u.with_values(2.0 * u.values), 0.5) == pytest.approx(2.0 * value, rel=1e-12)


def test_gagliardo_details():
    """details recebe as partes interna e externa e a cota da diagonal."""
    grid = make_grid(1, 32, 4.0)
    u = sample(TestFamily(kind=FamilyKind.BUMP, width=1.0), grid)
    details = {}
    value = norms.gagliardo_seminorm(u, 0.5, details)
    assert value == pytest.approx(details["inner_pairs"] + details["outer_pairs"])
    assert details["diagonal_mass_bound"] > 0.0


@pytest.mark.parametrize("n, N", [(1, 16), (2, 8), (3, 4)])
def test_gagliardo_inner_pairs_match_double_sum(n, N):
    """Parte interna igual à soma dupla sobre todos os pares ordenados de nós."""
    grid = make_grid(n, N, 2.0)
    rng = np.random.default_rng(13)
    u = ScalarField(grid, rng.standard_normal(grid.shape))
    details = {}
    norms.gagliardo_seminorm(u, 0.4, details)
    nodes = np.stack([idx.ravel() for idx in np.indices(grid.shape)], axis=1) * grid.h
    flat = u.values.ravel()
    distance = np.linalg.norm(nodes[:, None, :] - nodes[None, :, :], axis=2)
    np.fill_diagonal(distance, np.inf)
    expected = float(np.sum(np.abs(flat[:, None] - flat[None, :]) * distance ** (-(n + 0.4)))) * grid.h ** (2 * n)
    assert details["inner_pairs"] == pytest.approx(expected, rel=1e-10)


def test_gagliardo_rejects_order():
    """s fora de (0, 1)."""
    grid = make_grid(1, 16, 4.0)
    with pytest.raises(InvalidOrderError):
        norms.gagliardo_seminorm(ScalarField(grid, np.zeros(16)), 1.0)


# ============================================================================
# HARDY E BMO
# ============================================================================

def test_hardy_requires_mean_zero(gaussian):
    """H^1 só contém funções de integral zero."""
    with pytest.raises(MeanNotZeroError):
        norms.hardy_h1_norm(gaussian)
    with pytest.raises(MeanNotZeroError):
        norms.hardy_h1_norm(gaussian, HardyVariant.MAXIMAL)


def test_hardy_dominates_l1(dipole):
    """As duas variantes dominam ||u||_1."""
    l1 = norms.lp_norm(dipole, 1.0)
    assert norms.hardy_h1_norm(dipole, HardyVariant.RIESZ) >= l1
    assert norms.hardy_h1_norm(dipole, HardyVariant.MAXIMAL) >= l1


def test_maximal_function_dominates_modulus(dipole):
    """max(|u|, sup_t |phi_t * u|) >= |u| em todo nó."""
    assert np.all(norms.maximal_function(dipole) >= np.abs(dipole.values))


def test_bmo_exact_on_sign_field():
    """sinal de -x: oscilação média 1 no box inteiro, 0 nos sub-blocos."""
    grid = make_grid(1, 8, 4.0)
    u = ScalarField(grid, [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0])
    assert norms.bmo_norm(u) == pytest.approx(1.0)


def test_bmo_ignores_constants(gaussian):
    """||u + c||_BMO = ||u||_BMO."""
    shifted = gaussian.with_values(gaussian.values + 3.0)
    assert norms.bmo_norm(shifted) == pytest.approx(norms.bmo_norm(gaussian), rel=1e-10)
    constant = gaussian.with_values(np.full(gaussian.grid.shape, 7.0))
    assert norms.bmo_norm(constant) < 1e-12


# ============================================================================
# SEMINORMAS DE RIESZ
# ============================================================================

def test_seminorms_vanish_on_constants():
    """Constantes têm seminorma zero."""
    grid = make_grid(2, 32, 4.0)
    constant = ScalarField(grid, np.full(grid.shape, 5.0))
    order = fracops.make_frac_order(2, 0.5)
    for kind in SeminormKind:
        assert norms.seminorm(constant, kind, order) < 1e-10


def test_hs1_splits_into_plus_and_riesz_parts(gaussian):
    """[u]_{H^{s,1}} = ||A u||_1 + sum_j ||R_j A u||_1 e a parte '-' é sum_j ||grad^s_j u||_1."""
    order = fracops.make_frac_order(1, 0.5)
    full = norms.seminorm(gaussian, SeminormKind.HS1, order)
    plus = norms.seminorm(gaussian, SeminormKind.PLUS, order)
    minus = norms.seminorm(gaussian, SeminormKind.MINUS, order)
    # grad^s = -R A, logo a parte '-' é a parte de Riesz de hs1
    assert full == pytest.approx(plus + minus, rel=1e-10)


# ============================================================================
# DESPACHO
# ============================================================================

def test_compute_norm_requires_parameters(gaussian):
    """lp sem p e lorentz sem s."""
    with pytest.raises(InvalidNormError):
        norms.compute_norm(gaussian, NormKind.LP)
    with pytest.raises(InvalidNormError):
        norms.compute_norm(gaussian, NormKind.LORENTZ)


def test_compute_norm_result(gaussian):
    """NormResult com valor e relatório de truncamento."""
    result = norms.compute_norm(gaussian, NormKind.LP, p=1.0)
    data = result.to_dict()
    assert data["kind"] == "lp"
    assert data["value"] == pytest.approx(1.0, rel=1e-12)
    assert data["grid"]["N"] == 256
    assert data["truncation_report"]["boundary_max_abs"] < 1e-12
