"""
Testes de funções especiais e de quadratura.

Os valores de referência vêm de math.gamma e de somas/integrais com forma
fechada conhecida.
"""

import math
import sys
from pathlib import Path

import pytest

# Adiciona src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.special import (
    gamma_eval, riesz_potential_constant, frac_laplacian_constant,
    frac_gradient_constant, frac_constants, liouville_kernel_constants,
)
from core.quadrature import (
    cube_moment, cell_moment, outside_cube_integral, lattice_zeta,
    truncated_lattice_zeta, singular_weight, one_sided_weight,
)
from core.exceptions import GammaDomainError, InvalidOrderError


# ============================================================================
# GAMMA
# ============================================================================

def test_gamma_matches_math_gamma():
    """Lanczos com reflexão: erro relativo <= 1e-12 em (0, 10]."""
    for x in (0.05, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.3, 5.0, 7.5, 10.0):
        assert gamma_eval(x) == pytest.approx(math.gamma(x), rel=1e-12)


def test_gamma_half():
    """Gamma(1/2)^2 = pi."""
    assert gamma_eval(0.5) ** 2 == pytest.approx(math.pi, rel=1e-13)


def test_gamma_domain():
    """x <= 0 e valores não finitos são rejeitados."""
    for x in (0.0, -1.0, -0.5, float("nan"), float("inf")):
        with pytest.raises(GammaDomainError):
            gamma_eval(x)


# ============================================================================
# CONSTANTES DOS KERNELS
# ============================================================================

def test_kernel_constants_match_closed_forms():
    """c_{n,s}, c_{n,s,+} e c_{n,s,-} contra as fórmulas com math.gamma."""
    g = math.gamma
    for n in (1, 2, 3):
        for s in (0.3, 0.5, 0.7):
            c_ns = g((n - s) / 2) / (math.pi ** (n / 2) * 2 ** s * g(s / 2))
            c_nsp = s * 2 ** (s - 1) * g((n + s) / 2) / (math.pi ** (n / 2) * g(1 - s / 2))
            c_nsm = 2 ** s * g((n + s + 1) / 2) / (math.pi ** (n / 2) * g((1 - s) / 2))
            assert riesz_potential_constant(n, s) == pytest.approx(c_ns, rel=1e-12)
            assert frac_laplacian_constant(n, s) == pytest.approx(c_nsp, rel=1e-12)
            assert frac_gradient_constant(n, s) == pytest.approx(c_nsm, rel=1e-12)


def test_frac_constants_keys():
    """frac_constants inclui c_{n,1-s}."""
    constants = frac_constants(2, 0.4)
    assert set(constants) == {"c_ns", "c_nsp", "c_nsm", "c_n1ms"}
    assert constants["c_n1ms"] == pytest.approx(riesz_potential_constant(2, 0.6), rel=1e-15)


def test_frac_constants_reject_order():
    """s fora de (0, 1) ou n fora de {1, 2, 3}."""
    with pytest.raises(InvalidOrderError):
        frac_constants(1, 1.5)
    with pytest.raises(InvalidOrderError):
        frac_constants(1, 0.0)
    with pytest.raises(InvalidOrderError):
        frac_constants(4, 0.5)


def test_liouville_kernel_constants():
    """c_+ = 1/(2 cos(pi s/2)) e c_- = 1/(2 sin(pi s/2))."""
    for s in (0.3, 0.5, 0.7):
        c_plus, c_minus = liouville_kernel_constants(s)
        assert c_plus == pytest.approx(1.0 / (2.0 * math.cos(math.pi * s / 2.0)), rel=1e-12)
        assert c_minus == pytest.approx(1.0 / (2.0 * math.sin(math.pi * s / 2.0)), rel=1e-12)
    c_plus, c_minus = liouville_kernel_constants(0.5)
    assert c_plus == pytest.approx(c_minus, rel=1e-12)


# ============================================================================
# QUADRATURA
# ============================================================================

def test_cell_moment_of_constant():
    """M_n(0) = volume da célula unitária."""
    for n in (1, 2, 3):
        assert cell_moment(n, 0.0) == pytest.approx(1.0, rel=1e-10)


def test_cube_moment_second_moment():
    """int |z|^2 em [-1/2, 1/2]^2 = 1/6."""
    assert cube_moment(2, 0.5, 2.0) == pytest.approx(1.0 / 6.0, rel=1e-12)


def test_cube_moment_not_integrable():
    """|z|^p com p + n <= 0 não é integrável."""
    with pytest.raises(ValueError):
        cube_moment(2, 0.5, -2.0)


def test_outside_cube_integral_1d():
    """int_{|z| > 1} z^{-2} dz = 2."""
    assert outside_cube_integral(1, 1.0, 2.0) == pytest.approx(2.0, rel=1e-14)


def test_lattice_zeta():
    """Z_1(2) = pi^2/3 e Z_2(4) = 4 zeta(2) beta(2)."""
    assert lattice_zeta(1, 2.0) == pytest.approx(math.pi ** 2 / 3.0, rel=1e-13)
    catalan = 0.915965594177219
    assert lattice_zeta(2, 4.0) == pytest.approx(4.0 * (math.pi ** 2 / 6.0) * catalan, rel=1e-5)


def test_truncated_lattice_zeta():
    """A parte com |k|_inf > 1 de Z_1(2) é Z_1(2) - 2."""
    assert truncated_lattice_zeta(1, 2.0, 1) == pytest.approx(math.pi ** 2 / 3.0 - 2.0, rel=1e-12)


def test_singular_weight():
    """Em n = 1, W(p) = -2 zeta(-p); W(0) = 1 é a largura da célula."""
    assert singular_weight(1, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert singular_weight(1, -0.5) == pytest.approx(2.0 * one_sided_weight(-0.5), rel=1e-14)
    assert singular_weight(2, 0.0) == pytest.approx(1.0, rel=1e-10)
