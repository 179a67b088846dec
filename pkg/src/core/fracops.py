"""
Operadores fracionários em duas realizações independentes.

- spectral: multiplicadores de Fourier no toro do box (exige grid periódico).
  Convenção f^(xi) = int f(x) e^{-2 pi i x.xi} dx, frequências discretas
  xi_k = fftfreq(N, h). O modo zero de todo multiplicador singular vale 0.
- singular: quadratura direta das formas integrais em R^n, com a célula
  singular corrigida pelo modelo de Taylor (ver core.quadrature.singular_weight).
  Em grid periódico o campo é a função periódica do toro e a soma corre sobre
  todas as imagens (kernels de toro); em grid aberto o campo é estendido por
  zero fora do box. O potencial I_s é a exceção: a soma das imagens de
  |z|^{s-n} diverge, e ele usa sempre a extensão por zero.

Símbolos:
    (-Delta)^{s/2}   (2 pi |xi|)^s
    I_s              (2 pi |xi|)^{-s}
    R_j              -i xi_j / |xi|            (kernel de Hilbert 1/(pi x) em n = 1)
    gradiente        2 pi i xi_j
    grad. frac.      2 pi i xi_j (2 pi |xi|)^{s-1} = I_{1-s} grad = -R_j (-Delta)^{s/2}

Nos símbolos ímpares o plano de Nyquist do eixo j é zerado, o que mantém a
saída real para entrada real.
"""

import math
from typing import List, Tuple

import numpy as np
from scipy import fft as spfft

from core.exceptions import PreconditionError, MeanNotZeroError, InvalidOrderError
from core.models import Grid, ScalarField, VectorField, FracOrder, OperatorMethod, LiouvilleFit
from core.special import frac_constants, gamma_eval, liouville_kernel_constants
from core import quadrature


def make_frac_order(n: int, s: float) -> FracOrder:
    """
    Cria a ordem fracionária com as quatro constantes de normalização.

    Raises:
        InvalidOrderError: Se s estiver fora de (0, 1) ou n fora de {1,2,3}.

    Example:
        >>> round(make_frac_order(1, 0.5).c_ns, 7)
        0.3989423
    """
    constants = frac_constants(n, s)
    return FracOrder(n=n, s=float(s), **constants)


# ============================================================================
# SÍMBOLOS ESPECTRAIS
# ============================================================================

def frequencies(grid: Grid) -> Tuple[List[np.ndarray], np.ndarray]:
    """Frequências discretas por eixo (broadcast ij) e |xi|."""
    freq = np.fft.fftfreq(grid.N, d=grid.h)
    axes = []
    for j in range(grid.n):
        shape = [1] * grid.n
        shape[j] = grid.N
        axes.append(freq.reshape(shape))
    magnitude = np.sqrt(sum(np.broadcast_to(x, grid.shape) ** 2 for x in axes))
    return axes, magnitude


def symbol_power(grid: Grid, s: float) -> np.ndarray:
    """(2 pi |xi|)^s com o modo zero levado a 0 (vale também para s < 0)."""
    _, magnitude = frequencies(grid)
    zero = magnitude == 0.0
    safe = np.where(zero, 1.0, 2.0 * math.pi * magnitude)
    symbol = safe ** s
    symbol[zero] = 0.0
    return symbol


def _nyquist_mask(grid: Grid, axis: int) -> np.ndarray:
    shape = [1] * grid.n
    shape[axis] = grid.N
    mask = np.ones(grid.N)
    mask[grid.N // 2] = 0.0
    return np.broadcast_to(mask.reshape(shape), grid.shape)


def riesz_symbol(grid: Grid, axis: int) -> np.ndarray:
    """-i xi_j/|xi|, modo zero e plano de Nyquist do eixo j levados a 0."""
    axes, magnitude = frequencies(grid)
    zero = magnitude == 0.0
    ratio = np.broadcast_to(axes[axis], grid.shape) / np.where(zero, 1.0, magnitude)
    symbol = -1j * ratio * _nyquist_mask(grid, axis)
    symbol[zero] = 0.0
    return symbol


def gradient_symbol(grid: Grid, axis: int) -> np.ndarray:
    """2 pi i xi_j com o plano de Nyquist do eixo j levado a 0."""
    axes, _ = frequencies(grid)
    return 2j * math.pi * np.broadcast_to(axes[axis], grid.shape) * _nyquist_mask(grid, axis)


def spectral_apply(field: ScalarField, symbol: np.ndarray) -> Tuple[ScalarField, float]:
    """
    Aplica um multiplicador de Fourier.

    Returns:
        tuple: (campo real resultante, resíduo imaginário máximo).
    """
    transformed = spfft.ifftn(spfft.fftn(field.values) * symbol)
    return ScalarField(field.grid, transformed.real), float(np.max(np.abs(transformed.imag)))


def require_periodic(grid: Grid, operation: str) -> None:
    if not grid.periodic:
        raise PreconditionError(
            operation, "o caminho espectral exige grid periodico",
            suggestion="Use --method singular ou um grid com periodic=1."
        )


def _check_dimension(field: ScalarField, order: FracOrder, operation: str) -> None:
    if field.grid.n != order.n:
        raise PreconditionError(operation, f"ordem para n={order.n} aplicada a campo com n={field.grid.n}")


# ============================================================================
# OPERADORES
# ============================================================================

def frac_laplacian(field: ScalarField, order: FracOrder,
                   method: OperatorMethod = OperatorMethod.SPECTRAL) -> ScalarField:
    """
    (-Delta)^{s/2} f.

    Singular: c_{n,s,+} [f(x) h^{-s} Z_n(n+s) - h^n sum_y |x-y|^{-n-s} f(y)]
    menos a correção da célula singular c Delta_h f(x)/(2n) W h^{2-s}.
    Em grid aberto o primeiro termo já inclui a cauda fora do box (f = 0 lá);
    em grid periódico a soma usa o kernel de toro.
    """
    _check_dimension(field, order, "frac_laplacian")
    grid = field.grid
    if OperatorMethod(method) == OperatorMethod.SPECTRAL:
        require_periodic(grid, "frac_laplacian")
        return spectral_apply(field, symbol_power(grid, order.s))[0]
    n, s, h = grid.n, order.s, grid.h
    full = h ** (-s) * quadrature.lattice_zeta(n, n + s)
    if grid.periodic:
        kernel = quadrature.torus_radial_kernel(n, grid.N, n + s)
        convolved = quadrature.circular_sum(field.values, kernel) * h ** (-s)
    else:
        kernel = quadrature.radial_kernel(grid, -(n + s))
        convolved = quadrature.lattice_sum(field.values, kernel) * h ** n
    laplacian = quadrature.second_difference_laplacian(field.values, h, grid.periodic)
    local = laplacian / (2.0 * n) * quadrature.singular_weight(n, 2.0 - n - s) * h ** (2.0 - s)
    values = order.c_nsp * (field.values * full - convolved - local)
    return ScalarField(grid, values)


def riesz_potential(field: ScalarField, order: FracOrder,
                    method: OperatorMethod = OperatorMethod.SPECTRAL) -> ScalarField:
    """
    I_s f = (-Delta)^{-s/2} f.

    Raises:
        MeanNotZeroError: No caminho espectral, se o campo não tiver média zero.
    """
    _check_dimension(field, order, "riesz_potential")
    grid = field.grid
    if OperatorMethod(method) == OperatorMethod.SPECTRAL:
        require_periodic(grid, "riesz_potential")
        if not field.mean_zero:
            raise MeanNotZeroError("riesz_potential", float(np.mean(field.values)))
        return spectral_apply(field, symbol_power(grid, -order.s))[0]
    n, s, h = grid.n, order.s, grid.h
    kernel = quadrature.radial_kernel(grid, s - n)
    convolved = quadrature.lattice_sum(field.values, kernel) * h ** n
    local = field.values * quadrature.singular_weight(n, s - n) * h ** s
    return ScalarField(grid, order.c_ns * (convolved + local))


def riesz_transform(field: ScalarField, j: int) -> ScalarField:
    """R_j f com símbolo -i xi_j/|xi| (espectral)."""
    grid = field.grid
    if not 0 <= j < grid.n:
        raise PreconditionError("riesz_transform", f"eixo {j} fora de [0, {grid.n})")
    require_periodic(grid, "riesz_transform")
    return spectral_apply(field, riesz_symbol(grid, j))[0]


def riesz_transform_all(field: ScalarField) -> VectorField:
    """Vetor (R_1 f, ..., R_n f)."""
    return VectorField(field.grid, [riesz_transform(field, j).values for j in range(field.grid.n)])


def gradient(field: ScalarField) -> VectorField:
    """Gradiente espectral."""
    grid = field.grid
    require_periodic(grid, "gradient")
    return VectorField(grid, [spectral_apply(field, gradient_symbol(grid, j))[0].values
                              for j in range(grid.n)])


def frac_gradient(field: ScalarField, order: FracOrder,
                  method: OperatorMethod = OperatorMethod.SPECTRAL) -> VectorField:
    """
    Gradiente fracionário, igual a I_{1-s} grad f.

    Singular: c_{n,s,-} int (f(x) - f(y)) (x-y)/|x-y|^{n+s+1} dy, isto é
    c [h^n sum_z f(x+z) z_j |z|^{-n-s-1} + d_j f(x)/n W h^{1-s}]. O termo
    f(x) sum_z z_j |z|^{-n-s-1} some pelo pareamento simétrico +-z sobre a rede.
    """
    _check_dimension(field, order, "frac_gradient")
    grid = field.grid
    n, s, h = grid.n, order.s, grid.h
    if OperatorMethod(method) == OperatorMethod.SPECTRAL:
        require_periodic(grid, "frac_gradient")
        power = symbol_power(grid, s - 1.0)
        return VectorField(grid, [spectral_apply(field, gradient_symbol(grid, j) * power)[0].values
                                  for j in range(n)])
    weight = quadrature.singular_weight(n, 1.0 - n - s)
    components = []
    for j in range(n):
        # as somas usam kernel(x - y); com y = x + z o kernel é -z_j |z|^{...}
        if grid.periodic:
            kernel = -quadrature.torus_odd_kernel(n, grid.N, j, n + s + 1.0)
            convolved = quadrature.circular_sum(field.values, kernel) * h ** (-s)
        else:
            kernel = -quadrature.odd_kernel(grid, j, -(n + s + 1.0))
            convolved = quadrature.lattice_sum(field.values, kernel) * h ** n
        derivative = quadrature.central_difference(field.values, h, j, grid.periodic)
        components.append(order.c_nsm * (convolved + derivative / n * weight * h ** (1.0 - s)))
    return VectorField(grid, components)


def liouville_one_sided(field: ScalarField, s: float, side: str) -> ScalarField:
    """
    Derivada de Liouville unilateral em n = 1.

    d_+ u(x) = -(s/Gamma(1-s)) int_0^inf (u(x - t) - u(x)) t^{-1-s} dt
    d_- u(x) = -(s/Gamma(1-s)) int_0^inf (u(x + t) - u(x)) t^{-1-s} dt

    Regra do ponto médio nos nós t = k h, termo -u(x) h^{-s} zeta(1+s) para a
    semirreta inteira (u = 0 fora do box em grid aberto, imagens periódicas
    pelo kernel de Hurwitz em grid periódico) e correção local de Taylor
    a W(-s) h^{1-s} + b W(1-s) h^{2-s}, com a = -+u', b = u''/2.

    Raises:
        PreconditionError: Se n != 1 ou side não for '+' ou '-'.
    """
    grid = field.grid
    if grid.n != 1:
        raise PreconditionError("liouville_one_sided", f"definida apenas em n = 1 (recebeu n = {grid.n})")
    if side not in ("+", "-"):
        raise PreconditionError("liouville_one_sided", f"lado '{side}' invalido (use + ou -)")
    if not 0.0 < s < 1.0:
        raise InvalidOrderError("s", s, "(0, 1)")
    h = grid.h
    if grid.periodic:
        kernel = quadrature.torus_one_sided_kernel(grid.N, 1.0 + s, side)
        inside = quadrature.circular_sum(field.values, kernel) * h ** (-s)
    else:
        mesh, radius = quadrature.offsets(grid)
        w = mesh[0]
        positive = w > 0 if side == "+" else w < 0
        kernel = np.where(positive, np.where(positive, radius, 1.0) ** (-1.0 - s), 0.0)
        inside = quadrature.lattice_sum(field.values, kernel) * h
    total = inside - field.values * h ** (-s) * 0.5 * quadrature.lattice_zeta(1, 1.0 + s)
    sign = -1.0 if side == "+" else 1.0
    first = sign * quadrature.central_difference(field.values, h, 0, grid.periodic)
    second = 0.5 * quadrature.second_difference_laplacian(field.values, h, grid.periodic)
    total = total + first * quadrature.one_sided_weight(-s) * h ** (1.0 - s)
    total = total + second * quadrature.one_sided_weight(1.0 - s) * h ** (2.0 - s)
    return ScalarField(grid, -(s / gamma_eval(1.0 - s)) * total)


def fit_liouville_constants(grid: Grid, s: float, widths=(1.0, 1.5, 2.0)) -> LiouvilleFit:
    """
    Ajusta c_+ e c_- da forma unidimensional por mínimos quadrados.

    c_+ em (-Delta)^{s/2} u = c_+ (d_+ + d_-) u e c_- em grad^s u = c_- (d_+ - d_-) u,
    sobre gaussianas de larguras ``widths``, em todo o toro. As referências
    são os operadores espectrais; as derivadas unilaterais usam as imagens
    periódicas, de modo que os dois lados veem a mesma função.

    Raises:
        PreconditionError: Se n != 1 ou o grid não for periódico.

    Returns:
        LiouvilleFit: constantes ajustadas, resíduos relativos em L^2 e as
            constantes implicadas pelos kernels (apenas informativas).
    """
    from core.grid import sample
    from core.models import TestFamily, FamilyKind

    if grid.n != 1:
        raise PreconditionError("fit_liouville_constants", "definida apenas em n = 1")
    require_periodic(grid, "fit_liouville_constants")
    order = make_frac_order(1, s)
    targets_plus, basis_plus, targets_minus, basis_minus = [], [], [], []
    for width in widths:
        u = sample(TestFamily(kind=FamilyKind.GAUSSIAN, width=width), grid)
        d_plus = liouville_one_sided(u, s, "+").values
        d_minus = liouville_one_sided(u, s, "-").values
        targets_plus.append(frac_laplacian(u, order, OperatorMethod.SPECTRAL).values)
        basis_plus.append(d_plus + d_minus)
        targets_minus.append(frac_gradient(u, order, OperatorMethod.SPECTRAL).components[0])
        basis_minus.append(d_plus - d_minus)

    def _fit(targets, basis):
        y = np.concatenate(targets)
        x = np.concatenate(basis)
        c = float(np.dot(x, y) / np.dot(x, x))
        residual = float(np.linalg.norm(y - c * x) / np.linalg.norm(y))
        return c, residual

    c_plus, res_plus = _fit(targets_plus, basis_plus)
    c_minus, res_minus = _fit(targets_minus, basis_minus)
    kernel_plus, kernel_minus = liouville_kernel_constants(s)
    return LiouvilleFit(
        s=s, c_plus=c_plus, c_minus=c_minus,
        residual_plus=res_plus, residual_minus=res_minus,
        kernel_c_plus=kernel_plus, kernel_c_minus=kernel_minus,
    )
