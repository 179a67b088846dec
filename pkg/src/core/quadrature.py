"""
Quadratura direta de kernels singulares no grid.

Reúne os ingredientes do caminho singular dos operadores:
    - momentos de |z|^p em cubos (célula singular e complemento de cubo),
      reduzidos a integrais de face pelo teorema da divergência;
    - somas de rede sum_{k != 0} |k|^{-sigma} (zeta de Epstein);
    - kernels amostrados nos deslocamentos k h, |k_i| <= N-1, para fftconvolve;
    - kernels de toro (somas sobre as imagens periódicas) para convolução circular.
"""

from functools import lru_cache

import numpy as np
from scipy import fft as spfft, integrate, special
from scipy.signal import fftconvolve

from core.models import Grid

# raio (em células) da soma explícita na zeta de rede em n >= 2
_LATTICE_RADIUS = {2: 64, 3: 24}


@lru_cache(maxsize=None)
def face_integral(n: int, a: float, p: float) -> float:
    """
    Integral de (a^2 + |w|^2)^{p/2} sobre a face [-a, a]^{n-1}.

    Em n = 1 a face é um ponto e o valor é a^p.
    """
    if n == 1:
        return a ** p
    if n == 2:
        value, _ = integrate.quad(lambda w: (a * a + w * w) ** (p / 2.0), -a, a,
                                  epsabs=0.0, epsrel=1e-13, limit=200)
        return value
    value, _ = integrate.dblquad(lambda w2, w1: (a * a + w1 * w1 + w2 * w2) ** (p / 2.0),
                                 -a, a, -a, a, epsabs=0.0, epsrel=1e-12)
    return value


def cube_moment(n: int, a: float, p: float) -> float:
    """
    Integral de |z|^p sobre o cubo [-a, a]^n, para p + n > 0.

    div(|z|^p z) = (p + n)|z|^p, logo a integral vale 2 n a F / (p + n),
    onde F é a integral de face.
    """
    if p + n <= 0:
        raise ValueError(f"|z|^{p} nao e integravel na origem em dimensao {n}")
    return 2.0 * n * a * face_integral(n, a, p) / (p + n)


def cell_moment(n: int, p: float) -> float:
    """M_n(p): integral de |z|^p na célula unitária centrada [-1/2, 1/2]^n."""
    return cube_moment(n, 0.5, p)


def outside_cube_integral(n: int, a: float, sigma: float) -> float:
    """Integral de |z|^{-sigma} fora do cubo [-a, a]^n, para sigma > n."""
    if sigma <= n:
        raise ValueError("sigma deve exceder n")
    return 2.0 * n * a * face_integral(n, a, -sigma) / (sigma - n)


@lru_cache(maxsize=None)
def lattice_zeta(n: int, sigma: float) -> float:
    """
    Z_n(sigma) = soma sobre k em Z^n, k != 0, de |k|^{-sigma}, com sigma > n.

    n = 1: 2 zeta(sigma). n >= 2: soma explícita em |k|_inf <= M mais a
    integral do complemento do cubo de meia aresta M + 1/2.
    """
    if n == 1:
        return 2.0 * float(special.zeta(sigma))
    M = _LATTICE_RADIUS[n]
    k = np.arange(-M, M + 1, dtype=np.float64)
    mesh = np.meshgrid(*([k] * n), indexing="ij")
    r2 = sum(m * m for m in mesh)
    r2[(M,) * n] = 1.0
    terms = r2 ** (-sigma / 2.0)
    terms[(M,) * n] = 0.0
    return float(terms.sum()) + outside_cube_integral(n, M + 0.5, sigma)


def truncated_lattice_zeta(n: int, sigma: float, radius: int) -> float:
    """Parte de Z_n(sigma) com |k|_inf > radius."""
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    mesh = np.meshgrid(*([k] * n), indexing="ij")
    r2 = sum(m * m for m in mesh)
    r2[(radius,) * n] = 1.0
    terms = r2 ** (-sigma / 2.0)
    terms[(radius,) * n] = 0.0
    return lattice_zeta(n, sigma) - float(terms.sum())


def offsets(grid: Grid):
    """
    Deslocamentos k h com |k_i| <= N-1 (malha ij) e suas normas.

    Returns:
        tuple: (lista de arrays de coordenadas, array |z|), forma (2N-1,)^n.
    """
    k = np.arange(-(grid.N - 1), grid.N, dtype=np.float64) * grid.h
    mesh = np.meshgrid(*([k] * grid.n), indexing="ij")
    radius = np.sqrt(sum(m * m for m in mesh))
    return mesh, radius


def radial_kernel(grid: Grid, power: float) -> np.ndarray:
    """|z|^{power} nos deslocamentos, com valor 0 em z = 0."""
    _, radius = offsets(grid)
    center = (grid.N - 1,) * grid.n
    safe = radius.copy()
    safe[center] = 1.0
    kernel = safe ** power
    kernel[center] = 0.0
    return kernel


def odd_kernel(grid: Grid, axis: int, power: float) -> np.ndarray:
    """z_j |z|^{power} nos deslocamentos, com valor 0 em z = 0."""
    mesh, radius = offsets(grid)
    center = (grid.N - 1,) * grid.n
    safe = radius.copy()
    safe[center] = 1.0
    kernel = mesh[axis] * safe ** power
    kernel[center] = 0.0
    return kernel


def lattice_sum(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """
    Soma sum_y kernel(x - y) values(y) sobre os nós do box, para cada nó x.

    O kernel está amostrado em deslocamentos |k_i| <= N-1, de modo que o
    recorte 'same' de fftconvolve devolve exatamente a soma sobre o box.
    """
    return fftconvolve(values, kernel, mode="same")


def box_tail(grid: Grid, s: float) -> np.ndarray:
    """
    Para cada nó x, soma de |x - y|^{-n-s} h^n sobre nós y da rede fora do box.

    Igual a h^{-s} Z_n(n+s) menos a soma sobre o box (y != x).
    """
    n = grid.n
    inside = lattice_sum(np.ones(grid.shape), radial_kernel(grid, -(n + s)))
    full = grid.h ** (-s) * lattice_zeta(n, n + s)
    return np.maximum(full - inside * grid.h ** n, 0.0)


def second_difference_laplacian(values: np.ndarray, h: float, periodic: bool = False) -> np.ndarray:
    """Laplaciano por diferenças centrais, com extensão por zero fora do box
    ou, se periodic, com as imagens do toro."""
    padded = np.pad(values, 1, mode="wrap" if periodic else "constant")
    core = tuple(slice(1, -1) for _ in range(values.ndim))
    result = -2.0 * values.ndim * values
    for axis in range(values.ndim):
        result = result + np.roll(padded, 1, axis=axis)[core] + np.roll(padded, -1, axis=axis)[core]
    return result / (h * h)


def central_difference(values: np.ndarray, h: float, axis: int, periodic: bool = False) -> np.ndarray:
    """Derivada central na direção axis (extensão por zero ou periódica)."""
    padded = np.pad(values, 1, mode="wrap" if periodic else "constant")
    core = tuple(slice(1, -1) for _ in range(values.ndim))
    return (np.roll(padded, -1, axis=axis)[core] - np.roll(padded, 1, axis=axis)[core]) / (2.0 * h)


def singular_weight(n: int, p: float) -> float:
    """
    Peso W da célula singular para o termo |z|^p do modelo de Taylor:
    a contribuição local vale W h^{p+n} vezes o coeficiente de Taylor.

    Em n = 1 o peso -2 zeta(-p) também absorve o defeito da regra do ponto
    médio nas demais células, o que torna a soma exata para o modelo.
    Em n >= 2 o peso é o momento M_n(p) da célula.
    """
    if n == 1:
        return -2.0 * float(special.zeta(-p))
    return cell_moment(n, p)


def one_sided_weight(p: float) -> float:
    """Metade de singular_weight(1, p): versão em semirreta, -zeta(-p)."""
    return -float(special.zeta(-p))


# ============================================================================
# KERNELS NO TORO
# ============================================================================
# Em grid periódico a soma de rede corre sobre todas as imagens y + m N h.
# Agrupando por resíduo d = k mod N, o kernel passa a ser indexado por d
# (ordem natural da FFT) e a soma vira convolução circular.

# imagens explícitas |m|_inf <= M nas somas de toro em n >= 2
_IMAGE_RADIUS = {2: 4, 3: 2}


def _wrapped_offsets(n: int, N: int):
    """Resíduos d em [-N/2, N/2)^n (ordem da FFT, malha ij)."""
    d = np.round(np.fft.fftfreq(N) * N)
    return np.meshgrid(*([d] * n), indexing="ij")


def _images(n: int):
    M = _IMAGE_RADIUS[n]
    return [np.array(index, dtype=np.float64) - M for index in np.ndindex(*([2 * M + 1] * n))]


def _freeze(kernel: np.ndarray) -> np.ndarray:
    kernel.setflags(write=False)
    return kernel


@lru_cache(maxsize=None)
def torus_radial_kernel(n: int, N: int, sigma: float) -> np.ndarray:
    """
    K(d) = soma sobre m de |d + m N|^{-sigma}, sem o termo d + m N = 0.

    n = 1 é exato pela zeta de Hurwitz. Em n >= 2 as imagens |m|_inf <= M
    são somadas explicitamente e o resto é distribuído por igual, de modo
    que sum_d K(d) = Z_n(sigma) (constantes são anuladas exatamente).
    """
    if n == 1:
        q = np.arange(1, N, dtype=np.float64) / N
        kernel = np.empty(N)
        kernel[0] = 2.0 * float(special.zeta(sigma))
        kernel[1:] = special.zeta(sigma, q) + special.zeta(sigma, 1.0 - q)
        return _freeze(kernel * float(N) ** (-sigma))
    mesh = _wrapped_offsets(n, N)
    kernel = np.zeros((N,) * n)
    for m in _images(n):
        r2 = sum((d + mi * N) ** 2 for d, mi in zip(mesh, m))
        zero = r2 == 0.0
        kernel += np.where(zero, 0.0, np.where(zero, 1.0, r2) ** (-sigma / 2.0))
    kernel += (lattice_zeta(n, sigma) - float(kernel.sum())) / N ** n
    return _freeze(kernel)


@lru_cache(maxsize=None)
def torus_odd_kernel(n: int, N: int, axis: int, sigma: float) -> np.ndarray:
    """
    O(d) = soma sobre m de (d + m N)_j |d + m N|^{-sigma}, sigma > n + 1.

    Ímpar em d_j; o plano d_j = -N/2 é fixo pela reflexão e vale 0.
    """
    if n == 1:
        q = np.arange(1, N, dtype=np.float64) / N
        kernel = np.zeros(N)
        kernel[1:] = special.zeta(sigma - 1.0, q) - special.zeta(sigma - 1.0, 1.0 - q)
        if N % 2 == 0:
            kernel[N // 2] = 0.0
        return _freeze(kernel * float(N) ** (1.0 - sigma))
    mesh = _wrapped_offsets(n, N)
    kernel = np.zeros((N,) * n)
    for m in _images(n):
        z = [d + mi * N for d, mi in zip(mesh, m)]
        r2 = sum(c * c for c in z)
        zero = r2 == 0.0
        kernel += np.where(zero, 0.0, z[axis] * np.where(zero, 1.0, r2) ** (-sigma / 2.0))
    kernel[mesh[axis] == -(N // 2)] = 0.0
    return _freeze(kernel)


@lru_cache(maxsize=None)
def torus_one_sided_kernel(N: int, sigma: float, side: str) -> np.ndarray:
    """
    Kernel unilateral em n = 1: K_+(d) = soma sobre m >= 0 de (d + m N)^{-sigma},
    sem o termo nulo; K_-(d) = K_+(-d mod N).
    """
    q = np.arange(1, N, dtype=np.float64) / N
    kernel = np.empty(N)
    kernel[0] = float(special.zeta(sigma))
    kernel[1:] = special.zeta(sigma, q)
    if side == "-":
        kernel = np.roll(kernel[::-1], 1)
    return _freeze(kernel * float(N) ** (-sigma))


def circular_sum(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Convolução circular sum_d kernel(d) values(x - d) por rfftn."""
    spectrum = spfft.rfftn(values) * spfft.rfftn(kernel)
    return spfft.irfftn(spectrum, s=values.shape)


# ============================================================================
# CASCAS DO CAMPO DISTANTE
# ============================================================================

_GAUSS_NODES = 10


def _box_integral(lower: np.ndarray, upper: np.ndarray, sigma: float) -> float:
    """Integral de |z|^{-sigma} na caixa [lower, upper], longe da origem (Gauss-Legendre)."""
    nodes, weights = np.polynomial.legendre.leggauss(_GAUSS_NODES)
    axes, factors = [], []
    for lo, hi in zip(lower, upper):
        if hi <= lo:
            return 0.0
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        axes.append(mid + half * nodes)
        factors.append(half * weights)
    mesh = np.meshgrid(*axes, indexing="ij")
    weight = np.prod(np.meshgrid(*factors, indexing="ij"), axis=0)
    r2 = sum(m * m for m in mesh)
    return float(np.sum(weight * r2 ** (-sigma / 2.0)))


@lru_cache(maxsize=None)
def shell_cell_integral(offset: tuple, inner: float, outer: float, sigma: float) -> float:
    """
    Integral de |z|^{-sigma} em (offset + [-1/2, 1/2]^n) intersectado com a
    casca inner < |z|_inf <= outer.

    É a diferença entre os recortes da célula pelos cubos de meia aresta
    outer e inner; a célula não pode conter a origem.
    """
    lower = np.asarray(offset, dtype=np.float64) - 0.5
    upper = lower + 1.0

    def clipped(a: float) -> float:
        return _box_integral(np.maximum(lower, -a), np.minimum(upper, a), sigma)

    return max(clipped(outer) - clipped(inner), 0.0)
