"""
Grids uniformes, amostragem de famílias de teste e operações elementares de campos.

Todos os campos vivem em um Grid [-L, L)^n com N nós por eixo (x_k = -L + k h).
A ordem linear dos valores é row-major (o último eixo varia mais rápido).
"""

import math
from dataclasses import replace
from typing import Tuple, Sequence

import numpy as np

from core.exceptions import InvalidGridError, InvalidFamilyError
from core.models import Grid, ScalarField, TestFamily, FamilyKind

# cauda máxima tolerada na fronteira do box, relativa ao pico da família
BOUNDARY_TAIL_RTOL = 1e-12

MIN_POINTS = 8


def make_grid(n: int, N: int, L: float, periodic: bool = True) -> Grid:
    """
    Cria um Grid validado.

    Args:
        n: Dimensão (1, 2 ou 3).
        N: Pontos por eixo, potência de dois >= 8.
        L: Meia largura do box (> 0).
        periodic: Se True, operadores espectrais tratam o box como toro.

    Returns:
        Grid: Grid com h = 2L/N.

    Raises:
        InvalidGridError: Se algum parâmetro for inválido.

    Example:
        >>> make_grid(1, 256, 16.0).h
        0.125
    """
    if n not in (1, 2, 3):
        raise InvalidGridError("n", n, "dimensao deve ser 1, 2 ou 3")
    if not isinstance(N, (int, np.integer)) or N < MIN_POINTS:
        raise InvalidGridError("N", N, f"N deve ser inteiro >= {MIN_POINTS}")
    if N & (N - 1) != 0:
        raise InvalidGridError("N", N, "N deve ser potencia de dois")
    if not (isinstance(L, (int, float)) and math.isfinite(L) and L > 0):
        raise InvalidGridError("L", L, "L deve ser positivo e finito")
    return Grid(n=int(n), N=int(N), L=float(L), periodic=bool(periodic))


def default_grid(n: int) -> Grid:
    """Grid padrão: L = 16, N = 256 em n <= 2 e N = 64 em n = 3."""
    return make_grid(n, 64 if n == 3 else 256, 16.0, True)


def coordinates(grid: Grid) -> Tuple[np.ndarray, ...]:
    """Malha de coordenadas (indexing='ij'), uma matriz por eixo."""
    axis = grid.axis()
    return tuple(np.meshgrid(*([axis] * grid.n), indexing="ij"))


def flatten_index(grid: Grid, multi_index: Sequence[int]) -> int:
    """Índice linear row-major de um multi-índice."""
    return int(np.ravel_multi_index(tuple(multi_index), grid.shape))


def unflatten_index(grid: Grid, index: int) -> Tuple[int, ...]:
    """Multi-índice de um índice linear row-major."""
    return tuple(int(i) for i in np.unravel_index(int(index), grid.shape))


def _center(family: TestFamily, grid: Grid) -> np.ndarray:
    if family.center is None:
        return np.zeros(grid.n)
    center = np.asarray(family.center, dtype=np.float64)
    if center.shape != (grid.n,):
        raise InvalidFamilyError(family.kind.value, f"centro com dimensao {center.size} != {grid.n}")
    return center


def _radius(grid: Grid, center: np.ndarray) -> np.ndarray:
    coords = coordinates(grid)
    r2 = sum((x - c) ** 2 for x, c in zip(coords, center))
    return np.sqrt(r2)


def _bump(r: np.ndarray, width: float) -> np.ndarray:
    q = (r / width) ** 2
    out = np.zeros_like(r)
    inside = q < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - q[inside]))
    return out


def _patch_singular_node(values: np.ndarray, singular: np.ndarray) -> np.ndarray:
    """Substitui nós singulares pela média dos 2n vizinhos axiais."""
    if not singular.any():
        return values
    neighbours = np.zeros_like(values)
    for axis in range(values.ndim):
        neighbours += np.roll(values, 1, axis=axis) + np.roll(values, -1, axis=axis)
    values = values.copy()
    values[singular] = neighbours[singular] / (2 * values.ndim)
    return values


def boundary_max(values: np.ndarray) -> float:
    """Máximo de |u| na camada de nós da fronteira do box."""
    values = np.abs(np.asarray(values))
    result = 0.0
    for axis in range(values.ndim):
        result = max(result, float(np.take(values, 0, axis=axis).max()),
                     float(np.take(values, -1, axis=axis).max()))
    return result


def sample(family: TestFamily, grid: Grid) -> ScalarField:
    """
    Amostra uma família de teste nos nós do grid.

    Args:
        family: Família com centro, largura, amplitude e parâmetros.
        grid: Grid de destino.

    Returns:
        ScalarField: Valores pontuais da família.

    Raises:
        InvalidFamilyError: Se a cauda na fronteira exceder 1e-12 do pico,
            se indicator_ball tiver r >= L/2 ou se parâmetros forem inválidos.
    """
    kind = FamilyKind(family.kind)
    if family.width <= 0:
        raise InvalidFamilyError(kind.value, "largura deve ser positiva")
    center = _center(family, grid)
    A = family.amplitude
    eps = family.width
    check_tail = True
    peak = abs(A)

    if kind == FamilyKind.GAUSSIAN:
        values = A * np.exp(-math.pi * (_radius(grid, center) / eps) ** 2)

    elif kind == FamilyKind.BUMP:
        values = A * _bump(_radius(grid, center), eps)

    elif kind == FamilyKind.SHIFTED_BUMP_PAIR:
        d = float(family.params.get("separation", eps))
        if d < eps:
            raise InvalidFamilyError(kind.value, f"separacao {d} < largura {eps}: suportes se sobrepoem")
        shift = np.zeros(grid.n)
        shift[0] = d
        values = A * (_bump(_radius(grid, center + shift), eps) - _bump(_radius(grid, center - shift), eps))

    elif kind == FamilyKind.LOG_ABS:
        r = _radius(grid, center)
        singular = r == 0.0
        values = A * np.log(np.where(singular, 1.0, r))
        values = _patch_singular_node(values, singular)
        check_tail = False

    elif kind == FamilyKind.INDICATOR_BALL:
        radius = family.radius
        if radius <= 0 or radius >= grid.L / 2.0:
            raise InvalidFamilyError(kind.value, f"raio {radius} fora de (0, L/2)")
        edge = family.params.get("edge", "closed")
        r = _radius(grid, center)
        on_edge = np.abs(r - radius) <= 1e-12 * radius
        if edge == "closed":
            values = A * ((r < radius) | on_edge).astype(np.float64)
        elif edge == "midpoint":
            values = A * np.where(on_edge, 0.5, (r < radius).astype(np.float64))
        else:
            raise InvalidFamilyError(kind.value, f"edge '{edge}' desconhecido (closed|midpoint)")

    elif kind == FamilyKind.RIESZ_KERNEL_MOLLIFIED:
        r = _radius(grid, center)
        power = family.params.get("power")
        if power is None:
            peak = abs(A) * eps ** (-grid.n)
            values = A * eps ** (-grid.n) * np.exp(-math.pi * (r / eps) ** 2)
        else:
            values = A * (r ** 2 + eps ** 2) ** (-float(power) / 2.0)
            check_tail = False

    else:
        raise InvalidFamilyError(str(kind), "familia desconhecida")

    if check_tail and boundary_max(values) > BOUNDARY_TAIL_RTOL * peak:
        raise InvalidFamilyError(
            kind.value, f"cauda {boundary_max(values):.3e} na fronteira excede {BOUNDARY_TAIL_RTOL:g} do pico"
        )
    return ScalarField(grid, values)


def dilate(family: TestFamily, r: float, n: int = 1) -> TestFamily:
    """
    Família de u_r(x) = u(x/r) em dimensão n.

    Raises:
        InvalidFamilyError: Para log_abs, que não é fechada por dilatação.
    """
    kind = FamilyKind(family.kind)
    if kind == FamilyKind.LOG_ABS:
        raise InvalidFamilyError(kind.value, "log|x/r| nao pertence a familia")
    params = dict(family.params)
    amplitude = family.amplitude
    if "separation" in params:
        params["separation"] = float(params["separation"]) * r
    if kind == FamilyKind.RIESZ_KERNEL_MOLLIFIED:
        power = params.get("power")
        if power is None:
            amplitude *= r ** n
        else:
            amplitude *= r ** float(power)
    center = None if family.center is None else tuple(c * r for c in family.center)
    return replace(family, center=center, width=family.width * r, radius=family.radius * r,
                   amplitude=amplitude, params=params)


def field_mean(field: ScalarField) -> float:
    """Média dos valores (média aritmética dos nós)."""
    return float(np.mean(field.values))


def subtract_mean(field: ScalarField) -> ScalarField:
    """
    Subtrai a média do campo.

    O resíduo de arredondamento da média é removido numa segunda passada,
    o que garante mean_zero no resultado. Campo que já tem mean_zero volta
    com os mesmos valores, logo aplicar duas vezes dá exatamente o mesmo campo.
    """
    if field.mean_zero:
        return ScalarField(field.grid, field.values.copy())
    values = field.values - np.mean(field.values)
    values = values - np.mean(values)
    return ScalarField(field.grid, values)


def total_variation(field: ScalarField) -> float:
    """Variação total discreta: h^{n-1} * soma das diferenças absolutas entre vizinhos."""
    values = field.values
    total = 0.0
    for axis in range(values.ndim):
        total += float(np.abs(np.diff(values, axis=axis)).sum())
    return total * field.grid.h ** (field.grid.n - 1)
