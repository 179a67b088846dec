"""
Modelos de dados do FracLab.

Este módulo define os DTOs usados em todo o projeto: grids, campos escalares
e vetoriais, famílias de teste, ordens fracionárias, conjuntos diádicos,
medidas discretas, problemas de capacidade e relatórios de verificação.

Os modelos que aparecem em relatórios JSON oferecem to_dict/from_dict.
"""

from dataclasses import dataclass, field
from typing import Optional, List, Dict, Any, Tuple
from enum import Enum

import numpy as np

from core.exceptions import PreconditionError


# Média considerada nula quando |média| <= MEAN_ZERO_RTOL * max|u|
MEAN_ZERO_RTOL = 1e-12


# ============================================================================
# ENUMS
# ============================================================================

class OperatorMethod(str, Enum):
    """Método de discretização de operadores."""
    SPECTRAL = "spectral"
    SINGULAR = "singular"


class FamilyKind(str, Enum):
    """Famílias de funções de teste."""
    GAUSSIAN = "gaussian"
    BUMP = "bump"
    SHIFTED_BUMP_PAIR = "shifted_bump_pair"
    LOG_ABS = "log_abs"
    INDICATOR_BALL = "indicator_ball"
    RIESZ_KERNEL_MOLLIFIED = "riesz_kernel_mollified"


class NormKind(str, Enum):
    """Tipos de norma e seminorma."""
    LP = "lp"
    WEAK_LP = "weak_lp"
    LORENTZ = "lorentz"
    GAGLIARDO = "gagliardo"
    HARDY = "hardy"
    BMO = "bmo"
    HS1 = "hs1"
    HS1_PLUS = "hs1_plus"
    HS1_MINUS = "hs1_minus"


class SeminormKind(str, Enum):
    """Seminormas de Riesz: completa, parte '+' e parte '-'."""
    HS1 = "hs1"
    PLUS = "hs1_plus"
    MINUS = "hs1_minus"


class HardyVariant(str, Enum):
    """Caracterizações da norma de Hardy H^1."""
    RIESZ = "riesz"
    MAXIMAL = "maximal"


class CapacityKind(str, Enum):
    """Espaços cujas capacidades variacionais são calculadas."""
    WS1 = "ws1"
    HS1 = "hs1"
    HS1_PLUS = "hs1_plus"
    HS1_MINUS = "hs1_minus"


class TraceMode(str, Enum):
    """Modo da desigualdade de traço."""
    STRONG = "strong"
    WEAK = "weak"


class Verdict(str, Enum):
    """Resultado de uma verificação."""
    PASS = "pass"
    FAIL = "fail"


# ============================================================================
# GRID E CAMPOS
# ============================================================================

@dataclass(frozen=True)
class Grid:
    """
    Grid uniforme no box [-L, L)^n com N pontos por eixo.

    Os nós são x_k = -L + k*h com h = 2L/N. A validação dos parâmetros fica
    em ``grid.make_grid``.

    Example:
        >>> g = Grid(n=1, N=256, L=16.0, periodic=True)
        >>> g.h
        0.125
    """

    n: int
    N: int
    L: float
    periodic: bool = True

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N ** self.n

    @property
    def cell_volume(self) -> float:
        return self.h ** self.n

    def axis(self) -> np.ndarray:
        """Coordenadas dos nós em um eixo."""
        return -self.L + self.h * np.arange(self.N)

    def to_dict(self) -> dict:
        """Converte o grid para dicionário JSON."""
        return {"n": self.n, "N": self.N, "L": self.L, "h": self.h, "periodic": self.periodic}

    @classmethod
    def from_dict(cls, data: dict) -> "Grid":
        """Cria um Grid a partir de um dicionário."""
        return cls(
            n=int(data["n"]),
            N=int(data["N"]),
            L=float(data["L"]),
            periodic=bool(data.get("periodic", True)),
        )


@dataclass
class ScalarField:
    """
    Função amostrada nos nós de um Grid.

    ``values`` tem forma ``grid.shape``; a ordem linear é row-major.
    ``mean_zero`` é calculado na construção.

    Raises:
        PreconditionError: Se algum valor não for finito.
    """

    grid: Grid
    values: np.ndarray
    mean_zero: bool = field(init=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(self.grid.shape)
        if not np.all(np.isfinite(self.values)):
            raise PreconditionError("ScalarField", "valores nao finitos (nan ou inf) no campo")
        scale = float(np.max(np.abs(self.values))) if self.values.size else 0.0
        self.mean_zero = abs(float(np.mean(self.values))) <= MEAN_ZERO_RTOL * scale

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, values)


@dataclass
class VectorField:
    """Campo vetorial com n componentes escalares no mesmo Grid."""

    grid: Grid
    components: List[np.ndarray]

    def __post_init__(self):
        if len(self.components) != self.grid.n:
            raise ValueError(
                f"VectorField precisa de {self.grid.n} componentes, recebeu {len(self.components)}"
            )
        self.components = [
            np.asarray(c, dtype=np.float64).reshape(self.grid.shape) for c in self.components
        ]

    def component(self, j: int) -> ScalarField:
        return ScalarField(self.grid, self.components[j])


@dataclass
class TestFamily:
    """
    Família de funções de teste com parâmetros.

    Parâmetros extras por família (em ``params``):
        - indicator_ball: ``edge`` = "closed" (padrão) ou "midpoint"
        - shifted_bump_pair: ``separation`` (padrão: width)
        - riesz_kernel_mollified: ``power`` (ausente = massa pontual mollificada)

    Example:
        >>> fam = TestFamily(kind=FamilyKind.GAUSSIAN, width=1.0)
        >>> fam.to_dict()["kind"]
        'gaussian'
    """

    __test__ = False

    kind: FamilyKind
    center: Optional[Tuple[float, ...]] = None
    width: float = 1.0
    amplitude: float = 1.0
    radius: float = 1.0
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Converte a família para dicionário JSON."""
        result = {
            "kind": FamilyKind(self.kind).value,
            "width": self.width,
            "amplitude": self.amplitude,
            "radius": self.radius,
        }
        if self.center is not None:
            result["center"] = list(self.center)
        if self.params:
            result["params"] = dict(self.params)
        return result

    @classmethod
    def from_dict(cls, data: dict) -> "TestFamily":
        """Cria uma TestFamily a partir de um dicionário."""
        center = data.get("center")
        return cls(
            kind=FamilyKind(data["kind"]),
            center=tuple(center) if center is not None else None,
            width=float(data.get("width", 1.0)),
            amplitude=float(data.get("amplitude", 1.0)),
            radius=float(data.get("radius", 1.0)),
            params=dict(data.get("params", {})),
        )


# ============================================================================
# ORDENS FRACIONÁRIAS
# ============================================================================

@dataclass(frozen=True)
class FracOrder:
    """
    Ordem s em (0,1) com as constantes de normalização dos kernels.

    c_ns   = Gamma((n-s)/2) / (pi^{n/2} 2^s Gamma(s/2))            (I_s)
    c_nsp  = s 2^{s-1} Gamma((n+s)/2) / (pi^{n/2} Gamma(1-s/2))     ((-Delta)^{s/2})
    c_nsm  = 2^s Gamma((n+s+1)/2) / (pi^{n/2} Gamma((1-s)/2))       (gradiente fracionário)
    c_n1ms = c_{n,1-s}
    """

    n: int
    s: float
    c_ns: float
    c_nsp: float
    c_nsm: float
    c_n1ms: float

    def to_dict(self) -> dict:
        return {
            "n": self.n, "s": self.s,
            "c_ns": self.c_ns, "c_nsp": self.c_nsp,
            "c_nsm": self.c_nsm, "c_n1ms": self.c_n1ms,
        }


@dataclass
class LiouvilleFit:
    """Constantes ajustadas da forma unidimensional de Liouville e seus resíduos."""

    s: float
    c_plus: float
    c_minus: float
    residual_plus: float
    residual_minus: float
    kernel_c_plus: float
    kernel_c_minus: float

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "c_plus": self.c_plus,
            "c_minus": self.c_minus,
            "residual_plus": self.residual_plus,
            "residual_minus": self.residual_minus,
            "kernel_c_plus": self.kernel_c_plus,
            "kernel_c_minus": self.kernel_c_minus,
        }


# ============================================================================
# NORMAS
# ============================================================================

@dataclass
class NormResult:
    """Valor de uma norma com detalhes de truncamento."""

    kind: str
    value: float
    grid: Grid
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "grid": self.grid.to_dict(),
            "truncation_report": self.details,
        }


# ============================================================================
# CAPACIDADE
# ============================================================================

@dataclass
class DyadicSet:
    """Conjunto compacto dado como união de células finas do grid (máscara booleana)."""

    grid: Grid
    mask: np.ndarray

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool).reshape(self.grid.shape)

    @property
    def is_empty(self) -> bool:
        return not bool(self.mask.any())

    @property
    def cell_count(self) -> int:
        return int(self.mask.sum())

    def measure(self) -> float:
        return self.cell_count * self.grid.cell_volume


@dataclass
class DiscreteMeasure:
    """Medida finita como soma de átomos ponderados (pesos >= 0)."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.atoms = np.atleast_2d(np.asarray(self.atoms, dtype=np.float64))
        self.weights = np.asarray(self.weights, dtype=np.float64).ravel()
        if self.atoms.shape[0] != self.weights.shape[0]:
            raise ValueError("numero de atomos e de pesos difere")
        if np.any(self.weights < 0):
            raise ValueError("pesos devem ser nao negativos")

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


@dataclass
class CapacityProblem:
    """Problema de capacidade variacional de um conjunto K."""

    K: DyadicSet
    kind: CapacityKind
    order: FracOrder
    max_iter: int = 20000
    tol_gap: float = 1e-4
    warm_start: Optional[np.ndarray] = None


@dataclass
class SolveReport:
    """
    Relatório de uma resolução primal-dual.

    ``trace`` guarda tuplas (iter, primal, dual) a cada checagem do gap.
    """

    value: float
    gap: float
    iters: int
    dual_value: float
    converged: bool
    minimizer: Optional[np.ndarray] = None
    trace: List[Tuple[int, float, float]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self, include_trace: bool = True) -> dict:
        """Converte o relatório para dicionário JSON (sem o minimizador)."""
        result = {
            "value": self.value,
            "gap": self.gap,
            "iters": self.iters,
            "dual_value": self.dual_value,
            "converged": self.converged,
        }
        if include_trace:
            result["trace"] = [list(t) for t in self.trace]
        if self.details:
            result["details"] = dict(self.details)
        return result


@dataclass
class LevelIntegral:
    """Integral de capacidades dos conjuntos de nível com sua incerteza de quadratura."""

    value: float
    lower: float
    upper: float
    levels: List[float] = field(default_factory=list)
    capacities: List[float] = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "levels": list(self.levels),
            "capacities": list(self.capacities),
        }


# ============================================================================
# VERIFICAÇÃO
# ============================================================================

@dataclass
class Check:
    """Uma verificação de um enunciado: valor medido contra limiar."""

    id: str
    statement: str
    measured: Any
    threshold: Any
    verdict: Verdict

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "statement": self.statement,
            "measured": self.measured,
            "threshold": self.threshold,
            "verdict": Verdict(self.verdict).value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Check":
        return cls(
            id=data["id"],
            statement=data["statement"],
            measured=data["measured"],
            threshold=data["threshold"],
            verdict=Verdict(data["verdict"]),
        )


@dataclass
class SuiteReport:
    """Relatório de uma suíte de verificação."""

    suite: str
    environment: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "environment": dict(self.environment),
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteReport":
        return cls(
            suite=data["suite"],
            environment=dict(data.get("environment", {})),
            checks=[Check.from_dict(c) for c in data.get("checks", [])],
        )
