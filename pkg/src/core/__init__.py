"""
Módulo core - Modelos de dados, exceções, configuração e núcleo numérico.

Este módulo contém as definições de grid, campos, ordens fracionárias,
conjuntos, medidas e relatórios, a hierarquia de exceções e os módulos
numéricos (grid, special, quadrature, fracops, norms, solver, capacity).

Todas as classes estão disponíveis para importação direta.
"""

# Exceções
from .exceptions import (
    FracLabException,
    InvalidGridError,
    InvalidOrderError,
    GammaDomainError,
    InvalidFamilyError,
    PreconditionError,
    MeanNotZeroError,
    InvalidNormError,
    FieldFormatError,
    ConfigError,
    UsageError,
)

# Modelos
from .models import (
    # Enums
    OperatorMethod,
    FamilyKind,
    NormKind,
    SeminormKind,
    HardyVariant,
    CapacityKind,
    TraceMode,
    Verdict,
    # Grid e campos
    Grid,
    ScalarField,
    VectorField,
    TestFamily,
    FracOrder,
    LiouvilleFit,
    NormResult,
    # Capacidade
    DyadicSet,
    DiscreteMeasure,
    CapacityProblem,
    SolveReport,
    LevelIntegral,
    # Verificação
    Check,
    SuiteReport,
)

__all__ = [
    # Exceções
    "FracLabException",
    "InvalidGridError",
    "InvalidOrderError",
    "GammaDomainError",
    "InvalidFamilyError",
    "PreconditionError",
    "MeanNotZeroError",
    "InvalidNormError",
    "FieldFormatError",
    "ConfigError",
    "UsageError",
    # Enums
    "OperatorMethod",
    "FamilyKind",
    "NormKind",
    "SeminormKind",
    "HardyVariant",
    "CapacityKind",
    "TraceMode",
    "Verdict",
    # Grid e campos
    "Grid",
    "ScalarField",
    "VectorField",
    "TestFamily",
    "FracOrder",
    "LiouvilleFit",
    "NormResult",
    # Capacidade
    "DyadicSet",
    "DiscreteMeasure",
    "CapacityProblem",
    "SolveReport",
    "LevelIntegral",
    # Verificação
    "Check",
    "SuiteReport",
]
