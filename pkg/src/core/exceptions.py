"""
Exceções customizadas para o projeto FracLab.

Este módulo define exceções específicas para os erros comuns ao trabalhar
com grids, ordens fracionárias, pré-condições de operadores, arquivos de
campo e configuração.

Todas as exceções seguem o mesmo schema de erro em JSON:
{
    "error": "MeanNotZeroError",
    "timestamp": "2026-10-19T14:05:03Z",
    "operation": "riesz_potential",
    "message": "...",
    "suggestion": "..."
}
"""

from typing import Optional, Any, Dict
from datetime import datetime, timezone


def _utc_timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class FracLabException(Exception):
    """
    Exceção base para todos os erros do FracLab.

    Todas as exceções customizadas herdam desta classe. O atributo
    ``exit_code`` indica o código de saída que a CLI deve usar.
    """

    exit_code = 2

    def __init__(self, message: str, suggestion: Optional[str] = None):
        self.message = message
        self.suggestion = suggestion
        self.timestamp = _utc_timestamp()
        super().__init__(message)

    def _fields(self) -> Dict[str, Any]:
        return {}

    def to_dict(self) -> dict:
        """Converte o erro para dicionário JSON."""
        result = {
            "error": type(self).__name__,
            "timestamp": self.timestamp,
        }
        result.update(self._fields())
        result["message"] = str(self)
        if self.suggestion:
            result["suggestion"] = self.suggestion
        return result


class InvalidGridError(FracLabException):
    """
    Exceção lançada quando os parâmetros do grid são inválidos.

    Example:
        >>> raise InvalidGridError("N", 100, "N deve ser potencia de dois")
    """
    def __init__(self, parameter: str, value: Any, reason: str):
        self.parameter = parameter
        self.value = value
        super().__init__(
            f"Grid invalido ({parameter}={value}): {reason}",
            suggestion="Use n em {1,2,3}, N potencia de dois com N >= 8 e L > 0."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"parameter": self.parameter, "value": self.value}


class InvalidOrderError(FracLabException):
    """
    Exceção lançada quando uma ordem ou expoente está fora da faixa aceita.

    Example:
        >>> raise InvalidOrderError("s", 1.0, "(0, 1)")
    """
    def __init__(self, name: str, value: Any, expected: str):
        self.name = name
        self.value = value
        self.expected = expected
        super().__init__(
            f"Parametro {name}={value} fora da faixa {expected}",
            suggestion=f"Informe {name} em {expected}."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"name": self.name, "value": self.value, "expected": self.expected}


class GammaDomainError(InvalidOrderError):
    """Exceção lançada quando gamma_eval recebe x <= 0."""
    def __init__(self, value: float):
        super().__init__("x", value, "x > 0")


class InvalidFamilyError(FracLabException):
    """
    Exceção lançada quando uma família de teste viola suas invariantes no grid.

    Example:
        >>> raise InvalidFamilyError("indicator_ball", "raio r >= L/2")
    """
    def __init__(self, family: str, reason: str):
        self.family = family
        self.reason = reason
        super().__init__(
            f"Familia '{family}' invalida neste grid: {reason}",
            suggestion="Aumente L, reduza a largura ou mova o centro para dentro do box."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"family": self.family, "reason": self.reason}


class PreconditionError(FracLabException):
    """
    Exceção lançada quando a pré-condição de um operador não é satisfeita.

    Example:
        >>> raise PreconditionError("riesz_transform", "grid nao periodico")
    """
    def __init__(self, operation: str, reason: str, suggestion: Optional[str] = None):
        self.operation = operation
        self.reason = reason
        super().__init__(f"{operation}: {reason}", suggestion=suggestion)

    def _fields(self) -> Dict[str, Any]:
        return {"operation": self.operation}


class MeanNotZeroError(PreconditionError):
    """Exceção lançada quando o operador exige média zero e o campo não tem."""
    def __init__(self, operation: str, mean: float):
        self.mean = mean
        super().__init__(
            operation,
            f"campo com media {mean!r} (esperada media zero)",
            suggestion="Subtraia a media do campo antes (subtract_mean)."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"operation": self.operation, "mean": self.mean}


class InvalidNormError(FracLabException):
    """Exceção lançada para tipo de norma desconhecido ou expoente inválido."""
    def __init__(self, kind: str, reason: str):
        self.kind = kind
        super().__init__(
            f"Norma '{kind}' invalida: {reason}",
            suggestion="Tipos aceitos: lp, weak_lp, lorentz, gagliardo, hardy, bmo, hs1, hs1_plus, hs1_minus."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"kind": self.kind}


class FieldFormatError(FracLabException):
    """
    Exceção lançada quando um arquivo de campo, medida ou células está malformado.

    Example:
        >>> raise FieldFormatError("u.field", 1, "cabecalho ausente")
    """
    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        super().__init__(
            f"Arquivo malformado em {path} (linha {line}): {reason}",
            suggestion="Cabecalho esperado: '# fraclab-field v1 n=<n> N=<N> L=<L> periodic=<0|1>'."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"path": self.path, "line": self.line}


class ConfigError(FracLabException):
    """Exceção lançada para chave desconhecida ou valor inválido na configuração."""
    def __init__(self, key: str, reason: str, source: Optional[str] = None):
        self.key = key
        self.source = source
        where = f" em {source}" if source else ""
        super().__init__(
            f"Configuracao invalida{where}: '{key}' {reason}",
            suggestion="Veja a tabela de chaves em core/config.py (DEFAULTS)."
        )

    def _fields(self) -> Dict[str, Any]:
        return {"key": self.key, "source": self.source}


class UsageError(FracLabException):
    """Exceção lançada para flag ausente ou com valor fora das opções aceitas."""
    def __init__(self, flag: str, reason: str, suggestion: Optional[str] = None):
        self.flag = flag
        super().__init__(f"--{flag}: {reason}", suggestion=suggestion)

    def _fields(self) -> Dict[str, Any]:
        return {"flag": self.flag}
