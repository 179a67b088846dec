"""
Configuração do FracLab.

Arquivo texto no formato ``chave=valor``: uma chave por linha, comentários
com ``#`` e linhas vazias ignoradas. Toda chave tem um default em
``DEFAULTS``; chaves desconhecidas são rejeitadas.

Example:
    >>> cfg = Config.from_text("tol_gap=1e-3\\nmax_iter=500")
    >>> cfg.max_iter
    500
"""

from dataclasses import dataclass, fields, asdict
from pathlib import Path
from typing import Dict, Any, Optional
import os

from core.exceptions import ConfigError


THREADS_ENV = "FRACLAB_THREADS"


@dataclass
class Config:
    """Parâmetros numéricos, limiares das suítes e diretórios de saída."""

    # grid padrão
    n: int = 1
    N: int = 256
    L: float = 16.0
    periodic: bool = True

    # solver primal-dual
    tol_gap: float = 1e-4
    max_iter: int = 20000
    check_every: int = 50
    power_iters: int = 50
    step_safety: float = 0.95
    gap_box: float = 4.0
    frame_fraction: float = 0.125
    restart_sufficient: float = 0.2
    restart_necessary: float = 0.8
    restart_artificial: float = 0.36
    weight_smoothing: float = 0.5

    # capacidade
    ws1_radius: int = 4
    level_floor: float = 0.0625
    capacity_n: int = 2
    capacity_N: int = 128
    capacity_L: float = 4.0

    # suíte identity
    inversion_tol: float = 1e-6
    inversion_tol_endpoint: float = 1e-5
    endpoint_s: float = 0.9
    gradient_tol: float = 1e-8
    commutation_tol: float = 1e-10
    riesz_square_tol: float = 1e-6
    realness_tol: float = 1e-12
    homogeneity_tol: float = 1e-12
    cross_method_tol: float = 1e-2
    liouville_residual: float = 1e-3
    hilbert_N: int = 1024
    hilbert_tol: float = 1e-2

    # suíte fs
    fs_N: int = 512
    fs_tol: float = 5e-2

    # suíte divergence
    divergence_tol: float = 1e-10
    bmo_drift: float = 0.2

    # Stein-Weiss, tipo fraco, capacitária, traço
    refinement_drift: float = 0.10
    dilation_drift: float = 0.03
    weak_drift: float = 0.15
    strong_log_tol: float = 0.10
    level_drift: float = 0.20
    ball_drift: float = 0.10
    capacitary_growth: float = 1.15
    weak_capacitary_slack: float = 1e-3
    trace_drift: float = 0.10
    trace_growth: float = 1.2

    # saídas
    report_dir: str = "reports"
    log_dir: str = "logs"
    log_operations: bool = True

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: Optional[str] = None) -> "Config":
        """Cria uma Config a partir de um dicionário chave -> valor (strings aceitas)."""
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for key, raw in data.items():
            if key not in types:
                raise ConfigError(key, "nao e uma chave conhecida", source)
            values[key] = _coerce(key, raw, types[key], source)
        return cls(**values)

    @classmethod
    def from_text(cls, text: str, source: Optional[str] = None) -> "Config":
        """Faz o parse de um texto chave=valor."""
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(line, f"sem '=' na linha {lineno}", source)
            key, value = line.split("=", 1)
            data[key.strip()] = value.strip()
        return cls.from_dict(data, source)

    @classmethod
    def load(cls, path: Optional[str] = None) -> "Config":
        """Carrega a configuração de um arquivo, ou os defaults se path for None."""
        if path is None:
            return cls()
        config_path = Path(path)
        if not config_path.exists():
            raise ConfigError(str(path), "arquivo nao encontrado")
        return cls.from_text(config_path.read_text(encoding="utf-8"), source=str(path))

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULTS = Config().to_dict()


def _coerce(key: str, raw: Any, type_name: Any, source: Optional[str]) -> Any:
    type_name = getattr(type_name, "__name__", type_name)
    try:
        if type_name == "bool":
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in ("1", "true", "yes", "sim"):
                return True
            if text in ("0", "false", "no", "nao"):
                return False
            raise ValueError(raw)
        if type_name == "int":
            return int(raw)
        if type_name == "float":
            return float(raw)
        return str(raw)
    except (TypeError, ValueError):
        raise ConfigError(key, f"valor '{raw}' nao e um {type_name}", source)


def thread_count() -> int:
    """Número de workers lido de FRACLAB_THREADS (mínimo 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(THREADS_ENV, f"valor '{raw}' nao e inteiro")
