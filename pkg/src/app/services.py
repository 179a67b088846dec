"""
Casos de uso do FracLab.

Cada função lê arquivos pela camada ``field_repo``, chama o núcleo numérico,
grava as saídas e registra a operação no OperationLogger. A CLI só converte
flags em argumentos e resultados em texto.
"""

from typing import Dict, Any, List, Optional, Sequence

from core.config import Config
from core.exceptions import UsageError, InvalidNormError
from core.models import (
    Grid, ScalarField, OperatorMethod, NormKind, HardyVariant, CapacityKind,
    CapacityProblem, TraceMode, SeminormKind, SuiteReport, DyadicSet, NormResult,
)
from core.grid import make_grid
from core import fracops, norms, capacity
from app import field_repo
from app.logging import get_logger
from app.verify import run_suite, capacity_grid, default_suite_grid, SUITE_NAMES


OPERATORS = ("frac-laplacian", "riesz-potential", "riesz-transform", "frac-gradient", "liouville")

CAPACITY_KINDS = {
    "ws1": CapacityKind.WS1,
    "hs1": CapacityKind.HS1,
    "hs1p": CapacityKind.HS1_PLUS,
    "hs1_plus": CapacityKind.HS1_PLUS,
    "hs1m": CapacityKind.HS1_MINUS,
    "hs1_minus": CapacityKind.HS1_MINUS,
}


# ============================================================================
# PARSE DE ESPECIFICAÇÕES
# ============================================================================

def _choice(flag: str, value: str, options: Sequence[str]) -> str:
    if value not in options:
        raise UsageError(flag, f"valor '{value}' invalido", suggestion=f"Use um de: {', '.join(options)}.")
    return value


def _number(flag: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise UsageError(flag, f"valor '{value}' nao e numerico")


def parse_grid_spec(text: str, base: Grid) -> Grid:
    """
    Faz o parse de ``n=<n>,N=<N>,L=<L>[,periodic=<0|1>]``.

    Chaves ausentes herdam de ``base``; N padrão é o de ``base`` quando n não
    muda, senão o do grid padrão da dimensão.

    Raises:
        UsageError: Item sem '=' ou chave desconhecida.
        InvalidGridError: Parâmetros de grid inválidos.
    """
    values: Dict[str, str] = {}
    for item in filter(None, (part.strip() for part in str(text).split(","))):
        if "=" not in item:
            raise UsageError("grid", f"item '{item}' sem '='", suggestion="Exemplo: --grid n=2,N=128,L=4")
        key, value = (x.strip() for x in item.split("=", 1))
        if key not in ("n", "N", "L", "periodic"):
            raise UsageError("grid", f"chave '{key}' desconhecida")
        values[key] = value
    try:
        n = int(values.get("n", base.n))
        default_N = base.N if n == base.n else (64 if n == 3 else 256)
        N = int(values.get("N", default_N))
        L = float(values.get("L", base.L))
        periodic = values.get("periodic", "1" if base.periodic else "0") not in ("0", "false")
    except ValueError as e:
        raise UsageError("grid", f"valor invalido ({e})")
    return make_grid(n, N, L, periodic)


def parse_set_spec(text: str, grid: Grid) -> DyadicSet:
    """
    Conjunto K a partir de ``ball:r=<r>``, ``cube:l=<l>`` ou ``cells:<arquivo>``.

    Raises:
        UsageError: Especificação fora desses formatos.
        FieldFormatError: Arquivo de células malformado.
    """
    text = str(text)
    if text.startswith("cells:"):
        return field_repo.read_cells(text[len("cells:"):], grid)
    for prefix, key, build in (("ball:", "r", capacity.ball_set), ("cube:", "l", capacity.cube_set)):
        if text.startswith(prefix):
            name, _, value = text[len(prefix):].partition("=")
            if name != key:
                break
            size = _number("set", value)
            if size <= 0:
                raise UsageError("set", f"{key} deve ser positivo")
            return build(grid, size)
    raise UsageError("set", f"especificacao '{text}' invalida",
                     suggestion="Use ball:r=<r>, cube:l=<l> ou cells:<arquivo>.")


def capacity_kind(name: str) -> CapacityKind:
    """Nome da CLI (ws1, hs1, hs1p, hs1m) para CapacityKind."""
    _choice("kind", name, tuple(CAPACITY_KINDS))
    return CAPACITY_KINDS[name]


# ============================================================================
# OPERADORES
# ============================================================================

def apply_operator(
    op: str,
    input_path: str,
    output_path: str,
    s: Optional[float] = None,
    method: str = "spectral",
    axis: Optional[int] = None,
    side: str = "+",
) -> Dict[str, Any]:
    """
    Aplica um operador fracionário a um campo em arquivo.

    Args:
        op: frac-laplacian, riesz-potential, riesz-transform, frac-gradient ou liouville.
        input_path: Arquivo fraclab-field de entrada.
        output_path: Arquivo de saída (saídas vetoriais: um por componente).
        s: Ordem em (0,1) (não usada por riesz-transform).
        method: spectral ou singular.
        axis: Eixo de riesz-transform (None = todas as componentes).
        side: Lado da derivada de Liouville ('+' ou '-').

    Returns:
        dict: op, method, s e a lista de arquivos gravados.

    Raises:
        UsageError: Operador, método ou lado inválido, ou s ausente.
        InvalidOrderError: s fora de (0,1).
        MeanNotZeroError: riesz-potential espectral com média não nula.
    """
    logger = get_logger()
    _choice("op", op, OPERATORS)
    method = OperatorMethod(_choice("method", method, tuple(m.value for m in OperatorMethod)))
    if op != "riesz-transform" and s is None:
        raise UsageError("s", "obrigatorio para este operador")

    field = field_repo.read_field(input_path)
    outputs: List[str]
    if op == "riesz-transform":
        if axis is None:
            outputs = field_repo.write_vector_field(fracops.riesz_transform_all(field), output_path)
        else:
            outputs = [field_repo.write_field(fracops.riesz_transform(field, int(axis)), output_path)]
    elif op == "liouville":
        _choice("side", side, ("+", "-"))
        outputs = [field_repo.write_field(fracops.liouville_one_sided(field, float(s), side), output_path)]
    else:
        order = fracops.make_frac_order(field.grid.n, float(s))
        if op == "frac-laplacian":
            result = fracops.frac_laplacian(field, order, method)
        elif op == "riesz-potential":
            result = fracops.riesz_potential(field, order, method)
        else:
            result = None
            gradient = fracops.frac_gradient(field, order, method)
            if axis is None:
                outputs = field_repo.write_vector_field(gradient, output_path)
            else:
                outputs = [field_repo.write_field(gradient.component(int(axis)), output_path)]
        if result is not None:
            outputs = [field_repo.write_field(result, output_path)]

    summary = {"op": op, "method": method.value, "s": s, "outputs": outputs}
    logger.log_operation(
        operation_type="op-apply",
        input_file=str(input_path),
        output_file=", ".join(outputs),
        parameters={"op": op, "method": method.value, "s": s, "axis": axis, "side": side},
        result={"outputs": len(outputs)},
    )
    return summary


# ============================================================================
# NORMAS
# ============================================================================

def norm_of_file(
    input_path: str,
    kind: str,
    p: Optional[float] = None,
    s: Optional[float] = None,
    variant: str = "riesz",
) -> NormResult:
    """
    Calcula uma norma de um campo em arquivo.

    Raises:
        InvalidNormError: Tipo desconhecido, p < 1 ou parâmetro ausente.
        MeanNotZeroError: hardy com média não nula.
    """
    logger = get_logger()
    try:
        norm_kind = NormKind(kind)
    except ValueError:
        raise InvalidNormError(str(kind), "tipo desconhecido")
    _choice("variant", variant, tuple(v.value for v in HardyVariant))
    field = field_repo.read_field(input_path)
    result = norms.compute_norm(field, norm_kind, p=p, s=s, variant=HardyVariant(variant))
    logger.log_operation(
        operation_type="norm",
        input_file=str(input_path),
        parameters={"kind": norm_kind.value, "p": p, "s": s, "variant": variant},
        result={"value": result.value},
    )
    return result


# ============================================================================
# CAPACIDADE, CRESCIMENTO E TRAÇO
# ============================================================================

def capacity_of_set(
    kind: str,
    s: float,
    set_spec: str,
    grid: Optional[Grid] = None,
    config: Optional[Config] = None,
    output_path: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Capacidade variacional (ou conteúdo Lambda^{n-s}) de um conjunto.

    Args:
        kind: ws1, hs1, hs1p, hs1m ou content.
        s: Ordem em (0,1); content usa alpha = n - s.
        set_spec: ball:r=<r>, cube:l=<l> ou cells:<arquivo>.
        grid: Grid (default: grid de capacidade da Config).
        config: Configuração.
        output_path: Se dado, grava o minimizador como campo.

    Returns:
        dict: SolveReport serializado (ou value/alpha/comparability para content).
    """
    logger = get_logger()
    _choice("kind", kind, tuple(CAPACITY_KINDS) + ("content",))
    config = config or Config()
    grid = grid or capacity_grid(config)
    order = fracops.make_frac_order(grid.n, float(s))
    K = parse_set_spec(set_spec, grid)

    if kind == "content":
        alpha = grid.n - order.s
        result = {
            "kind": "content",
            "alpha": alpha,
            "value": capacity.hausdorff_content(K, alpha),
            "cells": K.cell_count,
            "comparability": capacity.content_comparability(grid.n, alpha),
        }
    else:
        problem = CapacityProblem(K=K, kind=capacity_kind(kind), order=order,
                                  max_iter=config.max_iter, tol_gap=config.tol_gap)
        report = capacity.variational_capacity(problem, config)
        result = report.to_dict()
        if output_path and report.minimizer is not None:
            result["minimizer_file"] = field_repo.write_field(ScalarField(grid, report.minimizer), output_path)

    logger.log_operation(
        operation_type="capacity",
        output_file=result.get("minimizer_file"),
        parameters={"kind": kind, "s": s, "set": set_spec, "grid": grid.to_dict()},
        result={k: result[k] for k in ("value", "gap", "converged") if k in result},
    )
    return result


def measure_growth(measure_path: str, beta: float) -> Dict[str, Any]:
    """|||mu|||_{n-beta} de uma medida em arquivo, com o perfil por raio."""
    logger = get_logger()
    mu = field_repo.read_measure(measure_path)
    profile = capacity.measure_growth_profile(mu, float(beta))
    result = {
        "beta": float(beta),
        "atoms": int(mu.weights.size),
        "value": capacity.measure_growth_norm(mu, float(beta)),
        "profile": profile,
    }
    logger.log_operation(
        operation_type="growth",
        input_file=str(measure_path),
        parameters={"beta": beta},
        result={"value": result["value"]},
    )
    return result


def trace_of_field(measure_path: str, input_path: str, s: float, mode: str = "strong") -> Dict[str, Any]:
    """Razão de traço ||u||_{L^q(mu)} / [u]_X para um campo e uma medida em arquivo."""
    logger = get_logger()
    trace_mode = TraceMode(_choice("mode", mode, tuple(m.value for m in TraceMode)))
    mu = field_repo.read_measure(measure_path)
    field = field_repo.read_field(input_path)
    order = fracops.make_frac_order(field.grid.n, float(s))
    kind = SeminormKind.HS1 if trace_mode == TraceMode.STRONG else SeminormKind.MINUS
    ratio = capacity.trace_ratio(mu, field, order, trace_mode, kind)
    result = {"mode": trace_mode.value, "s": order.s, "seminorm": kind.value, "ratio": ratio}
    logger.log_operation(
        operation_type="trace",
        input_file=f"{input_path}, {measure_path}",
        parameters={"s": s, "mode": mode},
        result={"ratio": ratio},
    )
    return result


# ============================================================================
# VERIFICAÇÃO
# ============================================================================

def run_verify(
    suite: str,
    report_path: str,
    s_list: Optional[Sequence[float]] = None,
    grid: Optional[Grid] = None,
    config: Optional[Config] = None,
) -> SuiteReport:
    """
    Executa uma suíte e grava o relatório JSON.

    Returns:
        SuiteReport: Relatório com os vereditos.
    """
    logger = get_logger()
    _choice("suite", suite, SUITE_NAMES + ("all",))
    report = run_suite(suite, grid, s_list, config or Config())
    written = field_repo.write_report(report.to_dict(), report_path)
    logger.log_operation(
        operation_type="verify",
        output_file=written,
        parameters={"suite": suite, "s": list(s_list or []), "grid": grid.to_dict() if grid else None},
        result={"checks": len(report.checks), "failures": [c.id for c in report.failures()]},
        status="success" if report.passed else "fail",
    )
    return report

