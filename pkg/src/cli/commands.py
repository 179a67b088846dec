"""
Módulo Commands - Implementação dos comandos CLI.

Cada comando valida as flags, chama o caso de uso em ``app.services`` e
converte o resultado em texto. Erros do FracLab viram uma linha em stderr e
o código de saída da exceção (2); verificações com falha saem com 1.
"""

from pathlib import Path
from typing import Dict, Any, List, Optional

from app import services
from app.field_repo import dumps_report
from app.logging import configure_logger
from core.config import Config
from core.exceptions import FracLabException, UsageError

from cli.help import print_success, print_error, print_warning
from cli.parser import get_flag_value, has_flag


# ============================================================================
# AUXILIARES
# ============================================================================

def load_config(args: Dict[str, Any]) -> Config:
    """Carrega a Config de --config e reconfigura o logger de operações."""
    config = Config.load(get_flag_value(args, 'config', 'c'))
    configure_logger(config.log_dir, config.log_operations)
    return config


def _required(args: Dict[str, Any], *names: str) -> str:
    value = get_flag_value(args, *names)
    if value is None or value is True:
        raise UsageError(names[0], "obrigatorio", suggestion="Use --help para ver a sintaxe do comando.")
    return str(value)


def _optional_float(args: Dict[str, Any], *names: str) -> Optional[float]:
    value = get_flag_value(args, *names)
    if value is None:
        return None
    if value is True:
        raise UsageError(names[0], "valor ausente")
    try:
        return float(value)
    except ValueError:
        raise UsageError(names[0], f"valor '{value}' nao e numerico")


def _optional_int(args: Dict[str, Any], name: str) -> Optional[int]:
    value = get_flag_value(args, name)
    if value is None:
        return None
    try:
        return int(value)
    except (TypeError, ValueError):
        raise UsageError(name, f"valor '{value}' nao e inteiro")


def _float_list(args: Dict[str, Any], name: str) -> Optional[List[float]]:
    value = get_flag_value(args, name)
    if value is None:
        return None
    try:
        return [float(x) for x in str(value).split(",") if x.strip()]
    except ValueError:
        raise UsageError(name, f"lista '{value}' invalida", suggestion="Exemplo: --s 0.3,0.5,0.7")


def _run(args: Dict[str, Any], body) -> int:
    """Executa o corpo de um comando convertendo exceções em códigos de saída."""
    try:
        return body(load_config(args))
    except FracLabException as e:
        print_error(str(e))
        return e.exit_code
    except Exception as e:
        print_error(f"Erro inesperado: {str(e)}")
        if has_flag(args, 'verbose', 'l'):
            import traceback
            traceback.print_exc()
        return 2


# ============================================================================
# COMANDOS
# ============================================================================

def cmd_op(args: Dict[str, Any]) -> int:
    """Comando op apply: aplica um operador fracionário a um campo."""
    def body(config: Config) -> int:
        if not args['positional'] or args['positional'][0] != 'apply':
            raise UsageError("op", "subcomando esperado: 'op apply'")
        axis = _optional_int(args, "axis")
        summary = services.apply_operator(
            op=_required(args, 'op'),
            input_path=_required(args, 'input', 'i'),
            output_path=_required(args, 'output', 'o'),
            s=_optional_float(args, 's'),
            method=str(get_flag_value(args, 'method', default='spectral')),
            axis=axis,
            side=str(get_flag_value(args, 'side', default='+')),
        )
        print_success(f"Operador {summary['op']} aplicado ({summary['method']})")
        for path in summary['outputs']:
            print(f"  Arquivo: {path}")
        return 0
    return _run(args, body)


def cmd_norm(args: Dict[str, Any]) -> int:
    """Comando norm: imprime o valor e o registro JSON."""
    def body(config: Config) -> int:
        result = services.norm_of_file(
            input_path=_required(args, 'input', 'i'),
            kind=_required(args, 'kind', 'k'),
            p=_optional_float(args, 'p'),
            s=_optional_float(args, 's'),
            variant=str(get_flag_value(args, 'variant', default='riesz')),
        )
        print("%.17g" % result.value)
        print(dumps_report(result.to_dict()))
        return 0
    return _run(args, body)


def cmd_capacity(args: Dict[str, Any]) -> int:
    """Comando capacity: imprime o SolveReport JSON."""
    def body(config: Config) -> int:
        kind = _required(args, 'kind', 'k')
        grid_spec = get_flag_value(args, 'grid')
        grid = None
        if grid_spec is not None:
            grid = services.parse_grid_spec(grid_spec, services.capacity_grid(config))
        s = _optional_float(args, 's')
        if s is None:
            raise UsageError("s", "obrigatorio")
        result = services.capacity_of_set(
            kind=kind,
            s=s,
            set_spec=_required(args, 'set'),
            grid=grid,
            config=config,
            output_path=get_flag_value(args, 'output', 'o'),
        )
        print(dumps_report(result))
        if result.get("converged") is False:
            print_warning(f"Solver nao convergiu: gap {result['gap']:.3e} (valor e limitante superior)")
        return 0
    return _run(args, body)


def cmd_growth(args: Dict[str, Any]) -> int:
    """Comando growth: norma de crescimento de uma medida."""
    def body(config: Config) -> int:
        beta = _optional_float(args, 'beta')
        if beta is None:
            raise UsageError("beta", "obrigatorio")
        result = services.measure_growth(_required(args, 'measure'), beta)
        print(dumps_report(result))
        return 0
    return _run(args, body)


def cmd_trace(args: Dict[str, Any]) -> int:
    """Comando trace: razão de traço de um campo sobre uma medida."""
    def body(config: Config) -> int:
        s = _optional_float(args, 's')
        if s is None:
            raise UsageError("s", "obrigatorio")
        result = services.trace_of_field(
            measure_path=_required(args, 'measure'),
            input_path=_required(args, 'input', 'i'),
            s=s,
            mode=str(get_flag_value(args, 'mode', default='strong')),
        )
        print(dumps_report(result))
        return 0
    return _run(args, body)


def cmd_verify(args: Dict[str, Any]) -> int:
    """
    Comando verify: executa uma suíte; saída 1 se alguma verificação falhar.

    Sem --report o relatório vai para <report_dir>/<suite>.json.
    """
    def body(config: Config) -> int:
        suite = _required(args, 'suite')
        report_path = get_flag_value(args, 'report')
        if report_path is None:
            report_path = str(Path(config.report_dir) / f"{suite}.json")
        grid_spec = get_flag_value(args, 'grid')
        grid = None
        if grid_spec is not None:
            grid = services.parse_grid_spec(grid_spec, services.default_suite_grid(suite, config))
        report = services.run_verify(suite, report_path, _float_list(args, 's'), grid, config)
        failures = report.failures()
        if failures:
            print_warning(f"{len(failures)} de {len(report.checks)} verificacoes falharam")
            for check in failures:
                print(f"  {check.id}: medido {check.measured}, limiar {check.threshold}")
            print(f"  Relatorio: {report_path}")
            return 1
        print_success(f"Suite {suite}: {len(report.checks)} verificacoes passaram")
        print(f"  Relatorio: {report_path}")
        return 0
    return _run(args, body)
