#!/usr/bin/env python3
"""
Entrypoint principal e roteador de comandos do FracLab.

Este módulo serve apenas como ponto de entrada do CLI, roteando comandos
para os módulos apropriados (cli/help, cli/parser, cli/commands).

Para executar:
    python fraclab_cli.py --help
    python fraclab_cli.py verify --help
    python fraclab_cli.py --help capacity
"""

import sys
from pathlib import Path
from typing import List, Optional

sys.path.insert(0, str(Path(__file__).parent))

from cli.help import (
    VERSION, print_banner, print_help_general, print_error,
    print_help_op, print_help_norm, print_help_capacity, print_help_growth,
    print_help_trace, print_help_verify,
)
from cli.parser import parse_args
from cli.commands import cmd_op, cmd_norm, cmd_capacity, cmd_growth, cmd_trace, cmd_verify


# Mapa de comandos para funções
COMMAND_MAP = {
    'op': cmd_op,
    'norm': cmd_norm,
    'capacity': cmd_capacity,
    'growth': cmd_growth,
    'trace': cmd_trace,
    'verify': cmd_verify,
}

# Mapa de comandos para help
HELP_MAP = {
    'op': print_help_op,
    'norm': print_help_norm,
    'capacity': print_help_capacity,
    'growth': print_help_growth,
    'trace': print_help_trace,
    'verify': print_help_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Função principal do CLI.

    Returns:
        int: 0 sucesso, 1 verificação com falha, 2 erro de uso ou de entrada.
    """
    parsed = parse_args(sys.argv if argv is None else argv)

    if parsed['version']:
        print(f"FracLab versao {VERSION}")
        return 0

    if parsed['help']:
        name = parsed['command'] or parsed['help_command']
        if name is None:
            print_banner()
            print_help_general()
            return 0
        help_func = HELP_MAP.get(name)
        if help_func is None:
            print_error(f"Comando '{name}' nao encontrado. Use 'fraclab --help' para ver comandos disponiveis")
            return 2
        help_func()
        return 0

    if parsed['command'] is None:
        print_banner()
        print_help_general()
        return 0

    command_func = COMMAND_MAP.get(parsed['command'])
    if command_func is None:
        print_error(f"Comando '{parsed['command']}' nao implementado. Use 'fraclab --help' para ver comandos disponiveis")
        return 2
    return command_func(parsed)


if __name__ == "__main__":
    sys.exit(main())
