"""
Módulo Parser - Parser manual de argumentos da linha de comando.

Este módulo implementa um parser manual de argumentos a partir de uma lista
no formato de sys.argv, sem dependências externas. Suporta:
- Comandos posicionais (``op apply``: o primeiro posicional é o subcomando)
- Flags opcionais (--flag e -f)
- Valores de flags (--flag valor, --flag=valor e -f valor)
- Valores numéricos negativos (--center -1.5)
- Help automático (--help comando e comando --help)
"""

from typing import Dict, List, Any

# flags curtas que aceitam valor
SHORT_VALUE_FLAGS = {'o': 'output', 'i': 'input', 's': 's', 'p': 'p', 'k': 'kind', 'c': 'config'}


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _is_value(text: str) -> bool:
    """Um token é valor de flag se não começa com '-' ou se é um número negativo."""
    return not text.startswith('-') or _is_number(text)


def parse_args(argv: List[str]) -> Dict[str, Any]:
    """
    Parse manual dos argumentos.

    Args:
        argv: Lista de argumentos no formato de sys.argv (argv[0] é o programa)

    Returns:
        dict: Dicionário com argumentos parseados:
            - command: Nome do comando (ou None)
            - version: True se --version ou -v foi usado
            - help: True se --help ou -h foi usado
            - help_command: Nome do comando para help (se --help <comando>)
            - positional: Lista de argumentos posicionais
            - flags: Dicionário com flags e valores

    Example:
        >>> parse_args(["fraclab", "norm", "--kind", "lp", "--p", "1"])["flags"]
        {'kind': 'lp', 'p': '1'}
    """
    args = {
        'command': None,
        'version': False,
        'help': False,
        'help_command': None,
        'positional': [],
        'flags': {}
    }

    i = 1  # Pular argv[0] que é o nome do script
    while i < len(argv):
        arg = argv[i]

        # Versão global (apenas se não tiver comando ainda)
        if arg in ['--version', '-v']:
            if args['command'] is None:
                args['version'] = True
            i += 1
            continue

        # Help
        if arg in ['--help', '-h']:
            args['help'] = True
            if args['command'] is None and i + 1 < len(argv) and not argv[i + 1].startswith('-'):
                # Formato: --help comando
                args['help_command'] = argv[i + 1]
                i += 1
            i += 1
            continue

        # Se não tiver comando ainda, este é o comando
        if args['command'] is None and not arg.startswith('-'):
            args['command'] = arg
            i += 1
            continue

        if arg.startswith('--'):
            flag_name = arg[2:]
            if '=' in flag_name:
                # Formato: --flag=valor
                name, value = flag_name.split('=', 1)
                args['flags'][name] = value
            elif i + 1 < len(argv) and _is_value(argv[i + 1]):
                args['flags'][flag_name] = argv[i + 1]
                i += 1
            else:
                args['flags'][flag_name] = True
            i += 1
        elif arg.startswith('-') and len(arg) > 1 and not _is_number(arg):
            flag_char = arg[1:]
            if '=' in flag_char:
                # Formato: -o=valor
                name, value = flag_char.split('=', 1)
                args['flags'][SHORT_VALUE_FLAGS.get(name, name)] = value
            elif flag_char == 'l':
                # -l = --verbose (log)
                args['flags']['verbose'] = True
            elif flag_char in SHORT_VALUE_FLAGS and i + 1 < len(argv) and _is_value(argv[i + 1]):
                args['flags'][SHORT_VALUE_FLAGS[flag_char]] = argv[i + 1]
                i += 1
            else:
                for char in flag_char:
                    args['flags'][char] = True
            i += 1
        else:
            # Argumento posicional
            args['positional'].append(arg)
            i += 1

    return args


def get_flag_value(args: Dict[str, Any], *flag_names: str, default: Any = None) -> Any:
    """
    Obtém o valor de uma flag, tentando múltiplos nomes.

    Args:
        args: Dicionário de argumentos parseados
        *flag_names: Nomes alternativos da flag (ex: 'output', 'o')
        default: Valor padrão se flag não encontrada

    Returns:
        Valor da flag ou default
    """
    for name in flag_names:
        if name in args['flags']:
            return args['flags'][name]
    return default


def has_flag(args: Dict[str, Any], *flag_names: str) -> bool:
    """
    Verifica se uma flag está presente.

    Args:
        args: Dicionário de argumentos parseados
        *flag_names: Nomes alternativos da flag

    Returns:
        True se flag está presente
    """
    return any(name in args['flags'] and args['flags'][name] for name in flag_names)
