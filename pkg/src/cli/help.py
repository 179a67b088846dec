"""
Módulo de Help e Tela - Funções para exibição de ajuda e interface.

Este módulo contém todas as funções responsáveis por exibir:
- Banner do programa
- Help geral e por comando
- Mensagens de sucesso/erro/aviso
"""

import sys

VERSION = "1.0.0"


def print_banner() -> None:
    """Exibe o banner do FracLab (ao executar sem parâmetros)."""
    banner = """┏━╸┏━┓┏━┓┏━╸╻  ┏━┓┏┓
┣╸ ┣┳┛┣━┫┃  ┃  ┣━┫┣┻┓
╹  ╹┗╸╹ ╹┗━╸┗━╸╹ ╹┗━┛
Laboratorio numerico de operadores fracionarios, normas H1/BMO e capacidades"""
    print(banner)


def print_success(message: str) -> None:
    """Imprime mensagem de sucesso."""
    print(f"[OK] {message}")


def print_error(message: str) -> None:
    """Imprime mensagem de erro (uma linha, em stderr)."""
    print(f"[ERRO] {message}", file=sys.stderr)


def print_warning(message: str) -> None:
    """Imprime mensagem de aviso."""
    print(f"[AVISO] {message}", file=sys.stderr)


def print_help_general() -> None:
    """Exibe o help geral do programa."""
    print()
    print("COMANDOS DISPONIVEIS:")
    print("  op apply     - Aplica um operador fracionario a um campo")
    print("  norm         - Calcula uma norma ou seminorma de um campo")
    print("  capacity     - Capacidade variacional ou conteudo de Hausdorff de um conjunto")
    print("  growth       - Norma de crescimento |||mu|||_{n-beta} de uma medida")
    print("  trace        - Razao de traco ||u||_{L^q(mu)} / [u]")
    print("  verify       - Executa uma suite de verificacao e grava o relatorio JSON")
    print()
    print("OPCOES GLOBAIS:")
    print("  --help, -h         - Exibe esta mensagem de ajuda")
    print("  --version, -v      - Exibe a versao do programa")
    print("  --config, -c       - Arquivo de configuracao chave=valor")
    print()
    print("CODIGOS DE SAIDA:")
    print("  0 - sucesso (verify: todas as verificacoes passaram)")
    print("  1 - alguma verificacao falhou")
    print("  2 - erro de uso ou de entrada")
    print()
    print("VARIAVEIS DE AMBIENTE:")
    print("  FRACLAB_THREADS    - Numero de workers (default 1)")
    print()
    print("Para ajuda detalhada de um comando:")
    print("  fraclab --help <comando>")
    print("  fraclab <comando> --help")


def print_help_op() -> None:
    """Exibe help detalhado do comando op apply."""
    print()
    print("COMANDO: op apply")
    print()
    print("DESCRICAO:")
    print("  Aplica um operador fracionario a um campo fraclab-field v1.")
    print("  Saidas vetoriais gravam um arquivo por componente: <nome>_<j><ext>.")
    print()
    print("SINTAXE:")
    print("  fraclab op apply --op <operador> --s <s> --input <campo> --output <campo> [opcoes]")
    print()
    print("OPCOES:")
    print("  --op <operador>")
    print("    - frac-laplacian, riesz-potential, riesz-transform, frac-gradient, liouville")
    print("  --s <s>")
    print("    - Ordem em (0,1) (ignorada por riesz-transform)")
    print("  --method <spectral|singular>")
    print("    - Caminho espectral (grid periodico) ou soma singular direta (default: spectral)")
    print("  --axis <j>")
    print("    - Eixo de riesz-transform/frac-gradient (default: todas as componentes)")
    print("  --side <+|->")
    print("    - Lado da derivada de Liouville (default: +)")
    print("  --input, -i / --output, -o")
    print("    - Arquivos de entrada e saida")
    print()
    print("EXEMPLOS:")
    print()
    print("  # Laplaciano fracionario de ordem 0.5")
    print("  fraclab op apply --op frac-laplacian --s 0.5 --input u.field --output lap.field")
    print()
    print("  # Transformadas de Riesz (gera r_0.field, r_1.field)")
    print("  fraclab op apply --op riesz-transform --input u.field --output r.field")


def print_help_norm() -> None:
    """Exibe help detalhado do comando norm."""
    print()
    print("COMANDO: norm")
    print()
    print("DESCRICAO:")
    print("  Calcula uma norma de um campo. Imprime o valor decimal e, na linha")
    print("  seguinte, o registro JSON {kind, value, grid, truncation_report}.")
    print()
    print("SINTAXE:")
    print("  fraclab norm --kind <tipo> [--p <p>] [--s <s>] [--variant riesz|maximal] --input <campo>")
    print()
    print("TIPOS:")
    print("  lp, weak_lp        - exigem --p (aceita inf)")
    print("  lorentz, gagliardo - exigem --s")
    print("  hardy              - exige campo de media zero; --variant riesz|maximal")
    print("  bmo                - oscilacao media maxima sobre cubos diadicos")
    print("  hs1, hs1_plus, hs1_minus - seminormas de Riesz; exigem --s")
    print()
    print("EXEMPLOS:")
    print()
    print("  fraclab norm --kind lp --p 1 --input u.field")
    print("  fraclab norm --kind hardy --variant maximal --input f.field")


def print_help_capacity() -> None:
    """Exibe help detalhado do comando capacity."""
    print()
    print("COMANDO: capacity")
    print()
    print("DESCRICAO:")
    print("  Resolve Cap_X(K) = inf{[u]_X : u >= 1 em K} pelo metodo primal-dual")
    print("  e imprime o SolveReport JSON (value, gap, iters, dual_value, converged, trace).")
    print("  --kind content calcula o conteudo de Hausdorff diadico com alpha = n - s.")
    print()
    print("SINTAXE:")
    print("  fraclab capacity --kind <ws1|hs1|hs1p|hs1m|content> --s <s> --set <conjunto> [opcoes]")
    print()
    print("OPCOES:")
    print("  --set ball:r=<r> | cube:l=<l> | cells:<arquivo>")
    print("    - Conjunto K (celulas cujo centro esta na bola/cubo, ou lista de indices)")
    print("  --grid n=<n>,N=<N>,L=<L>")
    print("    - Grid (default: capacity_n, capacity_N, capacity_L da configuracao)")
    print("  --output, -o <campo>")
    print("    - Grava o minimizador")
    print()
    print("EXEMPLOS:")
    print()
    print("  fraclab capacity --kind hs1 --s 0.5 --set ball:r=0.5")
    print("  fraclab capacity --kind content --s 0.5 --set cells:k.cells --grid n=2,N=64,L=4")


def print_help_growth() -> None:
    """Exibe help detalhado do comando growth."""
    print()
    print("COMANDO: growth")
    print()
    print("DESCRICAO:")
    print("  Calcula sup r^{beta-n} mu(B(x,r)) sobre raios diadicos e imprime o JSON")
    print("  com o valor e o perfil por raio. Medida com massa num unico ponto: inf.")
    print()
    print("SINTAXE:")
    print("  fraclab growth --beta <beta> --measure <arquivo>")
    print()
    print("FORMATO DA MEDIDA:")
    print("  Uma linha 'x1 ... xn peso' por atomo; '#' inicia comentario.")


def print_help_trace() -> None:
    """Exibe help detalhado do comando trace."""
    print()
    print("COMANDO: trace")
    print()
    print("DESCRICAO:")
    print("  Razao ||u||_{L^{n/(n-s)}(mu)} / [u]_{H^{s,1}} (strong) ou")
    print("  ||u||_{L^{n/(n-s),inf}(mu)} / [u]_{H^{s,1}_-} (weak).")
    print()
    print("SINTAXE:")
    print("  fraclab trace --measure <arquivo> --input <campo> --s <s> [--mode strong|weak]")


def print_help_verify() -> None:
    """Exibe help detalhado do comando verify."""
    print()
    print("COMANDO: verify")
    print()
    print("DESCRICAO:")
    print("  Executa uma suite de verificacao e grava o relatorio JSON")
    print("  {suite, environment, checks:[{id, statement, measured, threshold, verdict}]}.")
    print("  Sem --report o relatorio vai para <report_dir>/<suite>.json (report_dir da config).")
    print("  Saida 0 se todas as verificacoes passam, 1 caso contrario.")
    print()
    print("SINTAXE:")
    print("  fraclab verify --suite <suite> [--report <json>] [--s <s>[,<s>...]] [--grid n=<n>,N=<N>,L=<L>]")
    print()
    print("SUITES:")
    print("  identity, stein-weiss, weak-type, capacitary, trace, fs, divergence, all")
    print()
    print("EXEMPLOS:")
    print()
    print("  fraclab verify --suite identity --report reports/identity.json")
    print("  fraclab verify --suite capacitary --s 0.5 --grid n=2,N=64,L=4 --report cap.json")
