#!/usr/bin/env python3
"""
Script de Verificação de Determinismo - FracLab.

Executa as suítes com FRACLAB_THREADS = 1 e = 4 e compara os relatórios
JSON byte a byte. Os relatórios não carregam timestamps nem o número de
workers, então qualquer diferença indica dependência da ordem de execução.

Uso:
    python scripts/check_determinism.py [suite ...]
"""

import os
import sys
from pathlib import Path

# Adiciona src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from app.field_repo import dumps_report
from app.logging import configure_logger
from app.verify import run_suite
from core.config import Config, THREADS_ENV

DEFAULT_SUITES = ["identity", "stein-weiss", "weak-type", "fs", "divergence"]


def report_bytes(suite: str, threads: int, config: Config) -> str:
    """Relatório serializado de uma suíte com um número fixo de workers."""
    os.environ[THREADS_ENV] = str(threads)
    return dumps_report(run_suite(suite, config=config).to_dict())


def main() -> int:
    suites = sys.argv[1:] or DEFAULT_SUITES
    config = Config()
    configure_logger(config.log_dir, enabled=False)

    print("=" * 60)
    print("VERIFICACAO DE DETERMINISMO")
    print("=" * 60)

    mismatches = []
    for suite in suites:
        single = report_bytes(suite, 1, config)
        multi = report_bytes(suite, 4, config)
        if single == multi:
            print(f"[OK] {suite}: relatorios identicos ({len(single)} bytes)")
        else:
            print(f"[ERRO] {suite}: relatorios diferem entre 1 e 4 workers")
            mismatches.append(suite)

    print()
    if mismatches:
        print(f"[ERRO] {len(mismatches)} suite(s) nao deterministica(s): {', '.join(mismatches)}")
        return 1
    print("[OK] Todas as suites sao deterministicas")
    return 0


if __name__ == "__main__":
    sys.exit(main())
