"""
Pool de workers para tarefas independentes (solves de capacidade, varreduras).

A ordem dos resultados é a ordem de entrada, portanto a saída não depende
do número de workers.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar, Optional

from core.config import thread_count

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Aplica ``fn`` a cada item, com até FRACLAB_THREADS workers.

    Args:
        fn: Função pura aplicada a cada item.
        items: Itens de entrada.
        workers: Número de workers (padrão: FRACLAB_THREADS).

    Returns:
        list: Resultados na ordem dos itens.
    """
    items = list(items)
    workers = thread_count() if workers is None else max(1, workers)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
