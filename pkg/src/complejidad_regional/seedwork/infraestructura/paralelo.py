from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def mapear_ordenado(funcion: Callable[[T], R], elementos: Iterable[T], workers: int = 1) -> List[R]:
    """Aplica `funcion` a cada elemento; el resultado conserva el orden de entrada."""
    elementos = list(elementos)
    if workers <= 1 or len(elementos) <= 1:
        return [funcion(e) for e in elementos]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(funcion, elementos))
