"""
Generadores sintéticos usados como oráculos.

Todos son funciones puras de (parámetros, semilla) sobre un único generador
numpy PCG64 de 64 bits.
"""
import logging
from typing import Dict, List, Literal, Optional, Sequence

import numpy as np

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ...datos.dominio.entidades import IndicatorSeries, RegionGraph, SpecializationMatrix

logger = logging.getLogger(__name__)

ALGORITMO = "PCG64"
PERIODOS_CALENTAMIENTO = 50
PERSISTENCIA_X = 0.5
ARRASTRE_EPS_X = 0.3


def generador(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def nombres_regiones(n: int) -> List[str]:
    return [f"r{i:03d}" for i in range(n)]


def nombres_actividades(n: int) -> List[str]:
    return [f"a{j:03d}" for j in range(n)]


def _anidada(n_filas: int, n_columnas: int) -> np.ndarray:
    """Fila i con los primeros ⌈(n_filas − i)·n_columnas / n_filas⌉ unos."""
    cuantos = -(-(n_filas - np.arange(n_filas)) * n_columnas // n_filas)
    return (np.arange(n_columnas)[None, :] < cuantos[:, None]).astype(np.int8)


def gen_specialization(n_regions: int, n_activities: int,
                       model: Literal["nested", "random", "block"] = "nested", seed: int = 0,
                       density: float = 0.3, blocks: int = 2, year: int = 2000) -> SpecializationMatrix:
    """
    Matriz binaria sintética, determinista dada la semilla.

    En el modelo anidado las diversidades no crecen de una fila a la siguiente
    y son todas distintas solo cuando n_regions ≤ n_activities; con más regiones
    que actividades hay filas repetidas. El modelo en bloques produce `blocks`
    componentes desconectadas.
    """
    if n_regions < 3 or n_activities < 3:
        raise DatosInvalidosExcepcion(f"Dimensiones inválidas {n_regions}×{n_activities} (mínimo 3×3)",
                                      codigo="dimensiones_invalidas")
    if model == "nested":
        entradas = _anidada(n_regions, n_activities)
    elif model == "random":
        if not 0 < density <= 1:
            raise DatosInvalidosExcepcion(f"Densidad fuera de (0, 1]: {density}", codigo="dimensiones_invalidas")
        entradas = (generador(seed).random((n_regions, n_activities)) < density).astype(np.int8)
    elif model == "block":
        if not 1 <= blocks <= min(n_regions, n_activities):
            raise DatosInvalidosExcepcion(f"{blocks} bloques no caben en {n_regions}×{n_activities}",
                                          codigo="dimensiones_invalidas")
        entradas = np.zeros((n_regions, n_activities), dtype=np.int8)
        for filas, columnas in zip(np.array_split(np.arange(n_regions), blocks),
                                   np.array_split(np.arange(n_activities), blocks)):
            entradas[np.ix_(filas, columnas)] = _anidada(len(filas), len(columnas))
    else:
        raise DatosInvalidosExcepcion(f"Modelo de especialización desconocido: {model}",
                                      codigo="dimensiones_invalidas")
    return SpecializationMatrix.desde_entradas(nombres_regiones(n_regions), nombres_actividades(n_activities),
                                               entradas, year)


def gen_dynamic_panel(n: int, t: int, rho: float, beta: float, sigma_mu: float = 1.0, sigma_eps: float = 1.0,
                      ar_eps: Optional[float] = None, seed: int = 0, kappa: float = 0.5,
                      first_year: int = 2001, invalid_instrument: bool = False) -> Dict[str, IndicatorSeries]:
    """
    y_it = ρ y_{i,t−1} + β x_it + μ_i + ε_it, con x_it = 0.5 x_{i,t−1} + κ μ_i + 0.3 ε_{i,t−1} + v_it
    (predeterminada y correlacionada con μ). Arranca en la media estacionaria y
    descarta 50 periodos de calentamiento. Con `ar_eps`, ε es AR(1); con
    `invalid_instrument`, agrega z = ε + ruido, correlacionada con el error.
    """
    if not abs(rho) < 1:
        raise DatosInvalidosExcepcion(f"|rho| debe ser menor que 1 (recibido {rho})", codigo="rho_invalido")
    if n < 1 or t < 1:
        raise DatosInvalidosExcepcion(f"Dimensiones inválidas n={n}, t={t}", codigo="dimensiones_invalidas")
    rng = generador(seed)
    mu = sigma_mu * rng.standard_normal(n)
    x = kappa * mu / (1 - PERSISTENCIA_X)
    y = (beta * x + mu) / (1 - rho)
    eps = np.zeros(n)
    total = PERIODOS_CALENTAMIENTO + t
    ys, xs, zs = np.empty((t, n)), np.empty((t, n)), np.empty((t, n))
    for periodo in range(total):
        innovacion = sigma_eps * rng.standard_normal(n)
        eps_nuevo = innovacion if ar_eps is None else ar_eps * eps + innovacion
        x = PERSISTENCIA_X * x + kappa * mu + ARRASTRE_EPS_X * eps + rng.standard_normal(n)
        y = rho * y + beta * x + mu + eps_nuevo
        ruido_z = rng.standard_normal(n)
        eps = eps_nuevo
        if periodo >= PERIODOS_CALENTAMIENTO:
            k = periodo - PERIODOS_CALENTAMIENTO
            ys[k], xs[k], zs[k] = y, x, eps + 0.5 * ruido_z

    regiones = nombres_regiones(n)
    anios = range(first_year, first_year + t)

    def serie(nombre: str, valores: np.ndarray) -> IndicatorSeries:
        return IndicatorSeries(name=nombre, values={(r, a): float(valores[k, i])
                                                    for k, a in enumerate(anios) for i, r in enumerate(regiones)})

    resultado = {"y": serie("y", ys), "x": serie("x", xs)}
    if invalid_instrument:
        resultado["z"] = serie("z", zs)
    return resultado


def _dimensiones_grilla(n: int) -> tuple:
    a = max(d for d in range(1, int(np.sqrt(n)) + 1) if n % d == 0)
    return a, n // a


def gen_region_graph(model: Literal["cycle", "grid", "two_cliques"], n: Optional[int] = None,
                     a: Optional[int] = None, b: Optional[int] = None,
                     nombres: Optional[Sequence[str]] = None) -> RegionGraph:
    """
    cycle(n): anillo; grid(a, b): grilla con vecindad de torre; two_cliques(n):
    dos cliques de n nodos sin aristas entre ellas. Con `nombres`, los nodos
    sobrantes quedan aislados.
    """
    if model == "cycle":
        if n is None or n < 3:
            raise DatosInvalidosExcepcion("cycle requiere n ≥ 3", codigo="dimensiones_invalidas")
        total = n
        aristas = [(i, (i + 1) % n) for i in range(n)]
    elif model == "grid":
        if a is None or b is None or a < 1 or b < 1:
            raise DatosInvalidosExcepcion("grid requiere a, b ≥ 1", codigo="dimensiones_invalidas")
        total = a * b
        aristas = [(i * b + j, i * b + j + 1) for i in range(a) for j in range(b - 1)]
        aristas += [(i * b + j, (i + 1) * b + j) for i in range(a - 1) for j in range(b)]
    elif model == "two_cliques":
        if n is None or n < 2:
            raise DatosInvalidosExcepcion("two_cliques requiere n ≥ 2", codigo="dimensiones_invalidas")
        total = 2 * n
        aristas = [(base + i, base + j) for base in (0, n) for i in range(n) for j in range(i + 1, n)]
    else:
        raise DatosInvalidosExcepcion(f"Modelo de grafo desconocido: {model}", codigo="dimensiones_invalidas")
    etiquetas = list(nombres) if nombres is not None else nombres_regiones(total)
    if len(etiquetas) < total:
        raise DatosInvalidosExcepcion(f"{len(etiquetas)} nombres para {total} nodos", codigo="dimensiones_invalidas")
    return RegionGraph.desde_aristas(etiquetas, [(etiquetas[i], etiquetas[j]) for i, j in aristas])


def grafo_para(model: Literal["cycle", "grid", "two_cliques"], regiones: Sequence[str]) -> RegionGraph:
    """El grafo del modelo pedido que mejor cubre `regiones`."""
    n = len(regiones)
    if model == "cycle":
        return gen_region_graph("cycle", n=n, nombres=regiones)
    if model == "two_cliques":
        return gen_region_graph("two_cliques", n=n // 2, nombres=regiones)
    a, b = _dimensiones_grilla(n)
    return gen_region_graph("grid", a=a, b=b, nombres=regiones)
