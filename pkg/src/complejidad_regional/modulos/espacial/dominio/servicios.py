"""
Estadística espacial sobre el grafo de regiones: I de Moran con pesos
binarios sin estandarizar, asimetría poblacional y promedio de vecinos.
"""
import logging
from typing import Literal, Mapping, Tuple

import numpy as np
from esda.moran import Moran
from libpysal.weights import W
from scipy import stats

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion, FallaNumericaExcepcion
from ...datos.dominio.entidades import RegionGraph, ValoresRegionales

logger = logging.getLogger(__name__)

AISLADA = "isolated"
VECINO_SIN_DATO = "missing neighbor"


def pesos_binarios(graph: RegionGraph) -> W:
    """Pesos binarios de libpysal con la vecindad del grafo (índices en el orden de `graph.regions`)."""
    vecinos = {i: sorted(vs) for i, vs in enumerate(graph.neighbors)}
    return W(vecinos, silence_warnings=True)


def _vector(values: Mapping[str, float], graph: RegionGraph) -> np.ndarray:
    faltantes = [r for r in graph.regions if r not in values]
    if faltantes:
        raise DatosInvalidosExcepcion(
            f"{len(faltantes)} regiones del grafo sin valor: {', '.join(faltantes[:20])}",
            codigo="valores_faltantes", detalles={"regiones": faltantes})
    return np.array([values[r] for r in graph.regions], dtype=np.float64)


def _exigir_varianza(x: np.ndarray):
    if not np.ptp(x) > 0:
        raise FallaNumericaExcepcion("El campo es constante: varianza nula", codigo="constant_field")


def morans_i(values: Mapping[str, float], graph: RegionGraph) -> float:
    """I = (|R| / Σ_r |N(r)|) · Σ_r Σ_{r'∈N(r)} z_r z_{r'} / Σ_r z_r²."""
    x = _vector(values, graph)
    if graph.n_aristas == 0:
        raise DatosInvalidosExcepcion("El grafo no tiene aristas", codigo="no_edges")
    _exigir_varianza(x)
    moran = Moran(x, pesos_binarios(graph), transformation="B", permutations=0)
    return float(moran.I)


def skewness(values: Mapping[str, float]) -> float:
    """Asimetría con momentos poblacionales (divididos por n)."""
    x = np.fromiter(values.values(), dtype=np.float64)
    if len(x) < 3:
        raise DatosInvalidosExcepcion(f"La asimetría requiere al menos 3 valores (hay {len(x)})",
                                      codigo="pocos_valores")
    _exigir_varianza(x)
    return float(stats.skew(x, bias=True))


def neighbor_average(values: Mapping[str, float], graph: RegionGraph,
                     mode: Literal["propagate", "subset"] = "propagate") -> ValoresRegionales:
    """
    ⟨x⟩_N(r): promedio de los vecinos de r. En modo `propagate` un vecino sin
    valor deja a r indefinida; en modo `subset` se promedian los vecinos con valor.
    """
    A = graph.adyacencia()
    x = np.array([values.get(r, np.nan) for r in graph.regions], dtype=np.float64)
    definidos = ~np.isnan(x)
    grados = graph.grados()
    con_dato = A @ definidos.astype(np.float64)
    suma = A @ np.where(definidos, x, 0.0)

    valores, indefinidos = {}, {}
    for i, region in enumerate(graph.regions):
        if grados[i] == 0:
            indefinidos[region] = AISLADA
        elif (mode == "propagate" and con_dato[i] < grados[i]) or con_dato[i] == 0:
            indefinidos[region] = VECINO_SIN_DATO
        else:
            valores[region] = float(suma[i] / con_dato[i])
    faltantes = sum(1 for m in indefinidos.values() if m == VECINO_SIN_DATO)
    if faltantes:
        logger.warning(f"Promedio de vecinos indefinido en {faltantes} regiones por vecinos sin valor")
    return ValoresRegionales(valores=valores, indefinidos=indefinidos)


def restringir_a_valores(graph: RegionGraph, values: Mapping[str, float]) -> Tuple[RegionGraph, int, int]:
    """Subgrafo de las regiones con valor; devuelve también regiones y aristas removidas."""
    subgrafo, aristas_removidas = graph.subgrafo(r for r in graph.regions if r in values)
    regiones_removidas = len(graph.regions) - len(subgrafo.regions)
    return subgrafo, regiones_removidas, aristas_removidas
