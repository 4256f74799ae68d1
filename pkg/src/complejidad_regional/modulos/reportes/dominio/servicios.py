"""Tablas descriptivas: correlaciones, rankings extremos y la curva S."""
import logging
from itertools import combinations
from typing import Iterable, List, Mapping

import numpy as np
import pandas as pd

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ...datos.dominio.entidades import IndicatorSeries
from ...datos.dominio.servicios import align
from ...rca.dominio.objetos_valor import MatrizRCA

logger = logging.getLogger(__name__)

COLUMNAS_CORRELACION = ["year", "indicator_a", "indicator_b", "pearson", "n"]
COLUMNAS_RANKING_REGIONES = ["indicator", "year", "position", "rank", "region", "value"]
COLUMNAS_RANKING_ACTIVIDADES = ["indicator", "year", "position", "activity", "score", "top_region", "top_rca"]


def correlation_table(series: List[IndicatorSeries], year: int,
                      log_indicators: Iterable[str] = ("gdppc", "population")) -> pd.DataFrame:
    """Pearson entre cada par de indicadores sobre las regiones con todos los valores definidos."""
    log_indicators = set(log_indicators)
    tabla = align(series, [year]).dropna()
    for nombre in log_indicators & set(tabla.columns):
        positivos = tabla[nombre] > 0
        if not positivos.all():
            logger.warning(f"{nombre}: {int((~positivos).sum())} valores no positivos excluidos del logaritmo")
            tabla = tabla.loc[positivos]
        tabla[nombre] = np.log(tabla[nombre])
    nombres = [s.name for s in series]
    filas = []
    for a, b in combinations(nombres, 2):
        rho = tabla[a].corr(tabla[b]) if len(tabla) >= 2 else np.nan
        filas.append((year, a, b, rho, len(tabla)))
    return pd.DataFrame(filas, columns=COLUMNAS_CORRELACION)


def top_bottom_regions(series: IndicatorSeries, year: int, k: int = 5) -> pd.DataFrame:
    """Las k regiones de mayor y menor valor; sólo regiones con dato, empates por identificador."""
    valores = series.del_anio(year)
    orden = sorted(valores, key=lambda r: (-valores[r], r))
    n = len(orden)
    filas = [(series.name, year, "top", i + 1, r, valores[r]) for i, r in enumerate(orden[:k])]
    filas += [(series.name, year, "bottom", i + 1, orden[i], valores[orden[i]]) for i in range(max(n - k, 0), n)]
    return pd.DataFrame(filas, columns=COLUMNAS_RANKING_REGIONES)


def top_bottom_activities(activity_scores: Mapping[str, float], rca_matrix: MatrizRCA, indicator: str,
                          k: int = 5) -> pd.DataFrame:
    """Las k actividades más y menos complejas con la región de mayor RCA en cada una."""
    indice = {a: j for j, a in enumerate(rca_matrix.activities)}
    orden = sorted(activity_scores, key=lambda a: (-activity_scores[a], a))
    n = len(orden)
    seleccion = [("top", a) for a in orden[:k]] + [("bottom", a) for a in orden[max(n - k, 0):]]
    filas = []
    for posicion, actividad in seleccion:
        columna = rca_matrix.valores[:, indice[actividad]] if actividad in indice else np.array([np.nan])
        if np.isnan(columna).all():
            region, maximo = "", np.nan
        else:
            i = int(np.nanargmax(columna))
            region, maximo = rca_matrix.regions[i], float(columna[i])
        filas.append((indicator, rca_matrix.year, posicion, actividad, activity_scores[actividad], region, maximo))
    return pd.DataFrame(filas, columns=COLUMNAS_RANKING_ACTIVIDADES)


def s_curve(complexity: IndicatorSeries, closeness: IndicatorSeries) -> pd.DataFrame:
    """Pares (complejidad, cercanía) por (región, año) donde ambos existen."""
    claves = sorted(set(complexity.values) & set(closeness.values))
    if not claves and len(complexity) and len(closeness):
        raise DatosInvalidosExcepcion("Complejidad y cercanía no comparten (región, año)",
                                      codigo="no_overlapping_regions")
    return pd.DataFrame({
        "region": [r for r, _ in claves],
        "year": np.array([t for _, t in claves], dtype=np.int64),
        "complexity": np.array([complexity.values[c] for c in claves], dtype=np.float64),
        "closeness": np.array([closeness.values[c] for c in claves], dtype=np.float64),
    })
