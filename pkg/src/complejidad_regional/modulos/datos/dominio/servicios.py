import logging
from typing import Iterable, List

import numpy as np
import pandas as pd

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from .entidades import IndicatorSeries

logger = logging.getLogger(__name__)


def align(panels: List[IndicatorSeries], years: Iterable[int]) -> pd.DataFrame:
    """
    Tabla rectangular (región, año) con una columna por serie.

    Las regiones son la intersección de los universos de las series; las
    celdas sin dato quedan como NaN explícito, nunca como cero.
    """
    years = sorted({int(t) for t in years})
    if not panels:
        raise DatosInvalidosExcepcion("align requiere al menos una serie", codigo="sin_series")
    nombres = [s.name for s in panels]
    if len(set(nombres)) != len(nombres):
        raise DatosInvalidosExcepcion(f"Series con nombre repetido: {nombres}", codigo="identificadores_duplicados")

    regiones = set(panels[0].regiones)
    for serie in panels[1:]:
        regiones &= set(serie.regiones)
    if not regiones:
        raise DatosInvalidosExcepcion(
            f"Las series {', '.join(nombres)} no comparten regiones", codigo="no_overlapping_regions")

    indice = pd.MultiIndex.from_product([sorted(regiones), years], names=["region", "year"])
    tabla = pd.DataFrame(index=indice)
    for serie in panels:
        columna = pd.Series(dict(serie.values), dtype=np.float64)
        if len(columna):
            columna.index = columna.index.set_names(["region", "year"])
        tabla[serie.name] = columna.reindex(indice)
    faltantes = int(tabla.isna().sum().sum())
    logger.info(f"Alineadas {len(nombres)} series: {len(regiones)} regiones × {len(years)} años, "
                f"{faltantes} celdas faltantes")
    return tabla.reset_index()
