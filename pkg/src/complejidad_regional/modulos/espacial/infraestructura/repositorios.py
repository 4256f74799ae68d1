from pathlib import Path
from typing import List, Tuple

import pandas as pd

from ....seedwork.infraestructura.csv import escribir_csv
from ...datos.dominio.entidades import ValoresRegionales

COLUMNAS_SERIE = ["year", "indicator", "morans_i", "skewness"]
COLUMNAS_VECINOS = ["region", "year", "indicator", "value"]


def write_spatial_series(filas: List[Tuple[int, str, float, float]], path: Path) -> Path:
    return escribir_csv(pd.DataFrame(filas, columns=COLUMNAS_SERIE), path, claves=("indicator", "year"))


def tabla_vecinos(promedios: ValoresRegionales, year: int, indicator: str) -> pd.DataFrame:
    """Las regiones indefinidas se escriben con `value` vacío."""
    filas = [(r, year, indicator, v) for r, v in promedios.valores.items()]
    filas += [(r, year, indicator, float("nan")) for r in promedios.indefinidos]
    return pd.DataFrame(filas, columns=COLUMNAS_VECINOS)


def write_neighbor_averages(tablas: List[pd.DataFrame], path: Path) -> Path:
    df = pd.concat(tablas, ignore_index=True) if tablas else pd.DataFrame(columns=COLUMNAS_VECINOS)
    return escribir_csv(df, path, claves=("indicator", "region", "year"))
