from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from ....seedwork.infraestructura.csv import escribir_csv
from ...datos.dominio.entidades import ValoresRegionales
from ..dominio.objetos_valor import DensityMatrix, ProximityMatrix


def tabla_proximidad(phi: ProximityMatrix) -> pd.DataFrame:
    """Pares a < b con φ > 0 (la diagonal y los ceros se omiten)."""
    activities = np.asarray(phi.activities, dtype=object)
    i, j = np.nonzero(np.triu(phi.phi, k=1))
    return pd.DataFrame({"activity_a": activities[i], "activity_b": activities[j], "year": phi.year,
                         "phi": phi.phi[i, j]})


def tabla_densidad(omega: DensityMatrix) -> pd.DataFrame:
    r, a = np.nonzero(~np.isnan(omega.omega))
    return pd.DataFrame({
        "region": np.asarray(omega.regions, dtype=object)[r],
        "activity": np.asarray(omega.activities, dtype=object)[a],
        "year": omega.year,
        "omega": omega.omega[r, a],
    })


def tabla_cercania(cercania: ValoresRegionales, year: int) -> pd.DataFrame:
    """Una fila por región; las indefinidas quedan con `closeness` vacío."""
    filas = [(r, year, v) for r, v in cercania.valores.items()]
    filas += [(r, year, np.nan) for r in cercania.indefinidos]
    return pd.DataFrame(filas, columns=["region", "year", "closeness"])


def write_tables(tablas: List[pd.DataFrame], path: Path, claves) -> Path:
    return escribir_csv(pd.concat(tablas, ignore_index=True), path, claves=claves)
