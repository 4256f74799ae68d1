from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ....seedwork.infraestructura.csv import (columna_anio, columna_real, escribir_csv, exigir_no_vacios,
                                              leer_csv, rechazar_duplicados)
from ...datos.dominio.entidades import IndicatorSeries
from ..dominio.objetos_valor import ComplexityResult, ResultadoReflexiones


def load_pci(path: Path) -> Dict[Tuple[str, int], float]:
    path = Path(path)
    df = leer_csv(path, ("activity", "year", "pci"))
    exigir_no_vacios(df, ("activity", "year"), path)
    df["year"] = columna_anio(df, "year", path)
    df["pci"] = columna_real(df, "pci", path)
    rechazar_duplicados(df, ("activity", "year"), path)
    return dict(zip(zip(df["activity"], df["year"].astype(int)), df["pci"]))


def load_activity_scores(path: Path, indicator: str) -> Dict[Tuple[str, int], float]:
    """Lee `activities.csv` y devuelve los puntajes de un indicador por (actividad, año)."""
    path = Path(path)
    df = leer_csv(path, ("activity", "year", "indicator", "value"))
    df["year"] = columna_anio(df, "year", path)
    df["value"] = columna_real(df, "value", path)
    df = df.loc[df["indicator"] == indicator]
    return dict(zip(zip(df["activity"], df["year"].astype(int)), df["value"]))


def series_de_resultados(resultados: List[ComplexityResult], nombre: str) -> IndicatorSeries:
    valores = {(r, res.year): v for res in resultados for r, v in res.region_scores.items()}
    return IndicatorSeries(name=nombre, values=valores, units="z-score")


COLUMNAS_ACTIVIDADES = ["activity", "year", "indicator", "value"]


def tabla_actividades(puntajes: Dict[Tuple[str, int], float], nombre: str) -> pd.DataFrame:
    filas = [(a, t, nombre, v) for (a, t), v in sorted(puntajes.items())]
    return pd.DataFrame(filas, columns=COLUMNAS_ACTIVIDADES)


def puntajes_actividades(resultados: List[ComplexityResult]) -> Dict[Tuple[str, int], float]:
    return {(a, res.year): v for res in resultados for a, v in (res.activity_scores or {}).items()}


def write_activity_tables(tablas: List[pd.DataFrame], path: Path) -> Path:
    df = pd.concat(tablas, ignore_index=True) if tablas else pd.DataFrame(columns=COLUMNAS_ACTIVIDADES)
    return escribir_csv(df, path, claves=("indicator", "activity", "year"))


def write_drops(resultados: List[ComplexityResult], path_regiones: Path, path_actividades: Path) -> List[Path]:
    regiones = pd.DataFrame([(r, res.year, motivo) for res in resultados for r, motivo in res.dropped_regions],
                            columns=["region", "year", "reason"])
    actividades = pd.DataFrame([(a, res.year, motivo) for res in resultados
                                for a, motivo in res.dropped_activities],
                               columns=["activity", "year", "reason"])
    return [escribir_csv(regiones, path_regiones, claves=("year", "region")),
            escribir_csv(actividades, path_actividades, claves=("year", "activity"))]


def write_eigenvalues(resultados: Dict[str, List[ComplexityResult]], path: Path) -> Path:
    filas = [(res.year, nombre, *(list(res.eigenvalues) + [np.nan] * 3)[:3])
             for nombre, lista in resultados.items() for res in lista if res.eigenvalues]
    df = pd.DataFrame(filas, columns=["year", "indicator", "lambda1", "lambda2", "lambda3"])
    return escribir_csv(df, path, claves=("indicator", "year"))


def write_reflections(resultados: List[ResultadoReflexiones], path: Path) -> Path:
    partes = []
    for res in resultados:
        n_iter, n_reg = res.k.shape
        partes.append(pd.DataFrame({
            "region": np.tile(np.asarray(res.regions, dtype=object), n_iter),
            "year": res.year,
            "iteration": np.repeat(np.arange(n_iter), n_reg),
            "k": res.k.ravel(),
        }))
    df = pd.concat(partes, ignore_index=True) if partes else pd.DataFrame(columns=["region", "year", "iteration", "k"])
    return escribir_csv(df, path, claves=("year", "iteration", "region"))
