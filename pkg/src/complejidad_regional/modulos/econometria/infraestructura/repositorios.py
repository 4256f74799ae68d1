from pathlib import Path
from typing import Dict, List, Tuple

import pandas as pd

from ....seedwork.infraestructura.csv import escribir_csv
from ...reportes.dominio.servicios import COLUMNAS_CORRELACION
from ..dominio.diagnosticos import etiqueta_vif
from ..dominio.especificaciones import stars
from ..dominio.objetos_valor import PanelModelResult, PanelSpec

COLUMNAS_COEFICIENTES = ["spec_id", "horizon", "estimator", "term", "estimate", "std_error", "p_value", "stars"]
COLUMNAS_DIAGNOSTICOS = ["spec_id", "horizon", "estimator", "n_obs", "n_regions", "n_instruments",
                         "sargan", "sargan_dof", "sargan_p", "ar1_z", "ar1_p", "ar2_z", "ar2_p", "windmeijer"]
COLUMNAS_VIF = ["spec_id", "horizon", "term", "vif", "flag"]
COLUMNAS_ELIMINACIONES = ["spec_id", "horizon", "region", "year", "reason"]
COLUMNAS_EFECTOS = ["spec_id", "estimator", "horizon", "term", "estimate", "ci_low", "ci_high"]
PREFIJO_DUMMY = "year_"
NAN = float("nan")

Estimacion = Tuple[PanelSpec, PanelModelResult]


def tabla_coeficientes(estimaciones: List[Estimacion]) -> pd.DataFrame:
    """Sin las dummies de año."""
    filas = []
    for spec, resultado in estimaciones:
        for termino, (b, se) in resultado.coefficients.items():
            if termino.startswith(PREFIJO_DUMMY):
                continue
            p = resultado.p_values.get(termino)
            filas.append((spec.id, spec.horizon, resultado.estimator, termino, b, se, p, stars(p)))
    return pd.DataFrame(filas, columns=COLUMNAS_COEFICIENTES)


def tabla_diagnosticos(estimaciones: List[Estimacion]) -> pd.DataFrame:
    filas = []
    for spec, r in estimaciones:
        sargan = r.sargan or (NAN, None, NAN)
        ar1 = r.ar1_test or (NAN, NAN)
        ar2 = r.ar2_test or (NAN, NAN)
        gmm = r.estimator.startswith("system-GMM")
        filas.append((spec.id, spec.horizon, r.estimator, r.n_obs, r.n_regions, r.n_instruments,
                      sargan[0], sargan[1], sargan[2], ar1[0], ar1[1], ar2[0], ar2[1],
                      str(r.windmeijer).lower() if gmm else ""))
    df = pd.DataFrame(filas, columns=COLUMNAS_DIAGNOSTICOS)
    df["sargan_dof"] = df["sargan_dof"].astype("Int64")
    return df


def tabla_vif(vifs: List[Tuple[PanelSpec, Dict[str, float]]]) -> pd.DataFrame:
    filas = [(spec.id, spec.horizon, termino, valor, etiqueta_vif(valor))
             for spec, valores in vifs for termino, valor in valores.items()]
    return pd.DataFrame(filas, columns=COLUMNAS_VIF)


def tabla_eliminaciones(spec: PanelSpec, eliminaciones: pd.DataFrame) -> pd.DataFrame:
    df = eliminaciones.copy()
    df.insert(0, "horizon", spec.horizon)
    df.insert(0, "spec_id", spec.id)
    return df[COLUMNAS_ELIMINACIONES]


def write_coefficients(estimaciones: List[Estimacion], path: Path) -> Path:
    return escribir_csv(tabla_coeficientes(estimaciones), path, claves=("spec_id", "horizon", "estimator"))


def write_diagnostics(estimaciones: List[Estimacion], path: Path) -> Path:
    return escribir_csv(tabla_diagnosticos(estimaciones), path, claves=("spec_id", "horizon", "estimator"))


def write_vif(vifs: List[Tuple[PanelSpec, Dict[str, float]]], path: Path) -> Path:
    return escribir_csv(tabla_vif(vifs), path, claves=("spec_id", "horizon"))


def write_deletions(tablas: List[pd.DataFrame], path: Path) -> Path:
    df = pd.concat(tablas, ignore_index=True) if tablas else pd.DataFrame(columns=COLUMNAS_ELIMINACIONES)
    return escribir_csv(df, path, claves=("spec_id", "horizon", "region", "year"))


def write_horizon_effects(tablas: List[pd.DataFrame], path: Path) -> Path:
    df = pd.concat(tablas, ignore_index=True) if tablas else pd.DataFrame(columns=COLUMNAS_EFECTOS)
    return escribir_csv(df, path, claves=("spec_id", "estimator", "term", "horizon"))


def write_correlations(tablas: List[pd.DataFrame], path: Path) -> Path:
    df = pd.concat(tablas, ignore_index=True) if tablas else pd.DataFrame(columns=COLUMNAS_CORRELACION)
    return escribir_csv(df, path, claves=("year",))
