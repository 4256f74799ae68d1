"""Estimador intra-grupos con efectos fijos de región y año."""
import logging
from typing import List

import numpy as np
import pandas as pd
from linearmodels.panel import PanelOLS

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion, FallaNumericaExcepcion
from .objetos_valor import DENTRO_EF, PanelModelResult, PanelRegresion
from .pruebas import p_valor_normal

logger = logging.getLogger(__name__)

TOLERANCIA_RANGO = 1e-8


def _dummies(tabla: pd.DataFrame) -> np.ndarray:
    regiones = pd.get_dummies(tabla["region"], dtype=np.float64).to_numpy()
    anios = pd.get_dummies(tabla["year"], dtype=np.float64).to_numpy()[:, 1:]
    return np.hstack([regiones, anios])


def columnas_colineales(X: pd.DataFrame, efectos: np.ndarray) -> List[str]:
    """
    Regresores absorbidos por los efectos fijos o combinación lineal de los
    anteriores. Cada columna se residualiza contra las dummies y las columnas
    ya aceptadas; un residuo nulo la marca como colineal.
    """
    valores = X.to_numpy(dtype=np.float64)
    coef, *_ = np.linalg.lstsq(efectos, valores, rcond=None)
    transformadas = valores - efectos @ coef
    aceptadas, colineales = [], []
    for k, nombre in enumerate(X.columns):
        x = transformadas[:, k]
        escala = max(1.0, float(np.linalg.norm(valores[:, k])))
        if aceptadas:
            base = transformadas[:, aceptadas]
            b, *_ = np.linalg.lstsq(base, x, rcond=None)
            x = x - base @ b
        if np.linalg.norm(x) <= TOLERANCIA_RANGO * escala:
            colineales.append(nombre)
        else:
            aceptadas.append(k)
    return colineales


def within_fe(panel: PanelRegresion) -> PanelModelResult:
    """Transformación intra de dos vías y MCO, con errores agrupados por región."""
    spec = panel.spec
    tabla = panel.tabla
    periodos = tabla.groupby("region")["year"].transform("size")
    if (periodos < 2).any():
        unicas = int(tabla.loc[periodos < 2, "region"].nunique())
        logger.info(f"within-FE {spec.id}: se omiten {unicas} regiones con un solo periodo")
        tabla = tabla.loc[periodos >= 2].reset_index(drop=True)
    terminos = list(spec.terminos)
    if tabla.empty or not terminos:
        raise DatosInvalidosExcepcion(f"within-FE {spec.id}: no hay regiones con dos o más periodos",
                                      codigo="panel_vacio")

    colineales = columnas_colineales(tabla[terminos], _dummies(tabla))
    if colineales:
        raise FallaNumericaExcepcion(
            f"within-FE {spec.id}: regresores colineales con los efectos fijos u otros regresores: "
            f"{', '.join(colineales)}", codigo="rank_deficient", detalles={"columnas": colineales})

    datos = tabla.set_index(["region", "year"])
    modelo = PanelOLS(datos[spec.dependent], datos[terminos], entity_effects=True, time_effects=True)
    ajuste = modelo.fit(cov_type="clustered", cluster_entity=True)
    coeficientes = {t: (float(ajuste.params[t]), float(ajuste.std_errors[t])) for t in terminos}
    logger.info(f"within-FE {spec.id} (h={spec.horizon}): {int(ajuste.nobs)} observaciones, "
                f"{tabla['region'].nunique()} regiones")
    return PanelModelResult(
        estimator=DENTRO_EF, coefficients=coeficientes, n_obs=int(ajuste.nobs),
        n_regions=int(tabla["region"].nunique()),
        p_values={t: p_valor_normal(b, se) for t, (b, se) in coeficientes.items()},
    )
