import logging
from typing import Dict, Sequence

import numpy as np
import pandas as pd
import statsmodels.api as sm

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion

logger = logging.getLogger(__name__)

TOLERANCIA_COLINEALIDAD = 1e-10
UMBRAL_VIF_ALTO = 10.0


def vif(tabla: pd.DataFrame, regressors: Sequence[str]) -> Dict[str, float]:
    """
    VIF_k = 1 / (1 − R²_k) de la regresión de k contra los demás con intercepto.
    La colinealidad exacta se reporta como `inf`.
    """
    regresores = list(regressors)
    if len(regresores) < 2:
        raise DatosInvalidosExcepcion(f"El VIF requiere al menos dos regresores (recibidos {regresores})",
                                      codigo="pocos_regresores")
    datos = tabla[regresores].astype(np.float64)
    resultado = {}
    for nombre in regresores:
        otros = sm.add_constant(datos.drop(columns=[nombre]), has_constant="add")
        ajuste = sm.OLS(datos[nombre], otros).fit()
        r2 = float(ajuste.rsquared) if np.isfinite(ajuste.rsquared) else 1.0
        if r2 >= 1.0 - TOLERANCIA_COLINEALIDAD:
            logger.warning(f"VIF: {nombre} es combinación lineal exacta de los demás regresores")
            resultado[nombre] = float("inf")
        else:
            resultado[nombre] = 1.0 / (1.0 - r2)
    return resultado


def etiqueta_vif(valor: float) -> str:
    if not np.isfinite(valor):
        return "collinear"
    return "high" if valor > UMBRAL_VIF_ALTO else ""
