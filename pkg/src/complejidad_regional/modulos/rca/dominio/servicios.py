import logging

import numpy as np

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ...datos.dominio.entidades import ActivityPanel, SpecializationMatrix
from .objetos_valor import Baseline, MatrizRCA

logger = logging.getLogger(__name__)


def _linea_base(panel: ActivityPanel, baseline: Baseline, X: np.ndarray, year: int) -> np.ndarray:
    if baseline.mode == "internal":
        return X.sum(axis=0) / X.sum()
    cuotas = baseline.external_shares
    Z = np.array([cuotas.get((a, year), np.nan) for a in panel.activities], dtype=np.float64)
    faltantes = [a for a, z, total in zip(panel.activities, Z, X.sum(axis=0)) if np.isnan(z) and total > 0]
    if faltantes:
        raise DatosInvalidosExcepcion(
            f"Cuota externa ausente en {year} para actividades con intensidad positiva: {', '.join(faltantes[:20])}",
            codigo="cuota_ausente", detalles={"actividades": faltantes, "anio": year})
    return Z


def rca(panel: ActivityPanel, baseline: Baseline, year: int) -> MatrizRCA:
    """
    RCA_{r,i} = (X_{r,i} / Σ_j X_{r,j}) / Z_i.

    Filas de regiones con intensidad total nula quedan indefinidas (NaN).
    Una actividad sin intensidad en el año (o sin cuota externa) recibe RCA 0.
    """
    X = panel.matriz(year)
    if not X.sum() > 0:
        raise DatosInvalidosExcepcion(f"Intensidad total nula en {year}", codigo="total_nulo")
    Z = _linea_base(panel, baseline, X, year)

    totales = X.sum(axis=1)
    definidas = totales > 0
    cuotas = np.full(X.shape, np.nan)
    cuotas[definidas] = X[definidas] / totales[definidas, None]

    activas = np.nan_to_num(Z, nan=0.0) > 0
    valores = np.zeros_like(cuotas)
    valores[:, activas] = cuotas[:, activas] / Z[activas]
    valores[~definidas] = np.nan

    n_indefinidas = int((~definidas).sum())
    if n_indefinidas:
        logger.info(f"RCA {year}: {n_indefinidas} regiones sin intensidad quedan indefinidas")
    return MatrizRCA(regions=panel.regions, activities=panel.activities, year=year, valores=valores)


def binarize(rca_matrix: MatrizRCA, threshold: float = 1.0) -> SpecializationMatrix:
    """M_{r,i} = 1 si y sólo si RCA_{r,i} > umbral (desigualdad estricta)."""
    valores = rca_matrix.valores
    with np.errstate(invalid="ignore"):
        entradas = np.where(np.isnan(valores), False, valores > threshold)
    return SpecializationMatrix.desde_entradas(
        rca_matrix.regions, rca_matrix.activities, entradas.astype(np.int8), rca_matrix.year,
        sin_datos=rca_matrix.regiones_indefinidas,
    )
