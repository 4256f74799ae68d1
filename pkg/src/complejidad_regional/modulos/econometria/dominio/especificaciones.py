from typing import Iterable, List, Mapping, Optional, Sequence

import pandas as pd
from scipy import stats

from .objetos_valor import PanelModelResult, PanelSpec

CONTROLES = ("log_gdppc", "log_population")

# Columnas de la tabla de resultados: controles, complejidad industrial y de exportación
# con sus promedios de vecinos por separado.
COLUMNAS_POR_DEFECTO = (
    ("c1", ()),
    ("c2", CONTROLES),
    ("c3", CONTROLES + ("indeci",)),
    ("c4", CONTROLES + ("indeci_n",)),
    ("c5", CONTROLES + ("indeci", "indeci_n")),
    ("c6", CONTROLES + ("eci",)),
    ("c7", CONTROLES + ("eci_n",)),
    ("c8", CONTROLES + ("eci", "eci_n")),
)

COLUMNAS_EFECTOS = ["horizon", "term", "estimate", "ci_low", "ci_high"]


def stars(p: Optional[float]) -> str:
    if p is None or p != p:
        return ""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def default_specs(horizon: int, disponibles: Optional[Iterable[str]] = None,
                  dependent: str = "growth") -> List[PanelSpec]:
    """Las ocho columnas por defecto; con `disponibles`, sólo las que usan indicadores presentes."""
    presentes = None if disponibles is None else set(disponibles)
    return [PanelSpec(dependent=dependent, regressors=regresores, include_lagged_dependent=True,
                      horizon=horizon, id=ident)
            for ident, regresores in COLUMNAS_POR_DEFECTO
            if presentes is None or set(regresores) <= presentes]


def horizon_effects(results: Mapping[int, PanelModelResult], terms: Sequence[str],
                    nivel: float = 0.95) -> pd.DataFrame:
    """Efecto de cada término por horizonte con su intervalo normal."""
    z = stats.norm.ppf(0.5 + nivel / 2)
    filas = []
    for horizonte in sorted(results):
        coeficientes = results[horizonte].coefficients
        for termino in terms:
            if termino in coeficientes:
                b, se = coeficientes[termino]
                filas.append((horizonte, termino, b, b - z * se, b + z * se))
    return pd.DataFrame(filas, columns=COLUMNAS_EFECTOS)
