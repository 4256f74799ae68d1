import logging
from collections import Counter
from typing import Literal, Mapping, Sequence

import numpy as np
import pandas as pd

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ...datos.dominio.entidades import IndicatorSeries
from .objetos_valor import PanelRegresion, PanelSpec

logger = logging.getLogger(__name__)

PREFIJO_LOG = "log_"
COLUMNAS_ELIMINACIONES = ["region", "year", "reason"]


def _exigir_positivos(serie: IndicatorSeries):
    for (region, year), valor in sorted(serie.values.items()):
        if not valor > 0:
            raise DatosInvalidosExcepcion(
                f"{serie.name} no es positivo en ({region}, {year}): {valor}", codigo="valor_no_positivo",
                detalles={"region": region, "year": year, "indicador": serie.name})


def growth_rate(y: IndicatorSeries, horizon: int, name: str = "growth") -> IndicatorSeries:
    """g_r^t = (log y_r^{t+h} − log y_r^t) / h, definida sólo donde existen ambos extremos."""
    if horizon < 1:
        raise DatosInvalidosExcepcion(f"Horizonte inválido: {horizon}", codigo="horizonte_invalido")
    _exigir_positivos(y)
    tasas = {}
    for (region, year), inicio in y.values.items():
        fin = y.values.get((region, year + horizon))
        if fin is not None:
            tasas[(region, year)] = (np.log(fin) - np.log(inicio)) / horizon
    return IndicatorSeries(name=name, values=tasas, units=f"log/año, h={horizon}")


def _resolver(series: Mapping[str, IndicatorSeries], nombre: str) -> IndicatorSeries:
    if nombre in series:
        return series[nombre]
    base = nombre[len(PREFIJO_LOG):] if nombre.startswith(PREFIJO_LOG) else None
    if base and base in series:
        _exigir_positivos(series[base])
        return IndicatorSeries(name=nombre, values={k: float(np.log(v)) for k, v in series[base].values.items()},
                               units=f"log {series[base].units}".strip())
    raise DatosInvalidosExcepcion(f"Indicador {nombre} no disponible para el panel", codigo="indicador_ausente",
                                  detalles={"indicador": nombre, "disponibles": sorted(series)})


def build_panel(series: Mapping[str, IndicatorSeries], spec: PanelSpec,
                lag_mode: Literal["nonoverlapping", "shift1"] = "nonoverlapping",
                adicionales: Sequence[str] = ()) -> PanelRegresion:
    """
    Una fila por (región, t) con la dependiente, todos los regresores y, si se
    pide, la dependiente rezagada definidos. El rezago es la ventana previa sin
    solapamiento (h años) o la del año anterior con `lag_mode="shift1"`.
    Los nombres `log_x` se derivan de la serie `x` cuando no vienen dados.
    `adicionales` agrega columnas (p. ej. instrumentos externos) sujetas a la misma eliminación.
    """
    paso = spec.horizon if lag_mode == "nonoverlapping" else 1
    dependiente = _resolver(series, spec.dependent)
    df = dependiente.a_dataframe(spec.dependent)
    columnas = []
    if spec.include_lagged_dependent:
        rezago = dependiente.a_dataframe(spec.columna_rezago)
        rezago["year"] = rezago["year"] + paso
        df = df.merge(rezago, on=["region", "year"], how="left")
        columnas.append(spec.columna_rezago)
    for nombre in list(spec.regressors) + [a for a in adicionales if a not in spec.regressors]:
        df = df.merge(_resolver(series, nombre).a_dataframe(nombre), on=["region", "year"], how="left")
        columnas.append(nombre)

    faltantes = df[columnas].isna()
    incompletas = faltantes.any(axis=1)
    causas = Counter()
    filas_eliminadas = []
    for i in np.flatnonzero(incompletas.to_numpy()):
        motivos = ["missing lagged dependent" if c == spec.columna_rezago else f"missing {c}"
                   for k, c in enumerate(columnas) if faltantes.iat[i, k]]
        causas.update(motivos)
        filas_eliminadas.append((df.at[i, "region"], int(df.at[i, "year"]), "; ".join(motivos)))
    eliminaciones = pd.DataFrame(filas_eliminadas, columns=COLUMNAS_ELIMINACIONES)
    tabla = (df.loc[~incompletas, ["region", "year", spec.dependent] + columnas]
             .sort_values(["region", "year"], kind="mergesort").reset_index(drop=True))
    if causas:
        logger.info(f"Panel {spec.id or spec.dependent} (h={spec.horizon}): se eliminan {len(eliminaciones)} filas "
                    f"({', '.join(f'{c}: {n}' for c, n in sorted(causas.items()))})")
    if tabla.empty:
        raise DatosInvalidosExcepcion(
            f"El panel {spec.id or spec.dependent} (h={spec.horizon}) queda vacío tras la eliminación por lista",
            codigo="panel_vacio", detalles={"causas": dict(causas), "eliminaciones": eliminaciones})
    return PanelRegresion(spec=spec, tabla=tabla, eliminaciones=eliminaciones, paso_rezago=paso)
