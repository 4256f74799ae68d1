import logging
from typing import Mapping, Optional, Union

import pandas as pd

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ...datos.dominio.entidades import ActivityPanel, IndicatorSeries
from .objetos_valor import Crosswalk, PriceIndex

logger = logging.getLogger(__name__)


def aplicar_crosswalk(df: pd.DataFrame, crosswalk: Optional[Crosswalk], columna: str = "region") -> pd.DataFrame:
    """Reemplaza sub-regiones por su región; falla listando las sub-regiones desconocidas."""
    if crosswalk is None:
        return df
    desconocidas = crosswalk.desconocidas(df[columna].unique())
    if desconocidas:
        muestra = ", ".join(desconocidas[:20])
        raise DatosInvalidosExcepcion(
            f"Sub-regiones sin correspondencia ({len(desconocidas)}): {muestra}",
            codigo="sub_region_desconocida", detalles={"sub_regiones": desconocidas})
    df = df.copy()
    df[columna] = df[columna].map(crosswalk.mapa)
    return df


def aggregate_intensity(df: pd.DataFrame, crosswalk: Optional[Crosswalk]) -> ActivityPanel:
    """Suma intensidades de las sub-regiones de cada región; la masa por (actividad, año) se conserva."""
    df = aplicar_crosswalk(df.loc[df["value"] != 0, ["region", "activity", "year", "value"]], crosswalk)
    agregado = df.groupby(["region", "activity", "year"], as_index=False, sort=True)["value"].sum()
    panel = ActivityPanel.desde_dataframe(agregado)
    logger.info(f"Panel de intensidades: {len(panel.regions)} regiones, {len(panel.activities)} actividades, "
                f"{len(panel.years)} años, {panel.n_entradas} entradas")
    return panel


def aggregate_indicator(serie: IndicatorSeries, crosswalk: Optional[Crosswalk]) -> IndicatorSeries:
    """
    Suma un indicador aditivo (PIB, población) por región.

    Una (región, año) sólo queda definida si todas las sub-regiones de esa
    región presentes en el archivo tienen valor ese año.
    """
    if crosswalk is None:
        return serie
    df = aplicar_crosswalk(serie.a_dataframe().rename(columns={"region": "sub_region"}).assign(
        region=lambda d: d["sub_region"]), crosswalk)
    esperadas = df.groupby("region")["sub_region"].nunique()
    agregado = df.groupby(["region", "year"], as_index=False).agg(value=("value", "sum"),
                                                                   n=("sub_region", "nunique"))
    completas = agregado["n"].to_numpy() == esperadas.reindex(agregado["region"]).to_numpy()
    incompletas = int((~completas).sum())
    if incompletas:
        logger.warning(f"{serie.name}: {incompletas} pares (región, año) con sub-regiones faltantes quedan sin dato")
    return IndicatorSeries.desde_dataframe(agregado.loc[completas], serie.name, serie.units)


def deflate(nominal: IndicatorSeries, price_index: Union[PriceIndex, Mapping[int, float]],
            base_year: int) -> IndicatorSeries:
    """output(r,t) = nominal(r,t) × índice(base) / índice(t)."""
    if not isinstance(price_index, PriceIndex):
        price_index = PriceIndex(price_index)
    faltantes = sorted({t for t in nominal.anios if t not in price_index} | (
        set() if base_year in price_index else {base_year}))
    if faltantes:
        raise DatosInvalidosExcepcion(
            f"Índice de precios ausente para los años {', '.join(map(str, faltantes))}",
            codigo="indice_ausente", detalles={"anios": faltantes})
    base = price_index[base_year]
    valores = {(r, t): v * base / price_index[t] for (r, t), v in nominal.values.items()}
    return IndicatorSeries(name=nominal.name, values=valores, units=f"{nominal.units} ({base_year})".strip())


def per_capita(total: IndicatorSeries, poblacion: IndicatorSeries, name: str = "gdppc") -> IndicatorSeries:
    """Cociente definido sólo donde ambos existen y la población es positiva."""
    valores = {}
    for clave, v in total.values.items():
        n = poblacion.values.get(clave)
        if n is not None and n > 0:
            valores[clave] = v / n
    descartados = len(total) - len(valores)
    if descartados:
        logger.info(f"{name}: {descartados} pares (región, año) sin población válida")
    return IndicatorSeries(name=name, values=valores, units=f"{total.units} per capita".strip())
