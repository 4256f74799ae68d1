import logging
from pathlib import Path
from typing import Optional


from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ....seedwork.infraestructura.csv import (COLUMNA_LINEA, columna_anio, columna_real, escribir_csv,
                                              exigir_no_vacios, leer_csv, rechazar_duplicados)
from ...datos.dominio.entidades import ActivityPanel
from ..dominio.objetos_valor import Crosswalk, PriceIndex
from ..dominio.servicios import aggregate_intensity

logger = logging.getLogger(__name__)

COLUMNAS_INTENSIDAD = ("region", "activity", "year", "value")


def load_intensity(path: Path, crosswalk: Optional[Crosswalk] = None) -> ActivityPanel:
    path = Path(path)
    df = leer_csv(path, COLUMNAS_INTENSIDAD)
    exigir_no_vacios(df, ("region", "activity", "year"), path)
    df["year"] = columna_anio(df, "year", path)
    df["value"] = columna_real(df, "value", path)
    negativos = df["value"] < 0
    if negativos.any():
        linea = int(df.loc[negativos, COLUMNA_LINEA].iloc[0])
        raise DatosInvalidosExcepcion(
            f"{path}: intensidad negativa {df.loc[negativos, 'value'].iloc[0]}",
            codigo="valor_negativo", linea=linea,
            detalles={"lineas": df.loc[negativos, COLUMNA_LINEA].head(10).tolist()})
    rechazar_duplicados(df, ("region", "activity", "year"), path)
    logger.info(f"Leídas {len(df)} filas de intensidad desde {path}")
    return aggregate_intensity(df, crosswalk)


def write_intensity(panel: ActivityPanel, path: Path) -> Path:
    return escribir_csv(panel.a_dataframe(), path, claves=("year", "region", "activity"))


def load_crosswalk(path: Path) -> Crosswalk:
    path = Path(path)
    df = leer_csv(path, ("sub_region", "region"))
    exigir_no_vacios(df, ("sub_region", "region"), path)
    unicos = df.drop_duplicates(subset=["sub_region", "region"])
    conflictos = sorted(unicos.loc[unicos["sub_region"].duplicated(keep=False), "sub_region"].unique())
    if conflictos:
        raise DatosInvalidosExcepcion(
            f"{path}: sub-regiones asignadas a más de una región: {', '.join(conflictos[:20])}",
            codigo="correspondencia_ambigua", detalles={"sub_regiones": conflictos})
    return Crosswalk(dict(zip(unicos["sub_region"], unicos["region"])))


def load_price_index(path: Path) -> PriceIndex:
    path = Path(path)
    df = leer_csv(path, ("year", "index"))
    df["year"] = columna_anio(df, "year", path)
    rechazar_duplicados(df, ("year",), path)
    df["index"] = columna_real(df, "index", path)
    no_positivos = df["index"] <= 0
    if no_positivos.any():
        raise DatosInvalidosExcepcion(
            f"{path}: índice de precios no positivo", codigo="indice_no_positivo",
            linea=int(df.loc[no_positivos, COLUMNA_LINEA].iloc[0]))
    return PriceIndex(dict(zip(df["year"].astype(int), df["index"])))
