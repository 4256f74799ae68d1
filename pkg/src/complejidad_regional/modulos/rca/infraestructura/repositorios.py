from pathlib import Path

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ....seedwork.infraestructura.csv import (COLUMNA_LINEA, columna_anio, columna_real, exigir_no_vacios,
                                              leer_csv, rechazar_duplicados)
from ..dominio.objetos_valor import Baseline


def load_external_shares(path: Path) -> Baseline:
    path = Path(path)
    df = leer_csv(path, ("activity", "year", "share"))
    exigir_no_vacios(df, ("activity", "year"), path)
    df["year"] = columna_anio(df, "year", path)
    df["share"] = columna_real(df, "share", path)
    rechazar_duplicados(df, ("activity", "year"), path)
    fuera = ~((df["share"] > 0) & (df["share"] <= 1))
    if fuera.any():
        raise DatosInvalidosExcepcion(
            f"{path}: cuota {df.loc[fuera, 'share'].iloc[0]} fuera de (0, 1]", codigo="cuota_fuera_de_rango",
            linea=int(df.loc[fuera, COLUMNA_LINEA].iloc[0]))
    return Baseline("external", dict(zip(zip(df["activity"], df["year"].astype(int)), df["share"])))
