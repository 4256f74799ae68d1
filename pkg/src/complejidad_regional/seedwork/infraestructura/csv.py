"""
Lectura y escritura de tablas CSV largas (tidy) con validación por línea.

Todas las escrituras ordenan filas por sus columnas clave y usan la
representación decimal más corta que reproduce el float64, de modo que
escribir y volver a leer devuelve exactamente los mismos valores.
"""
import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..dominio.excepciones import DatosInvalidosExcepcion

logger = logging.getLogger(__name__)

COLUMNA_LINEA = "_linea"
_PATRON_ANIO = re.compile(r"^\d{4}$")
_MAX_LINEAS_REPORTADAS = 10


def leer_csv(ruta: Path, columnas: Sequence[str]) -> pd.DataFrame:
    """Lee un CSV con encabezado obligatorio; todas las celdas quedan como texto."""
    ruta = Path(ruta)
    if not ruta.exists():
        raise DatosInvalidosExcepcion(f"No existe el archivo {ruta}", codigo="archivo_inexistente")
    try:
        df = pd.read_csv(ruta, dtype=str, keep_default_na=False, encoding="utf-8", skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise DatosInvalidosExcepcion(f"{ruta} está vacío (se requiere encabezado)", codigo="encabezado_faltante")
    except pd.errors.ParserError as e:
        raise DatosInvalidosExcepcion(f"{ruta}: fila mal formada ({e})", codigo="fila_mal_formada")

    faltantes = [c for c in columnas if c not in df.columns]
    if faltantes:
        raise DatosInvalidosExcepcion(
            f"{ruta}: faltan columnas {', '.join(faltantes)}; se esperaba {','.join(columnas)}",
            codigo="encabezado_invalido", linea=1,
        )
    df = df[list(columnas)].copy()
    for col in columnas:
        df[col] = df[col].str.strip()
    df[COLUMNA_LINEA] = np.arange(2, len(df) + 2)
    logger.debug(f"Leídas {len(df)} filas de {ruta}")
    return df


def _lineas(df: pd.DataFrame, mascara) -> List[int]:
    return df.loc[mascara, COLUMNA_LINEA].head(_MAX_LINEAS_REPORTADAS).tolist()


def exigir_no_vacios(df: pd.DataFrame, columnas: Iterable[str], ruta: Path):
    for col in columnas:
        vacios = df[col] == ""
        if vacios.any():
            lineas = _lineas(df, vacios)
            raise DatosInvalidosExcepcion(
                f"{ruta}: columna '{col}' vacía", codigo="fila_mal_formada", linea=lineas[0],
                detalles={"lineas": lineas},
            )


def columna_anio(df: pd.DataFrame, col: str, ruta: Path) -> pd.Series:
    malos = ~df[col].str.match(_PATRON_ANIO)
    if malos.any():
        lineas = _lineas(df, malos)
        raise DatosInvalidosExcepcion(
            f"{ruta}: año inválido '{df.loc[malos, col].iloc[0]}' (se esperan 4 dígitos)",
            codigo="fila_mal_formada", linea=lineas[0], detalles={"lineas": lineas},
        )
    return df[col].astype(np.int64)


def columna_real(df: pd.DataFrame, col: str, ruta: Path, permitir_vacio: bool = False) -> pd.Series:
    """Convierte a float64; punto decimal, sin separador de miles."""
    texto = df[col]
    vacios = texto == ""
    valores = pd.to_numeric(texto.where(~vacios, None), errors="coerce")
    malos = valores.isna() & ~vacios
    if not permitir_vacio:
        malos = malos | vacios
    if malos.any():
        lineas = _lineas(df, malos)
        raise DatosInvalidosExcepcion(
            f"{ruta}: valor no numérico '{texto[malos].iloc[0]}' en columna '{col}'",
            codigo="fila_mal_formada", linea=lineas[0], detalles={"lineas": lineas},
        )
    no_finitos = ~np.isfinite(valores.fillna(0.0).to_numpy())
    if no_finitos.any():
        lineas = _lineas(df, no_finitos)
        raise DatosInvalidosExcepcion(
            f"{ruta}: valor no finito en columna '{col}'", codigo="fila_mal_formada",
            linea=lineas[0], detalles={"lineas": lineas},
        )
    # to_numeric solo clasifica: su conversión rápida no redondea correctamente todos los decimales.
    exactos = pd.Series(np.nan, index=texto.index, dtype=np.float64)
    exactos[~vacios] = texto[~vacios].astype(np.float64)
    return exactos


def rechazar_duplicados(df: pd.DataFrame, claves: Sequence[str], ruta: Path):
    duplicados = df.duplicated(subset=list(claves), keep="first")
    if duplicados.any():
        lineas = _lineas(df, duplicados)
        raise DatosInvalidosExcepcion(
            f"{ruta}: clave ({', '.join(claves)}) repetida", codigo="clave_duplicada",
            linea=lineas[0], detalles={"lineas": lineas},
        )


def escribir_csv(df: pd.DataFrame, ruta: Path, claves: Optional[Sequence[str]] = None) -> Path:
    ruta = Path(ruta)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    if claves:
        df = df.sort_values(list(claves), kind="mergesort")
    df.to_csv(ruta, index=False, encoding="utf-8", lineterminator="\n", na_rep="")
    logger.debug(f"Escrito {ruta} ({len(df)} filas)")
    return ruta
