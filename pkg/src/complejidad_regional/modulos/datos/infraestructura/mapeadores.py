from pathlib import Path
from typing import Dict, List

import numpy as np
import pandas as pd

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ....seedwork.infraestructura.csv import (columna_anio, columna_real, exigir_no_vacios, leer_csv,
                                              rechazar_duplicados)
from ..dominio.entidades import IndicatorSeries, RegionGraph

COLUMNAS_INDICADOR = ("region", "year", "value")
COLUMNAS_TABLA_INDICADORES = ("region", "year", "indicator", "value")
COLUMNAS_ADYACENCIA = ("region_a", "region_b")


class MapeadorIndicador:
    """Mapeador entre IndicatorSeries y el CSV largo `region,year,value`."""

    def csv_a_entidad(self, ruta: Path, nombre: str, unidades: str = "") -> IndicatorSeries:
        df = leer_csv(ruta, COLUMNAS_INDICADOR)
        exigir_no_vacios(df, ("region", "year"), ruta)
        df["year"] = columna_anio(df, "year", ruta)
        rechazar_duplicados(df, ("region", "year"), ruta)
        df["value"] = columna_real(df, "value", ruta, permitir_vacio=True)
        return IndicatorSeries.desde_dataframe(df, nombre, unidades)

    def entidad_a_dataframe(self, serie: IndicatorSeries) -> pd.DataFrame:
        return serie.a_dataframe()


class MapeadorTablaIndicadores:
    """Varias series en una tabla `region,year,indicator,value`."""

    def csv_a_entidades(self, ruta: Path) -> Dict[str, IndicatorSeries]:
        df = leer_csv(ruta, COLUMNAS_TABLA_INDICADORES)
        exigir_no_vacios(df, ("region", "year", "indicator"), ruta)
        df["year"] = columna_anio(df, "year", ruta)
        rechazar_duplicados(df, ("indicator", "region", "year"), ruta)
        df["value"] = columna_real(df, "value", ruta, permitir_vacio=True)
        return {nombre: IndicatorSeries.desde_dataframe(grupo, nombre)
                for nombre, grupo in df.groupby("indicator", sort=True)}

    def entidades_a_dataframe(self, series: List[IndicatorSeries]) -> pd.DataFrame:
        partes = []
        for serie in series:
            df = serie.a_dataframe()
            df.insert(2, "indicator", serie.name)
            partes.append(df)
        if not partes:
            return pd.DataFrame(columns=list(COLUMNAS_TABLA_INDICADORES))
        return pd.concat(partes, ignore_index=True)[list(COLUMNAS_TABLA_INDICADORES)]


class MapeadorGrafo:
    def csv_a_entidad(self, ruta: Path, regiones=None) -> RegionGraph:
        df = leer_csv(ruta, COLUMNAS_ADYACENCIA)
        exigir_no_vacios(df, COLUMNAS_ADYACENCIA, ruta)
        lazos = df["region_a"] == df["region_b"]
        if lazos.any():
            linea = int(df.loc[lazos, "_linea"].iloc[0])
            raise DatosInvalidosExcepcion(
                f"{ruta}: lazo sobre la región '{df.loc[lazos, 'region_a'].iloc[0]}'",
                codigo="grafo_invalido", linea=linea)
        universo = set(df["region_a"]) | set(df["region_b"]) | set(regiones or ())
        # Duplicados y aristas invertidas se toleran: el grafo se construye con conjuntos.
        aristas = zip(df["region_a"], df["region_b"])
        return RegionGraph.desde_aristas(sorted(universo), aristas)

    def entidad_a_dataframe(self, grafo: RegionGraph) -> pd.DataFrame:
        aristas = grafo.aristas()
        return pd.DataFrame({
            "region_a": np.array([a for a, _ in aristas], dtype=object),
            "region_b": np.array([b for _, b in aristas], dtype=object),
        })
