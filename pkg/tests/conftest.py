from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from complejidad_regional.modulos.datos.dominio.entidades import (ActivityPanel, IndicatorSeries,
                                                                 SpecializationMatrix)
from complejidad_regional.modulos.sintetico.dominio.servicios import gen_specialization


@pytest.fixture
def escribir_csv(tmp_path):
    """Escribe un CSV con el texto dado dentro de tmp_path y devuelve su ruta."""
    def _escribir(nombre: str, contenido: str) -> Path:
        ruta = tmp_path / nombre
        ruta.write_text(contenido, encoding="utf-8")
        return ruta
    return _escribir


@pytest.fixture
def panel_dos_por_dos():
    """X = [[10, 0], [10, 10]] en 2010."""
    df = pd.DataFrame({"region": ["A", "B", "B"], "activity": ["p1", "p1", "p2"],
                       "year": [2010, 2010, 2010], "value": [10.0, 10.0, 10.0]})
    return ActivityPanel.desde_dataframe(df, activities=["p1", "p2"])


@pytest.fixture
def anidada_4x4() -> SpecializationMatrix:
    return gen_specialization(4, 4, "nested")


@pytest.fixture
def matriz():
    def _matriz(entradas, year: int = 2010, sin_datos=()) -> SpecializationMatrix:
        entradas = np.asarray(entradas, dtype=np.int8)
        n, m = entradas.shape
        return SpecializationMatrix.desde_entradas([f"r{i + 1}" for i in range(n)],
                                                   [f"a{j + 1}" for j in range(m)], entradas, year, sin_datos)
    return _matriz


@pytest.fixture
def serie():
    def _serie(nombre: str, valores: dict) -> IndicatorSeries:
        return IndicatorSeries(name=nombre, values=valores)
    return _serie
