import numpy as np
import pandas as pd
import pytest

from complejidad_regional.modulos.datos.dominio.entidades import ActivityPanel
from complejidad_regional.modulos.rca.dominio.objetos_valor import Baseline, MatrizRCA
from complejidad_regional.modulos.rca.dominio.servicios import binarize, rca
from complejidad_regional.modulos.rca.infraestructura.repositorios import load_external_shares
from complejidad_regional.seedwork.dominio.excepciones import DatosInvalidosExcepcion


def _rca_escalar(X: np.ndarray, r: int, i: int) -> float:
    """Recalcula una celda con sumas explícitas, sin operaciones vectoriales."""
    total_region = sum(X[r, j] for j in range(X.shape[1]))
    total_actividad = sum(X[k, i] for k in range(X.shape[0]))
    total = sum(X[k, j] for k in range(X.shape[0]) for j in range(X.shape[1]))
    return (X[r, i] / total_region) / (total_actividad / total)


class TestRca:
    """Pruebas de la ventaja comparativa revelada"""

    def test_linea_base_interna(self, panel_dos_por_dos):
        """X = [[10,0],[10,10]]: Z = (2/3, 1/3) y RCA = [[1.5, 0],[0.75, 1.5]]"""
        resultado = rca(panel_dos_por_dos, Baseline("internal"), 2010)

        np.testing.assert_allclose(resultado.valores, [[1.5, 0.0], [0.75, 1.5]], rtol=1e-12)
        X = panel_dos_por_dos.matriz(2010)
        for r in range(2):
            for i in range(2):
                assert resultado.valores[r, i] == pytest.approx(_rca_escalar(X, r, i), rel=1e-12)

    def test_cuotas_iguales_a_la_base(self):
        """Una región con la misma composición que el total tiene RCA 1 en todo"""
        df = pd.DataFrame({"region": ["A", "A", "B", "B"], "activity": ["p1", "p2", "p1", "p2"],
                           "year": 2010, "value": [2.0, 6.0, 1.0, 3.0]})
        resultado = rca(ActivityPanel.desde_dataframe(df), Baseline("internal"), 2010)

        np.testing.assert_allclose(resultado.valores, np.ones((2, 2)), rtol=1e-12)

    def test_region_sin_intensidad_indefinida(self):
        df = pd.DataFrame({"region": ["A", "B"], "activity": ["p1", "p2"], "year": 2010, "value": [1.0, 2.0]})
        panel = ActivityPanel.desde_dataframe(df, regions=["A", "B", "C"])
        resultado = rca(panel, Baseline("internal"), 2010)

        assert np.isnan(resultado.valores[2]).all()
        assert resultado.regiones_indefinidas == ["C"]

    def test_linea_base_externa(self, panel_dos_por_dos):
        baseline = Baseline("external", {("p1", 2010): 0.5, ("p2", 2010): 0.25})
        resultado = rca(panel_dos_por_dos, baseline, 2010)

        np.testing.assert_allclose(resultado.valores, [[2.0, 0.0], [1.0, 2.0]], rtol=1e-12)

    def test_cuota_externa_ausente(self, panel_dos_por_dos):
        baseline = Baseline("external", {("p1", 2010): 0.5})
        with pytest.raises(DatosInvalidosExcepcion) as e:
            rca(panel_dos_por_dos, baseline, 2010)
        assert e.value.codigo == "cuota_ausente"
        assert e.value.detalles["actividades"] == ["p2"]

    def test_linea_base_inconsistente(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            Baseline("external")
        assert e.value.codigo == "linea_base_invalida"


def _panel_aleatorio(seed: int, n_regiones: int = 8, n_actividades: int = 6, factores=None) -> ActivityPanel:
    """Intensidades lognormales con ~20 % de ceros; cada región y cada actividad conserva algo de intensidad."""
    rng = np.random.default_rng(seed)
    X = rng.lognormal(size=(n_regiones, n_actividades)) * (rng.random((n_regiones, n_actividades)) > 0.2)
    X[np.arange(n_regiones), np.arange(n_regiones) % n_actividades] += 1.0
    X[np.arange(n_actividades) % n_regiones, np.arange(n_actividades)] += 1.0
    if factores is not None:
        X = X * np.asarray(factores, dtype=np.float64)[:, None]
    filas = [(f"r{r}", f"p{i}", 2010, X[r, i]) for r in range(n_regiones) for i in range(n_actividades)]
    return ActivityPanel.desde_dataframe(pd.DataFrame(filas, columns=["region", "activity", "year", "value"]),
                                         activities=[f"p{i}" for i in range(n_actividades)])


class TestPropiedadesRca:
    """Identidades de la RCA sobre paneles aleatorios"""

    @pytest.mark.parametrize("seed", range(5))
    def test_media_ponderada_por_intensidad(self, seed):
        """Σ_r (X_r,* / X_*,*) · RCA_r,i = 1 para cada actividad"""
        panel = _panel_aleatorio(seed)
        X = panel.matriz(2010)
        pesos = X.sum(axis=1) / X.sum()

        np.testing.assert_allclose(pesos @ rca(panel, Baseline("internal"), 2010).valores, 1.0, atol=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_escalar_una_region(self, seed):
        """Multiplicar una región por una potencia de 2 deja su fila de RCA idéntica (línea base externa)"""
        cuotas = dict(zip([(f"p{i}", 2010) for i in range(6)], np.random.default_rng(100 + seed).uniform(0.05, 0.5, 6)))
        baseline = Baseline("external", cuotas)
        factores = np.ones(8)
        factores[seed] = 8.0
        original = rca(_panel_aleatorio(seed), baseline, 2010).valores
        escalada = rca(_panel_aleatorio(seed, factores=factores), baseline, 2010).valores

        np.testing.assert_array_equal(escalada, original)


class TestBinarize:
    """Pruebas de la binarización con umbral estricto"""

    def _matriz(self, valores) -> MatrizRCA:
        valores = np.asarray(valores, dtype=np.float64)
        return MatrizRCA(regions=tuple(f"r{i}" for i in range(valores.shape[0])),
                         activities=tuple(f"a{j}" for j in range(valores.shape[1])), year=2010, valores=valores)

    def test_umbral_estricto(self):
        """RCA = 1 exacto no cuenta como especialización"""
        M = binarize(self._matriz([[1.0, 1.0000001]]))

        np.testing.assert_array_equal(M.entries, [[0, 1]])

    def test_caso_conocido(self):
        M = binarize(self._matriz([[1.5, 0.0], [0.75, 1.5]]))

        np.testing.assert_array_equal(M.entries, [[1, 0], [0, 1]])

    def test_fila_indefinida(self):
        """Una fila indefinida queda en ceros y marcada sin datos"""
        M = binarize(self._matriz([[np.nan, np.nan], [2.0, 0.5]]))

        np.testing.assert_array_equal(M.entries, [[0, 0], [1, 0]])
        assert M.sin_datos == frozenset({"r0"})


class TestLoadExternalShares:

    def test_cuota_fuera_de_rango(self, escribir_csv):
        ruta = escribir_csv("shares.csv", "activity,year,share\np1,2010,0.4\np2,2010,1.5\n")
        with pytest.raises(DatosInvalidosExcepcion) as e:
            load_external_shares(ruta)
        assert e.value.codigo == "cuota_fuera_de_rango"
        assert e.value.linea == 3

    def test_lectura(self, escribir_csv):
        ruta = escribir_csv("shares.csv", "activity,year,share\np1,2010,0.4\np2,2010,1\n")
        baseline = load_external_shares(ruta)

        assert baseline.mode == "external"
        assert baseline.external_shares[("p2", 2010)] == 1.0
