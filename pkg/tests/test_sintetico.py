import numpy as np
import pytest
import yaml
from scipy.sparse.csgraph import connected_components

from complejidad_regional.config import SeccionSintetico
from complejidad_regional.modulos.sintetico.dominio.fixtures import configuracion_fixture, gen_fixture_set
from complejidad_regional.modulos.sintetico.dominio.servicios import (gen_dynamic_panel, gen_region_graph,
                                                                      gen_specialization, grafo_para)
from complejidad_regional.modulos.sintetico.infraestructura.repositorios import write_fixture_set
from complejidad_regional.seedwork.dominio.excepciones import DatosInvalidosExcepcion


class TestGenSpecialization:
    """Pruebas de las matrices de especialización sintéticas"""

    def test_anidada(self, anidada_4x4):
        np.testing.assert_array_equal(anidada_4x4.entries, [[1, 1, 1, 1], [1, 1, 1, 0], [1, 1, 0, 0], [1, 0, 0, 0]])
        assert anidada_4x4.regions == ("r000", "r001", "r002", "r003")

    def test_anidada_diversidades_distintas(self):
        np.testing.assert_array_equal(gen_specialization(6, 8, "nested").diversity, [8, 7, 6, 4, 3, 2])

    def test_anidada_con_mas_regiones_que_actividades(self):
        """Con más regiones que actividades el perfil no crece pero repite diversidades"""
        d = gen_specialization(10, 4, "nested").diversity

        assert np.all(np.diff(d) <= 0)
        assert d.min() >= 1
        assert len(np.unique(d)) == 4

    def test_bloques_separados(self):
        M = gen_specialization(6, 6, "block", blocks=2)
        E = M.entries.astype(np.float64)
        bipartito = np.block([[np.zeros((6, 6)), E], [E.T, np.zeros((6, 6))]])

        n_componentes, _ = connected_components(bipartito, directed=False)
        assert n_componentes == 2

    def test_aleatoria_determinista(self):
        a = gen_specialization(20, 15, "random", seed=5, density=0.3)
        b = gen_specialization(20, 15, "random", seed=5, density=0.3)
        c = gen_specialization(20, 15, "random", seed=6, density=0.3)

        np.testing.assert_array_equal(a.entries, b.entries)
        assert not np.array_equal(a.entries, c.entries)

    def test_dimensiones_invalidas(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            gen_specialization(2, 5)
        assert e.value.codigo == "dimensiones_invalidas"


class TestGenDynamicPanel:
    """Pruebas del panel dinámico sintético"""

    def test_sin_ruido_estacionario(self):
        """Con σ_ε = 0 y β = 0, y queda en su media estacionaria μ / (1 − ρ)"""
        series = gen_dynamic_panel(5, 6, rho=0.5, beta=0.0, sigma_eps=0.0, seed=2)
        y = series["y"]

        for region in y.regiones:
            valores = [y.get(region, a) for a in y.anios]
            np.testing.assert_allclose(valores, valores[0], rtol=1e-12, atol=1e-12)

    def test_misma_semilla(self):
        a = gen_dynamic_panel(10, 5, rho=0.4, beta=1.0, seed=7)
        b = gen_dynamic_panel(10, 5, rho=0.4, beta=1.0, seed=7)

        assert dict(a["y"].values) == dict(b["y"].values)
        assert dict(a["x"].values) == dict(b["x"].values)

    def test_dimensiones(self):
        series = gen_dynamic_panel(4, 3, rho=0.5, beta=1.0, first_year=2010, invalid_instrument=True)

        assert series["y"].anios == (2010, 2011, 2012)
        assert len(series["x"]) == 12
        assert set(series) == {"y", "x", "z"}

    def test_rho_invalido(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            gen_dynamic_panel(4, 3, rho=1.0, beta=1.0)
        assert e.value.codigo == "rho_invalido"


class TestGenRegionGraph:
    """Pruebas de los grafos de adyacencia sintéticos"""

    def test_ciclo(self):
        grafo = gen_region_graph("cycle", n=4)

        np.testing.assert_array_equal(grafo.grados(), [2, 2, 2, 2])

    def test_grilla(self):
        grafo = gen_region_graph("grid", a=2, b=2)

        assert len(grafo.regions) == 4
        assert grafo.n_aristas == 4

    def test_dos_cliques(self):
        grafo = gen_region_graph("two_cliques", n=3)
        primera = set(grafo.regions[:3])

        assert len(grafo.regions) == 6
        assert grafo.n_aristas == 6
        assert all((a in primera) == (b in primera) for a, b in grafo.aristas())

    def test_nombres_sobrantes_aislados(self):
        grafo = grafo_para("two_cliques", ["A", "B", "C", "D", "E"])

        assert grafo.grados()[grafo.indice["E"]] == 0

    def test_ciclo_demasiado_corto(self):
        with pytest.raises(DatosInvalidosExcepcion):
            gen_region_graph("cycle", n=2)


class TestFixture:
    """Pruebas del conjunto de insumos sintéticos"""

    @pytest.fixture
    def cfg(self):
        return SeccionSintetico(n_regions=8, n_activities=6, n_years=5, sub_regions_per_region=2)

    def test_contenido(self, cfg):
        fixture = gen_fixture_set(cfg, seed=1)

        assert len(fixture.crosswalk) == 16
        assert set(fixture.gdp["year"]) == set(range(2003, 2008))
        assert (fixture.intensity_industry["value"] > 0).all()
        assert np.allclose(fixture.external_shares.groupby("year")["share"].sum(), 1.0)
        assert len(fixture.grafo.regions) == 8

    def test_escritura_determinista(self, cfg, tmp_path):
        configuracion = configuracion_fixture(cfg)
        a = write_fixture_set(gen_fixture_set(cfg, seed=3), configuracion, tmp_path / "a")
        b = write_fixture_set(gen_fixture_set(cfg, seed=3), configuracion, tmp_path / "b")

        assert [p.name for p in a] == [p.name for p in b]
        for ruta_a, ruta_b in zip(a, b):
            assert ruta_a.read_bytes() == ruta_b.read_bytes()

    def test_configuracion(self, cfg, tmp_path):
        write_fixture_set(gen_fixture_set(cfg, seed=3), configuracion_fixture(cfg), tmp_path)
        with open(tmp_path / "config.yaml", encoding="utf-8") as f:
            datos = yaml.safe_load(f)

        assert datos["ingest"]["crosswalk"] == "crosswalk.csv"
        assert datos["synth"]["n_regions"] == 8
        assert (tmp_path / "adjacency.csv").is_file()
