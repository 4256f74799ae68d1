import pytest

from complejidad_regional.modulos.datos.dominio.entidades import IndicatorSeries
from complejidad_regional.modulos.ingesta.dominio.objetos_valor import Crosswalk, PriceIndex
from complejidad_regional.modulos.ingesta.dominio.servicios import aggregate_indicator, deflate, per_capita
from complejidad_regional.modulos.ingesta.infraestructura.repositorios import (load_crosswalk, load_intensity,
                                                                              load_price_index)
from complejidad_regional.seedwork.dominio.excepciones import DatosInvalidosExcepcion


class TestLoadIntensity:
    """Pruebas de la agregación de intensidades por la correspondencia"""

    @pytest.fixture
    def intensidades(self, escribir_csv):
        return escribir_csv("intensity.csv",
                            "region,activity,year,value\n"
                            "m1,p1,2010,5\n"
                            "m2,p1,2010,7\n"
                            "m2,p2,2010,1.5\n")

    def test_suma_subregiones(self, intensidades):
        """(m1,p1,5) y (m2,p1,7) con m1, m2 → R dan 12 en (R, p1)"""
        panel = load_intensity(intensidades, Crosswalk({"m1": "R", "m2": "R"}))

        assert panel.regions == ("R",)
        assert panel.valor("R", "p1", 2010) == 12.0
        assert panel.valor("R", "p2", 2010) == 1.5

    def test_sin_correspondencia_identidad(self, intensidades):
        panel = load_intensity(intensidades)

        assert panel.regions == ("m1", "m2")
        assert panel.valor("m2", "p1", 2010) == 7.0

    def test_conserva_masa(self, intensidades):
        """La masa por (actividad, año) no cambia con la agregación"""
        agregado = load_intensity(intensidades, Crosswalk({"m1": "R", "m2": "S"}))
        crudo = load_intensity(intensidades)

        assert agregado.totales_por_actividad().equals(crudo.totales_por_actividad())

    def test_valor_negativo_con_linea(self, escribir_csv):
        ruta = escribir_csv("intensity.csv", "region,activity,year,value\nm1,p1,2010,2\nm1,p2,2010,-3\n")
        with pytest.raises(DatosInvalidosExcepcion) as e:
            load_intensity(ruta)
        assert e.value.codigo == "valor_negativo"
        assert e.value.linea == 3

    def test_subregion_desconocida(self, intensidades):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            load_intensity(intensidades, Crosswalk({"m1": "R"}))
        assert e.value.codigo == "sub_region_desconocida"
        assert e.value.detalles["sub_regiones"] == ["m2"]

    def test_anio_mal_formado(self, escribir_csv):
        ruta = escribir_csv("intensity.csv", "region,activity,year,value\nm1,p1,10,2\n")
        with pytest.raises(DatosInvalidosExcepcion) as e:
            load_intensity(ruta)
        assert e.value.codigo == "fila_mal_formada"
        assert e.value.linea == 2


class TestLoadCrosswalk:

    def test_ambigua(self, escribir_csv):
        """Una sub-región asignada a dos regiones es un error que la nombra"""
        ruta = escribir_csv("cw.csv", "sub_region,region\nm1,R\nm1,S\nm2,R\n")
        with pytest.raises(DatosInvalidosExcepcion) as e:
            load_crosswalk(ruta)
        assert e.value.codigo == "correspondencia_ambigua"
        assert e.value.detalles["sub_regiones"] == ["m1"]

    def test_filas_repetidas_se_toleran(self, escribir_csv):
        ruta = escribir_csv("cw.csv", "sub_region,region\nm1,R\nm1,R\nm2,R\n")
        crosswalk = load_crosswalk(ruta)

        assert crosswalk.miembros() == {"R": ["m1", "m2"]}


class TestDeflate:
    """Pruebas del deflactado del PIB nominal"""

    @pytest.fixture
    def nominal(self):
        return IndicatorSeries("gdp", {("A", 2007): 100.0, ("A", 2010): 100.0})

    def test_formula(self, nominal):
        """Nominal 100 con índice(t)=2 e índice(base)=1 → 50"""
        real = deflate(nominal, {2007: 2.0, 2010: 1.0}, base_year=2010)

        assert real.get("A", 2007) == 50.0

    def test_anio_base_identidad(self, nominal):
        real = deflate(nominal, PriceIndex({2007: 2.0, 2010: 1.0}), base_year=2010)

        assert real.get("A", 2010) == 100.0

    def test_indice_ausente(self, nominal):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            deflate(nominal, {2010: 1.0}, base_year=2010)
        assert e.value.codigo == "indice_ausente"
        assert e.value.detalles["anios"] == [2007]

    def test_indice_no_positivo(self, escribir_csv):
        ruta = escribir_csv("pi.csv", "year,index\n2009,1\n2010,0\n")
        with pytest.raises(DatosInvalidosExcepcion) as e:
            load_price_index(ruta)
        assert e.value.codigo == "indice_no_positivo"
        assert e.value.linea == 3


class TestIndicadoresAgregados:

    def test_suma_completa(self):
        pib = IndicatorSeries("gdp", {("m1", 2010): 3.0, ("m2", 2010): 4.0})
        agregado = aggregate_indicator(pib, Crosswalk({"m1": "R", "m2": "R"}))

        assert agregado.get("R", 2010) == 7.0

    def test_subregion_faltante_deja_sin_dato(self):
        """Si falta una sub-región en un año, la región queda sin dato ese año"""
        pib = IndicatorSeries("gdp", {("m1", 2010): 3.0, ("m2", 2010): 4.0, ("m1", 2011): 5.0})
        agregado = aggregate_indicator(pib, Crosswalk({"m1": "R", "m2": "R"}))

        assert agregado.get("R", 2011) is None

    def test_per_capita(self):
        total = IndicatorSeries("gdp", {("A", 2010): 10.0, ("B", 2010): 10.0, ("C", 2010): 4.0})
        poblacion = IndicatorSeries("population", {("A", 2010): 5.0, ("B", 2010): 0.0})
        gdppc = per_capita(total, poblacion)

        assert gdppc.name == "gdppc"
        assert dict(gdppc.values) == {("A", 2010): 2.0}
