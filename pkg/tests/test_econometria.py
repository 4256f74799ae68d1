import math

import numpy as np
import pandas as pd
import pytest

from complejidad_regional.modulos.datos.dominio.entidades import IndicatorSeries
from complejidad_regional.modulos.econometria.dominio.diagnosticos import etiqueta_vif, vif
from complejidad_regional.modulos.econometria.dominio.efectos_fijos import within_fe
from complejidad_regional.modulos.econometria.dominio.especificaciones import (default_specs, horizon_effects,
                                                                               stars)
from complejidad_regional.modulos.econometria.dominio.gmm import (InternosGMM, arellano_bond_test,
                                                                  construir_sistema, sargan_test, system_gmm)
from complejidad_regional.modulos.econometria.dominio.objetos_valor import (DENTRO_EF, GMM_DOS_PASOS,
                                                                            GMM_UN_PASO, OpcionesGMM,
                                                                            PanelModelResult, PanelSpec)
from complejidad_regional.modulos.econometria.dominio.panel import build_panel, growth_rate
from complejidad_regional.modulos.econometria.dominio.pruebas import p_valor_normal
from complejidad_regional.modulos.econometria.infraestructura.repositorios import (tabla_coeficientes,
                                                                                   tabla_diagnosticos)
from complejidad_regional.modulos.sintetico.dominio.servicios import gen_dynamic_panel
from complejidad_regional.seedwork.dominio.excepciones import DatosInvalidosExcepcion, FallaNumericaExcepcion

ESPEC_DINAMICA = PanelSpec(dependent="y", regressors=("x",), horizon=1, id="mc")


def _panel_dinamico(seed: int, n: int = 500, t: int = 8, **kwargs):
    series = gen_dynamic_panel(n, t, rho=0.5, beta=1.0, seed=seed, **kwargs)
    adicionales = ("z",) if "z" in series else ()
    return build_panel(series, ESPEC_DINAMICA, lag_mode="shift1", adicionales=adicionales)


def _panel_estatico(ruido: float, seed: int = 0, x_por_region: bool = False):
    """y = 2x + μ_r + ν_t + ruido en 50 regiones y 6 años."""
    rng = np.random.default_rng(seed)
    regiones = [f"r{i:02d}" for i in range(50)]
    anios = list(range(2001, 2007))
    mu, nu = rng.normal(size=50), rng.normal(size=6)
    x, y = {}, {}
    for i, r in enumerate(regiones):
        for k, a in enumerate(anios):
            x[(r, a)] = float(mu[i] if x_por_region else rng.normal())
            y[(r, a)] = 2.0 * x[(r, a)] + mu[i] + nu[k] + ruido * rng.normal()
    spec = PanelSpec(dependent="y", regressors=("x",), include_lagged_dependent=False, horizon=1, id="fe")
    return build_panel({"y": IndicatorSeries("y", y), "x": IndicatorSeries("x", x)}, spec)


class TestGrowthRate:
    """Pruebas de la tasa de crecimiento anualizada"""

    def test_duplicacion(self):
        """y se duplica en h = 3 → g = ln 2 / 3"""
        g = growth_rate(IndicatorSeries("gdppc", {("A", 2000): 1.0, ("A", 2003): 2.0}), 3)

        assert g.get("A", 2000) == pytest.approx(math.log(2) / 3, abs=1e-12)
        assert g.get("A", 2003) is None

    def test_constante(self):
        g = growth_rate(IndicatorSeries("gdppc", {("A", t): 5.0 for t in range(2000, 2005)}), 2)

        assert set(g.values.values()) == {0.0}
        assert len(g) == 3

    def test_exponencial(self):
        y = IndicatorSeries("gdppc", {("A", t): 100.0 * math.exp(0.03 * (t - 2000)) for t in range(2000, 2010)})
        g = growth_rate(y, 4)

        for valor in g.values.values():
            assert valor == pytest.approx(0.03, abs=1e-12)

    def test_no_positivo(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            growth_rate(IndicatorSeries("gdppc", {("A", 2000): 1.0, ("B", 2000): 0.0}), 2)
        assert e.value.codigo == "valor_no_positivo"
        assert e.value.detalles["region"] == "B"

    def test_horizonte_invalido(self):
        with pytest.raises(DatosInvalidosExcepcion):
            growth_rate(IndicatorSeries("gdppc", {("A", 2000): 1.0}), 0)


class TestBuildPanel:
    """Pruebas de la construcción del panel con eliminación por lista"""

    @pytest.fixture
    def gdppc(self):
        rng = np.random.default_rng(1)
        return IndicatorSeries("gdppc", {(f"r{i:03d}", t): float(np.exp(rng.normal()))
                                         for i in range(100) for t in range(2001, 2011)})

    @pytest.mark.parametrize("h", [2, 3, 4])
    def test_panel_balanceado(self, gdppc, h):
        """N = 100, T = 10 → 100 × (10 − 2h) filas con rezago sin solapamiento"""
        series = {"gdppc": gdppc, "growth": growth_rate(gdppc, h)}
        panel = build_panel(series, PanelSpec(regressors=(), horizon=h, id="c1"))

        assert len(panel.tabla) == 100 * (10 - 2 * h)
        assert panel.paso_rezago == h

    def test_primer_anio_utilizable(self):
        y = IndicatorSeries("gdppc", {("A", t): 1.0 + 0.1 * (t - 2003) for t in range(2003, 2020)})
        panel = build_panel({"growth": growth_rate(y, 3)}, PanelSpec(horizon=3))

        assert panel.tabla["year"].min() == 2006
        assert panel.tabla["year"].max() == 2016

    def test_rezago_de_un_anio(self):
        y = IndicatorSeries("gdppc", {("A", t): 1.0 + 0.1 * (t - 2003) for t in range(2003, 2020)})
        g = growth_rate(y, 3)
        panel = build_panel({"growth": g}, PanelSpec(horizon=3), lag_mode="shift1")

        fila = panel.tabla.loc[panel.tabla["year"] == 2005].iloc[0]
        assert panel.tabla["year"].min() == 2004
        assert fila["lag_growth"] == g.get("A", 2004)

    def test_region_sin_eci(self, gdppc):
        """Una región sin ECI sale de las columnas con ECI y sigue en las demás"""
        series = {"gdppc": gdppc, "growth": growth_rate(gdppc, 2),
                  "eci": IndicatorSeries("eci", {(r, t): 0.1 for r, t in gdppc.values if r != "r000"})}
        con_eci = build_panel(series, PanelSpec(regressors=("log_gdppc", "eci"), horizon=2, id="c6"))
        sin_eci = build_panel(series, PanelSpec(regressors=("log_gdppc",), horizon=2, id="c2"))

        assert "r000" not in set(con_eci.tabla["region"])
        assert "r000" in set(sin_eci.tabla["region"])
        motivos = con_eci.eliminaciones.loc[con_eci.eliminaciones["region"] == "r000", "reason"]
        assert motivos.str.contains("missing eci").all()

    def test_logaritmo_derivado(self, gdppc):
        series = {"gdppc": gdppc, "growth": growth_rate(gdppc, 2)}
        panel = build_panel(series, PanelSpec(regressors=("log_gdppc",), horizon=2))

        fila = panel.tabla.iloc[0]
        assert fila["log_gdppc"] == pytest.approx(math.log(gdppc.get(fila["region"], int(fila["year"]))))

    def test_indicador_ausente(self, gdppc):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            build_panel({"growth": growth_rate(gdppc, 2)}, PanelSpec(regressors=("indeci",), horizon=2))
        assert e.value.codigo == "indicador_ausente"

    def test_panel_vacio(self, gdppc):
        series = {"growth": growth_rate(gdppc, 2), "eci": IndicatorSeries("eci", {("zz", 2001): 1.0})}
        with pytest.raises(DatosInvalidosExcepcion) as e:
            build_panel(series, PanelSpec(regressors=("eci",), horizon=2))
        assert e.value.codigo == "panel_vacio"
        assert e.value.detalles["causas"]["missing eci"] > 0
        assert isinstance(e.value.detalles["eliminaciones"], pd.DataFrame)


class TestWithinFe:
    """Pruebas del estimador intra-grupos de dos vías"""

    def test_recupera_coeficiente(self):
        resultado = within_fe(_panel_estatico(ruido=0.1))

        assert resultado.estimator == DENTRO_EF
        assert abs(resultado.estimate("x") - 2.0) < 3 * resultado.std_error("x")
        assert resultado.n_regions == 50

    def test_sin_ruido_exacto(self):
        resultado = within_fe(_panel_estatico(ruido=0.0))

        assert resultado.estimate("x") == pytest.approx(2.0, abs=1e-8)

    def test_regresor_absorbido(self):
        """Un regresor constante dentro de cada región queda absorbido por los efectos fijos"""
        with pytest.raises(FallaNumericaExcepcion) as e:
            within_fe(_panel_estatico(ruido=0.1, x_por_region=True))
        assert e.value.codigo == "rank_deficient"
        assert e.value.detalles["columnas"] == ["x"]

    def test_invariante_a_desplazamientos(self):
        panel = _panel_estatico(ruido=0.1)
        desplazado = type(panel)(spec=panel.spec, tabla=panel.tabla.assign(x=panel.tabla["x"] + 7.0),
                                 eliminaciones=panel.eliminaciones, paso_rezago=panel.paso_rezago)

        assert within_fe(desplazado).estimate("x") == pytest.approx(within_fe(panel).estimate("x"), abs=1e-10)


class TestSystemGmm:
    """Pruebas del GMM de sistema sobre paneles dinámicos sintéticos"""

    def test_resultado(self):
        resultado = system_gmm(_panel_dinamico(seed=0))

        assert resultado.estimator == GMM_DOS_PASOS
        assert resultado.n_regions == 500
        assert 0 < resultado.n_instruments < 500
        assert resultado.sargan[1] == resultado.n_instruments - len(resultado.coefficients)
        assert resultado.windmeijer is False
        assert abs(resultado.estimate("lag_y") - 0.5) < 0.15

    def test_un_paso(self):
        resultado = system_gmm(_panel_dinamico(seed=1), OpcionesGMM(two_step=False))

        assert resultado.estimator == GMM_UN_PASO
        assert resultado.std_error("x") > 0

    @pytest.mark.lento
    def test_monte_carlo(self):
        """ρ = 0.5, β = 1, N = 500, T = 8: medias sobre 50 semillas dentro de ±0.05"""
        resultados = [system_gmm(_panel_dinamico(seed)) for seed in range(50)]

        assert 0.45 <= np.mean([r.estimate("lag_y") for r in resultados]) <= 0.55
        assert 0.95 <= np.mean([r.estimate("x") for r in resultados]) <= 1.05

    @pytest.mark.lento
    def test_sesgo_de_nickell(self):
        """Efectos fijos subestiman ρ en paneles cortos; el GMM de sistema no (medias sobre 50 semillas)"""
        paneles = [_panel_dinamico(seed) for seed in range(50)]
        rho_fe = np.mean([within_fe(p).estimate("lag_y") for p in paneles])
        rho_gmm = np.mean([system_gmm(p).estimate("lag_y") for p in paneles])

        assert rho_fe < rho_gmm - 0.02
        assert abs(rho_gmm - 0.5) < abs(rho_fe - 0.5)

    def test_periodos_insuficientes(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            system_gmm(_panel_dinamico(seed=0, n=50, t=3))
        assert e.value.codigo == "periodos_insuficientes"

    def test_proliferacion_de_instrumentos(self):
        with pytest.raises(FallaNumericaExcepcion) as e:
            system_gmm(_panel_dinamico(seed=0, n=10, t=8), OpcionesGMM(collapse=False))
        assert e.value.codigo == "instrument_proliferation"

    def test_sin_rezago(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            system_gmm(_panel_estatico(ruido=0.1))
        assert e.value.codigo == "sin_rezago"


class TestSargan:
    """Pruebas de la J de Hansen"""

    def test_no_sobreidentificado(self):
        internos = InternosGMM(X=np.ones((4, 2)), y=np.ones(4), Z=np.ones((4, 2)), ecuacion=np.zeros(4, int),
                               individuo=np.zeros(4, int), tau=np.arange(4), cluster=np.zeros(4, int),
                               nombres=["a", "b"], W1=np.eye(2), beta1=np.zeros(2), two_step=False)
        with pytest.raises(FallaNumericaExcepcion) as e:
            sargan_test(internos)
        assert e.value.codigo == "not_overidentified"

    @pytest.mark.lento
    def test_calibracion(self):
        """Con instrumentos válidos el rechazo al 5 % está entre 2 % y 9 %"""
        rechazos = [system_gmm(_panel_dinamico(seed)).sargan[2] < 0.05 for seed in range(200)]

        assert 0.02 <= np.mean(rechazos) <= 0.09

    @pytest.mark.lento
    def test_instrumento_invalido(self):
        """Un instrumento correlacionado con ε se rechaza en la mayoría de las muestras"""
        opciones = OpcionesGMM(extra_instruments=("z",))
        rechazos = [system_gmm(_panel_dinamico(seed, invalid_instrument=True), opciones).sargan[2] < 0.05
                    for seed in range(200)]

        assert np.mean(rechazos) > 0.5


class TestArellanoBond:
    """Pruebas de autocorrelación en los residuos en diferencias"""

    def test_ar1_negativa(self):
        """Con ε iid las diferencias tienen autocorrelación de orden 1 negativa"""
        z, p = system_gmm(_panel_dinamico(seed=5)).ar1_test

        assert z < -1.96
        assert p < 0.05

    def test_ar2_periodos_insuficientes(self):
        internos = construir_sistema(_panel_dinamico(seed=0, n=50, t=4), OpcionesGMM(two_step=False))
        with pytest.raises(DatosInvalidosExcepcion) as e:
            arellano_bond_test(internos, 2)
        assert e.value.codigo == "periodos_insuficientes"
        assert system_gmm(_panel_dinamico(seed=0, n=50, t=4)).ar2_test is None

    @pytest.mark.lento
    def test_ar2_calibrada(self):
        rechazos = [system_gmm(_panel_dinamico(seed)).ar2_test[1] < 0.05 for seed in range(200)]

        assert 0.02 <= np.mean(rechazos) <= 0.09

    @pytest.mark.lento
    def test_ar2_detecta_errores_autocorrelacionados(self):
        rechazos = [system_gmm(_panel_dinamico(seed, ar_eps=0.5)).ar2_test[1] < 0.05 for seed in range(200)]

        assert np.mean(rechazos) > 0.5


class TestVif:
    """Pruebas del factor de inflación de varianza"""

    def test_ortogonales(self):
        tabla = pd.DataFrame({"a": [1, -1, 1, -1], "b": [1, 1, -1, -1], "c": [1, -1, -1, 1]}, dtype=float)

        for valor in vif(tabla, ["a", "b", "c"]).values():
            assert valor == pytest.approx(1.0, abs=1e-10)

    def test_casi_colineales(self):
        rng = np.random.default_rng(2)
        x1 = rng.normal(size=200)
        tabla = pd.DataFrame({"x1": x1, "x2": x1 + 1e-3 * rng.normal(size=200)})
        valores = vif(tabla, ["x1", "x2"])

        assert valores["x1"] > 1e4
        assert etiqueta_vif(valores["x1"]) == "high"

    def test_colineal_exacto(self):
        x = np.arange(10, dtype=float)
        valores = vif(pd.DataFrame({"a": x, "b": 2 * x + 1}), ["a", "b"])

        assert math.isinf(valores["a"])
        assert etiqueta_vif(valores["a"]) == "collinear"

    def test_un_regresor(self):
        with pytest.raises(DatosInvalidosExcepcion) as e:
            vif(pd.DataFrame({"a": [1.0, 2.0]}), ["a"])
        assert e.value.codigo == "pocos_regresores"


class TestEspecificaciones:
    """Pruebas de estrellas, columnas por defecto y efectos por horizonte"""

    @pytest.mark.parametrize("p, esperado", [(0.2, ""), (0.1, ""), (0.099, "*"), (0.049, "**"),
                                             (0.009, "***"), (None, ""), (float("nan"), "")])
    def test_stars(self, p, esperado):
        assert stars(p) == esperado

    def test_ocho_columnas(self):
        specs = default_specs(3)

        assert [s.id for s in specs] == [f"c{k}" for k in range(1, 9)]
        assert specs[0].regressors == ()
        assert specs[4].regressors == ("log_gdppc", "log_population", "indeci", "indeci_n")
        assert all(s.include_lagged_dependent and s.horizon == 3 for s in specs)

    def test_filtra_indicadores_ausentes(self):
        specs = default_specs(2, {"log_gdppc", "log_population", "indeci", "indeci_n"})

        assert [s.id for s in specs] == ["c1", "c2", "c3", "c4", "c5"]

    def test_horizon_effects(self):
        resultados = {h: PanelModelResult(estimator=DENTRO_EF, coefficients={"indeci": (0.1 * h, 0.01)},
                                          n_obs=100, n_regions=10) for h in (2, 3, 4)}
        tabla = horizon_effects(resultados, ["indeci", "eci"])

        assert list(tabla["horizon"]) == [2, 3, 4]
        fila = tabla.iloc[1]
        assert fila["estimate"] == pytest.approx(0.3)
        assert fila["ci_high"] - fila["estimate"] == pytest.approx(1.959964 * 0.01, rel=1e-6)

    def test_p_valor_con_error_nulo(self):
        assert p_valor_normal(0.0, 0.0) == 1.0
        assert p_valor_normal(1.0, 0.0) == 0.0
        assert p_valor_normal(1.96, 1.0) == pytest.approx(0.05, abs=1e-3)


class TestTablasDeResultados:

    @pytest.fixture
    def estimacion(self):
        resultado = PanelModelResult(
            estimator=GMM_DOS_PASOS, n_obs=50, n_regions=20, n_instruments=8,
            coefficients={"lag_growth": (0.5, 0.1), "year_2005": (0.2, 0.1), "const": (1.0, 0.5)},
            p_values={"lag_growth": 0.00001, "year_2005": 0.04, "const": 0.04},
            sargan=(3.2, 5, 0.67), ar1_test=(-3.0, 0.003), ar2_test=None)
        return [(PanelSpec(id="c1", horizon=3), resultado)]

    def test_coeficientes_sin_dummies(self, estimacion):
        tabla = tabla_coeficientes(estimacion)

        assert list(tabla["term"]) == ["lag_growth", "const"]
        assert list(tabla["stars"]) == ["***", "**"]

    def test_diagnosticos(self, estimacion):
        fila = tabla_diagnosticos(estimacion).iloc[0]

        assert fila["windmeijer"] == "false"
        assert fila["sargan_dof"] == 5
        assert np.isnan(fila["ar2_z"])
