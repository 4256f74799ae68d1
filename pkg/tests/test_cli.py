import json

import pandas as pd
import pytest
from click.testing import CliRunner

from complejidad_regional.main import cli
from complejidad_regional.seedwork.infraestructura.manifiesto import leer_manifiesto


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def _salidas(ruta_manifiesto):
    return [r for r in leer_manifiesto(ruta_manifiesto) if r["tipo"] == "salida"]


class TestCodigosDeSalida:
    """Pruebas de los códigos de salida de la CLI"""

    def test_configuracion_invalida(self, runner, tmp_path):
        resultado = runner.invoke(cli, ["--output-dir", str(tmp_path), "--set", "regress.horizons=[2, 5]", "regress"])

        assert resultado.exit_code == 2
        assert "regress.horizons" in resultado.stderr

    def test_set_mal_formado(self, runner, tmp_path):
        resultado = runner.invoke(cli, ["--output-dir", str(tmp_path), "--set", "seed", "ingest"])

        assert resultado.exit_code == 2

    def test_datos_invalidos_con_linea(self, runner, escribir_csv, tmp_path):
        ruta = escribir_csv("intensity.csv", "region,activity,year,value\nA,p1,2010,2\nA,p2,2010,-3\n")
        resultado = runner.invoke(cli, ["--output-dir", str(tmp_path / "out"),
                                        "--set", f"ingest.industry_intensity={ruta}", "ingest"])

        assert resultado.exit_code == 3
        assert "línea 3" in resultado.stderr

    def test_falla_numerica(self, runner, escribir_csv, tmp_path):
        """Con RCA diagonal cada región queda en su propia componente y no hay segundo autovector"""
        ruta = escribir_csv("intensity.csv", "region,activity,year,value\nA,p1,2010,10\nB,p2,2010,10\n")
        argumentos = ["--output-dir", str(tmp_path / "out"), "--set", f"ingest.industry_intensity={ruta}"]

        assert runner.invoke(cli, argumentos + ["ingest"]).exit_code == 0
        resultado = runner.invoke(cli, argumentos + ["complexity"])
        assert resultado.exit_code == 4

    def test_manifiesto_de_ingesta(self, runner, escribir_csv, tmp_path):
        ruta = escribir_csv("intensity.csv", "region,activity,year,value\nA,p1,2010,2\nB,p2,2010,3\n")
        salida = tmp_path / "out"
        resultado = runner.invoke(cli, ["--output-dir", str(salida), "--set", f"ingest.industry_intensity={ruta}",
                                        "ingest"])

        assert resultado.exit_code == 0
        registros = leer_manifiesto(salida / "manifest-ingest.jsonl")
        assert [r["tipo"] for r in registros[:2]] == ["version", "config"]
        assert _salidas(salida / "manifest-ingest.jsonl")[0]["ruta"] == "ingest/intensity_industry.csv"
        assert pd.read_csv(salida / "ingest" / "intensity_industry.csv")["value"].tolist() == [2.0, 3.0]


@pytest.mark.lento
class TestPuntaAPunta:
    """synth seguido de all sobre el fixture generado"""

    def _correr(self, runner, destino):
        assert runner.invoke(cli, ["--output-dir", str(destino), "--set", "synth.n_activities=25", "synth"]
                             ).exit_code == 0
        resultado = runner.invoke(cli, ["--config", str(destino / "synth" / "config.yaml"), "all"])
        assert resultado.exit_code == 0, resultado.stderr
        return destino / "synth" / "resultados"

    def test_todas_las_etapas(self, runner, tmp_path):
        resultados = self._correr(runner, tmp_path)

        for archivo in ("ingest/gdppc.csv", "complexity/indicators.csv", "relatedness/closeness.csv",
                        "spatial/spatial_series.csv", "regress/coefficients.csv", "regress/diagnostics.csv"):
            assert (resultados / archivo).is_file(), archivo
        coeficientes = pd.read_csv(resultados / "regress" / "coefficients.csv")
        assert set(coeficientes["horizon"]) == {2, 3, 4}
        assert not coeficientes["term"].str.startswith("year_").any()
        diagnosticos = pd.read_csv(resultados / "regress" / "diagnostics.csv")
        gmm = diagnosticos.loc[diagnosticos["estimator"].str.startswith("system-GMM")]
        assert (gmm["n_instruments"] < gmm["n_regions"]).all()

    def test_salidas_deterministas(self, runner, tmp_path):
        a = self._correr(runner, tmp_path / "a")
        b = self._correr(runner, tmp_path / "b")

        salidas_a, salidas_b = _salidas(a / "manifest-all.jsonl"), _salidas(b / "manifest-all.jsonl")
        assert json.dumps(salidas_a, sort_keys=True) == json.dumps(salidas_b, sort_keys=True)
