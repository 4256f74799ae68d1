import logging
from typing import Dict, Tuple

from ....seedwork.aplicacion.comandos import ComandoHandler, ejecutar_comando
from ....seedwork.aplicacion.dto import ResultadoComandoDTO
from ....seedwork.infraestructura.csv import escribir_csv
from ....seedwork.infraestructura.paralelo import mapear_ordenado
from ...complejidad.dominio.objetos_valor import NOMBRES_INDICADORES
from ...complejidad.infraestructura.repositorios import load_activity_scores, load_pci
from ...datos.dominio.entidades import IndicatorSeries
from ...datos.infraestructura.repositorios import load_indicator_table
from ...ingesta.infraestructura.repositorios import load_intensity
from ...rca.dominio.objetos_valor import Baseline
from ...rca.dominio.servicios import binarize, rca
from ...rca.infraestructura.repositorios import load_external_shares
from ...reportes.dominio.servicios import s_curve
from ..dominio.servicios import closeness_to_complexity, density, proximity
from ..infraestructura.repositorios import tabla_cercania, tabla_densidad, tabla_proximidad, write_tables
from .comandos import CalcularRelacionCommand

logger = logging.getLogger(__name__)


class CalcularRelacionHandler(ComandoHandler):
    def _complejidad_actividades(self, settings, entradas) -> Dict[Tuple[str, int], float]:
        cfg, cpx = settings.relatedness, settings.complexity
        fuente = cfg.activity_complexity
        if fuente == "auto":
            fuente = "external" if cfg.mode == "export" and cpx.export_method == "pci" else "computed"
        if fuente == "external":
            entradas.append(cpx.pci)
            return load_pci(cpx.pci)
        ruta = settings.directorio("complexity") / "activities.csv"
        entradas.append(ruta)
        return load_activity_scores(ruta, NOMBRES_INDICADORES[cfg.mode][1])

    def handle(self, comando: CalcularRelacionCommand) -> ResultadoComandoDTO:
        settings = comando.settings
        cfg, cpx = settings.relatedness, settings.complexity
        destino = settings.directorio("relatedness")
        entradas = []

        ruta = settings.directorio("ingest") / f"intensity_{cfg.mode}.csv"
        panel = load_intensity(ruta)
        entradas.append(ruta)
        tipo_base = cpx.industry_baseline if cfg.mode == "industry" else cpx.export_baseline
        if tipo_base == "external":
            baseline = load_external_shares(cpx.external_shares)
            entradas.append(cpx.external_shares)
        else:
            baseline = Baseline("internal")
        complejidad = self._complejidad_actividades(settings, entradas)
        years = sorted(cfg.years) if cfg.years else list(panel.years)

        def por_anio(year: int):
            M = binarize(rca(panel, baseline, year), cpx.threshold)
            phi = proximity(M)
            omega = density(M, phi)
            del_anio = {a: v for (a, t), v in complejidad.items() if t == year}
            con_dato = [j for j, a in enumerate(M.activities) if a in del_anio]
            if len(con_dato) < len(M.activities):
                logger.info(f"Cercanía {year}: {len(M.activities) - len(con_dato)} actividades sin complejidad "
                            f"se excluyen de la correlación")
            M_sub = M.subconjunto(range(len(M.regions)), con_dato)
            cercania = closeness_to_complexity(M_sub, omega.columnas(M_sub.activities), del_anio, cfg.min_candidates)
            return phi, omega, cercania

        resultados = mapear_ordenado(por_anio, years, settings.workers)
        proximidades = [tabla_proximidad(phi) for phi, _, _ in resultados]
        cercanias = [tabla_cercania(c, year) for (_, _, c), year in zip(resultados, years)]
        salidas = [
            write_tables(proximidades, destino / "proximity.csv", ("year", "activity_a", "activity_b")),
            write_tables(cercanias, destino / "closeness.csv", ("year", "region")),
        ]
        if cfg.write_density:
            salidas.append(write_tables([tabla_densidad(o) for _, o, _ in resultados], destino / "density.csv",
                                        ("year", "region", "activity")))

        ruta_ind = settings.directorio("complexity") / "indicators.csv"
        indicador = NOMBRES_INDICADORES[cfg.mode][0]
        indicadores = load_indicator_table(ruta_ind)
        entradas.append(ruta_ind)
        valores_cercania = {(r, year): v for (_, _, c), year in zip(resultados, years) for r, v in c.valores.items()}
        if indicador in indicadores:
            curva = s_curve(indicadores[indicador], IndicatorSeries("closeness", valores_cercania))
            salidas.append(escribir_csv(curva, destino / "s_curve.csv", claves=("year", "region")))
        else:
            logger.warning(f"{ruta_ind} no contiene {indicador}; se omite la curva S")

        for ruta in entradas:
            comando.manifiesto.registrar_archivo("entrada", ruta)
        for ruta in salidas:
            comando.manifiesto.registrar_archivo("salida", ruta)
        return ResultadoComandoDTO(mensaje=f"relatedness: {len(years)} años → {destino}",
                                   entradas=entradas, salidas=salidas)


@ejecutar_comando.register(CalcularRelacionCommand)
def ejecutar_relacion(comando: CalcularRelacionCommand) -> ResultadoComandoDTO:
    return CalcularRelacionHandler().handle(comando)
