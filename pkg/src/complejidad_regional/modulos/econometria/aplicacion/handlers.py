import logging
from collections import defaultdict
from typing import Dict, List, Mapping, Set

from ....config import SeccionRegresion
from ....seedwork.aplicacion.comandos import ComandoHandler, ejecutar_comando
from ....seedwork.aplicacion.dto import ResultadoComandoDTO
from ....seedwork.dominio.excepciones import ComplejidadExcepcion, DatosInvalidosExcepcion
from ....seedwork.infraestructura.paralelo import mapear_ordenado
from ...datos.dominio.entidades import IndicatorSeries
from ...datos.infraestructura.repositorios import RepositorioIndicadoresCSV
from ...reportes.dominio.servicios import correlation_table
from ..dominio.diagnosticos import vif
from ..dominio.efectos_fijos import within_fe
from ..dominio.especificaciones import default_specs, horizon_effects
from ..dominio.gmm import system_gmm
from ..dominio.objetos_valor import OpcionesGMM, PanelModelResult, PanelRegresion, PanelSpec
from ..dominio.panel import build_panel, growth_rate
from ..infraestructura.repositorios import (tabla_eliminaciones, write_coefficients, write_correlations,
                                            write_deletions, write_diagnostics, write_horizon_effects, write_vif)
from .comandos import EstimarRegresionCommand

logger = logging.getLogger(__name__)

INDICADORES_CORRELACION = ("indeci", "eci", "gdppc", "population")


def _especificaciones(cfg: SeccionRegresion, horizonte: int, disponibles: Set[str]) -> List[PanelSpec]:
    if cfg.specs == "auto":
        return default_specs(horizonte, disponibles)
    return [PanelSpec(regressors=tuple(s.regressors), horizon=horizonte, id=s.id) for s in cfg.specs]


class EstimarRegresionHandler(ComandoHandler):
    def _cargar_series(self, settings) -> RepositorioIndicadoresCSV:
        repositorio = RepositorioIndicadoresCSV()
        ingesta = settings.directorio("ingest")
        repositorio.registrar_archivo("gdppc", ingesta / "gdppc.csv")
        if (ingesta / "population.csv").is_file():
            repositorio.registrar_archivo("population", ingesta / "population.csv")
        repositorio.registrar_tabla(settings.directorio("complexity") / "indicators.csv")
        repositorio.registrar_tabla(settings.directorio("spatial") / "neighbor_avg.csv")
        return repositorio

    def _correlaciones(self, series: Mapping[str, IndicatorSeries], anios: List[int]):
        presentes = [series[n] for n in INDICADORES_CORRELACION if n in series]
        if len(presentes) < 2:
            return []
        return [correlation_table(presentes, year) for year in anios]

    def handle(self, comando: EstimarRegresionCommand) -> ResultadoComandoDTO:
        settings = comando.settings
        cfg = settings.regress
        destino = settings.directorio("regress")
        repositorio = self._cargar_series(settings)
        series = {n: repositorio.obtener(n) for n in repositorio.nombres()}
        disponibles = set(series) | {f"log_{n}" for n in ("gdppc", "population") if n in series}
        logger.info(f"regress: indicadores disponibles {sorted(disponibles)}")

        paneles: List[PanelRegresion] = []
        eliminaciones = []
        for horizonte in sorted(cfg.horizons):
            datos = dict(series, growth=growth_rate(series["gdppc"], horizonte))
            for spec in _especificaciones(cfg, horizonte, disponibles):
                try:
                    panel = build_panel(datos, spec, cfg.lag_mode)
                except DatosInvalidosExcepcion as e:
                    if e.codigo != "panel_vacio":
                        raise
                    eliminaciones.append(tabla_eliminaciones(spec, e.detalles["eliminaciones"]))
                    ruta = write_deletions(eliminaciones, destino / "deletions.csv")
                    raise DatosInvalidosExcepcion(f"{e.mensaje}; ver el registro de eliminaciones en {ruta}",
                                                  codigo=e.codigo, detalles={"causas": e.detalles["causas"]}) from e
                paneles.append(panel)
                eliminaciones.append(tabla_eliminaciones(spec, panel.eliminaciones))

        opciones = OpcionesGMM(two_step=cfg.two_step, collapse=cfg.collapse, max_lag_depth=cfg.max_lag_depth,
                               predetermined_lags=cfg.predetermined_lags)

        def estimar(tarea):
            panel, estimador = tarea
            try:
                resultado = system_gmm(panel, opciones) if estimador == "system_gmm" else within_fe(panel)
            except ComplejidadExcepcion as e:
                raise type(e)(f"{panel.spec.id} h={panel.spec.horizon} ({estimador}): {e.mensaje}",
                              codigo=e.codigo, detalles=e.detalles) from e
            return panel.spec, resultado

        tareas = [(panel, estimador) for panel in paneles for estimador in cfg.estimators]
        estimaciones = mapear_ordenado(estimar, tareas, settings.workers)
        vifs = [(p.spec, vif(p.tabla, p.spec.regressors)) for p in paneles if len(p.spec.regressors) >= 2]

        por_columna: Dict[tuple, Dict[int, PanelModelResult]] = defaultdict(dict)
        terminos: Dict[tuple, tuple] = {}
        for spec, resultado in estimaciones:
            clave = (spec.id, resultado.estimator)
            por_columna[clave][spec.horizon] = resultado
            terminos[clave] = spec.terminos
        efectos = []
        for (ident, estimador), resultados in sorted(por_columna.items()):
            tabla = horizon_effects(resultados, terminos[(ident, estimador)])
            tabla.insert(0, "estimator", estimador)
            tabla.insert(0, "spec_id", ident)
            efectos.append(tabla)

        anios = cfg.correlation_years or [max(series["gdppc"].anios)]
        salidas = [
            write_coefficients(estimaciones, destino / "coefficients.csv"),
            write_diagnostics(estimaciones, destino / "diagnostics.csv"),
            write_horizon_effects(efectos, destino / "horizon_effects.csv"),
            write_vif(vifs, destino / "vif.csv"),
            write_deletions(eliminaciones, destino / "deletions.csv"),
            write_correlations(self._correlaciones(series, anios), destino / "correlations.csv"),
        ]
        entradas = list(repositorio.archivos_leidos)
        for ruta in entradas:
            comando.manifiesto.registrar_archivo("entrada", ruta)
        for ruta in salidas:
            comando.manifiesto.registrar_archivo("salida", ruta)
        return ResultadoComandoDTO(
            mensaje=f"regress: {len(estimaciones)} estimaciones en {len(cfg.horizons)} horizontes → {destino}",
            entradas=entradas, salidas=salidas)


@ejecutar_comando.register(EstimarRegresionCommand)
def ejecutar_regresion(comando: EstimarRegresionCommand) -> ResultadoComandoDTO:
    return EstimarRegresionHandler().handle(comando)
