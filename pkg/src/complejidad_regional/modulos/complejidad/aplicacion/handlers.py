import logging
from typing import Dict, List

import pandas as pd

from ....seedwork.aplicacion.comandos import ComandoHandler, ejecutar_comando
from ....seedwork.aplicacion.dto import ResultadoComandoDTO
from ....seedwork.infraestructura.csv import escribir_csv
from ....seedwork.infraestructura.paralelo import mapear_ordenado
from ...datos.infraestructura.repositorios import write_indicator_table
from ...ingesta.infraestructura.repositorios import load_intensity
from ...rca.dominio.objetos_valor import Baseline
from ...rca.dominio.servicios import binarize, rca
from ...rca.infraestructura.repositorios import load_external_shares
from ...reportes.dominio.servicios import top_bottom_activities, top_bottom_regions
from ..dominio.objetos_valor import NOMBRES_INDICADORES, ComplexityResult
from ..dominio.servicios import complexity_panel, reflections
from ..infraestructura.repositorios import (load_pci, puntajes_actividades, series_de_resultados,
                                            tabla_actividades, write_activity_tables, write_drops,
                                            write_eigenvalues, write_reflections)
from .comandos import CalcularComplejidadCommand

logger = logging.getLogger(__name__)


class CalcularComplejidadHandler(ComandoHandler):
    def handle(self, comando: CalcularComplejidadCommand) -> ResultadoComandoDTO:
        settings = comando.settings
        cfg = settings.complexity
        destino = settings.directorio("complexity")
        entradas, salidas = [], []
        series, tablas_actividades, rankings_r, rankings_a = [], [], [], []
        autovalores: Dict[str, List[ComplexityResult]] = {}

        pci = None
        if "export" in cfg.modes and cfg.export_method == "pci":
            pci = load_pci(cfg.pci)
            entradas.append(cfg.pci)
        bases = {"industry": cfg.industry_baseline, "export": cfg.export_baseline}
        cuotas = None
        if any(bases[m] == "external" for m in cfg.modes):
            cuotas = load_external_shares(cfg.external_shares)
            entradas.append(cfg.external_shares)

        for modo in cfg.modes:
            nombre_r, nombre_a = NOMBRES_INDICADORES[modo]
            ruta = settings.directorio("ingest") / f"intensity_{modo}.csv"
            panel = load_intensity(ruta)
            entradas.append(ruta)
            baseline = cuotas if bases[modo] == "external" else Baseline("internal")
            metodo = "eigen" if modo == "industry" else cfg.export_method
            years = sorted(cfg.years) if cfg.years else list(panel.years)
            logger.info(f"Complejidad {modo} ({metodo}, línea base {bases[modo]}): años {years[0]}–{years[-1]}")

            resultados = complexity_panel(panel, baseline, years, method=metodo, pci=pci,
                                          threshold=cfg.threshold, dense_limit=cfg.dense_limit,
                                          workers=settings.workers)
            serie = series_de_resultados(resultados, nombre_r)
            series.append(serie)
            salidas += write_drops(resultados, destino / f"drops_regions_{nombre_r}.csv",
                                   destino / f"drops_activities_{nombre_a}.csv")

            if metodo == "eigen":
                autovalores[nombre_r] = resultados
                puntajes = puntajes_actividades(resultados)
            else:
                actividades = set(panel.activities)
                puntajes = {(a, t): v for (a, t), v in pci.items() if a in actividades and t in years}
            tablas_actividades.append(tabla_actividades(puntajes, nombre_a))

            matrices = mapear_ordenado(lambda t: rca(panel, baseline, t), years, settings.workers)
            for matriz in matrices:
                rankings_r.append(top_bottom_regions(serie, matriz.year, cfg.top_k))
                del_anio = {a: v for (a, t), v in puntajes.items() if t == matriz.year}
                rankings_a.append(top_bottom_activities(del_anio, matriz, nombre_a, cfg.top_k))

            if cfg.reflections_iterations and metodo == "eigen":
                reflejos = mapear_ordenado(
                    lambda m: reflections(binarize(m, cfg.threshold), cfg.reflections_iterations),
                    matrices, settings.workers)
                salidas.append(write_reflections(reflejos, destino / f"reflections_{nombre_r}.csv"))

        salidas.append(write_indicator_table(series, destino / "indicators.csv"))
        salidas.append(write_activity_tables(tablas_actividades, destino / "activities.csv"))
        salidas.append(escribir_csv(pd.concat(rankings_r, ignore_index=True), destino / "rankings_regions.csv",
                                    claves=("indicator", "year", "position", "rank")))
        salidas.append(escribir_csv(pd.concat(rankings_a, ignore_index=True), destino / "rankings_activities.csv",
                                    claves=("indicator", "year", "position")))
        if autovalores:
            salidas.append(write_eigenvalues(autovalores, destino / "eigenvalues.csv"))

        for ruta in entradas:
            comando.manifiesto.registrar_archivo("entrada", ruta)
        for ruta in salidas:
            comando.manifiesto.registrar_archivo("salida", ruta)
        return ResultadoComandoDTO(mensaje=f"complexity: {', '.join(cfg.modes)} → {destino}",
                                   entradas=entradas, salidas=salidas)


@ejecutar_comando.register(CalcularComplejidadCommand)
def ejecutar_complejidad(comando: CalcularComplejidadCommand) -> ResultadoComandoDTO:
    return CalcularComplejidadHandler().handle(comando)
