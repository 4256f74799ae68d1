import logging

from ....seedwork.aplicacion.comandos import ComandoHandler, ejecutar_comando
from ....seedwork.aplicacion.dto import ResultadoComandoDTO
from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ....seedwork.infraestructura.paralelo import mapear_ordenado
from ...datos.infraestructura.repositorios import load_indicator, write_indicator
from ..dominio.servicios import aggregate_indicator, deflate, per_capita
from ..infraestructura.repositorios import load_crosswalk, load_intensity, load_price_index, write_intensity
from .comandos import IngerirDatosCommand

logger = logging.getLogger(__name__)


class IngerirDatosHandler(ComandoHandler):
    def handle(self, comando: IngerirDatosCommand) -> ResultadoComandoDTO:
        cfg = comando.settings.ingest
        destino = comando.settings.directorio("ingest")
        entradas, salidas = [], []

        crosswalk = None
        if cfg.crosswalk is not None:
            crosswalk = load_crosswalk(cfg.crosswalk)
            entradas.append(cfg.crosswalk)
            logger.info(f"Correspondencia: {len(crosswalk.mapa)} sub-regiones → {len(crosswalk.miembros())} regiones")

        archivos = [(modo, ruta) for modo, ruta in (("industry", cfg.industry_intensity),
                                                    ("export", cfg.export_intensity)) if ruta is not None]
        paneles = mapear_ordenado(lambda par: load_intensity(par[1], crosswalk), archivos,
                                  workers=comando.settings.workers)
        for (modo, ruta), panel in zip(archivos, paneles):
            entradas.append(ruta)
            salidas.append(write_intensity(panel, destino / f"intensity_{modo}.csv"))

        poblacion = None
        if cfg.population is not None:
            poblacion = aggregate_indicator(load_indicator(cfg.population, "population"), crosswalk)
            entradas.append(cfg.population)
            salidas.append(write_indicator(poblacion, destino / "population.csv"))

        if cfg.gdp is not None:
            gdp = aggregate_indicator(load_indicator(cfg.gdp, "gdp"), crosswalk)
            entradas.append(cfg.gdp)
            if cfg.price_index is not None:
                gdp = deflate(gdp, load_price_index(cfg.price_index), cfg.base_year)
                entradas.append(cfg.price_index)
                logger.info(f"PIB deflactado a precios de {cfg.base_year}")
            if cfg.gdp_per_capita:
                gdppc = gdp.renombrar("gdppc")
            elif poblacion is not None:
                gdppc = per_capita(gdp, poblacion, "gdppc")
            else:
                raise DatosInvalidosExcepcion("El PIB per cápita requiere la población (ingest.population)",
                                              codigo="poblacion_ausente")
            salidas.append(write_indicator(gdppc, destino / "gdppc.csv"))

        for ruta in entradas:
            comando.manifiesto.registrar_archivo("entrada", ruta)
        for ruta in salidas:
            comando.manifiesto.registrar_archivo("salida", ruta)
        return ResultadoComandoDTO(mensaje=f"ingest: {len(salidas)} archivos escritos en {destino}",
                                   entradas=entradas, salidas=salidas)


@ejecutar_comando.register(IngerirDatosCommand)
def ejecutar_ingesta(comando: IngerirDatosCommand) -> ResultadoComandoDTO:
    return IngerirDatosHandler().handle(comando)
