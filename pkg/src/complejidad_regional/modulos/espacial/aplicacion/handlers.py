import logging

from ....seedwork.aplicacion.comandos import ComandoHandler, ejecutar_comando
from ....seedwork.aplicacion.dto import ResultadoComandoDTO
from ....seedwork.dominio.excepciones import ComplejidadExcepcion
from ....seedwork.infraestructura.paralelo import mapear_ordenado
from ...datos.infraestructura.repositorios import load_adjacency, load_indicator_table
from ..dominio.servicios import morans_i, neighbor_average, restringir_a_valores, skewness
from ..infraestructura.repositorios import tabla_vecinos, write_neighbor_averages, write_spatial_series
from .comandos import CalcularEspacialCommand

logger = logging.getLogger(__name__)


class CalcularEspacialHandler(ComandoHandler):
    def handle(self, comando: CalcularEspacialCommand) -> ResultadoComandoDTO:
        settings = comando.settings
        cfg = settings.spatial
        destino = settings.directorio("spatial")
        ruta_ind = settings.directorio("complexity") / "indicators.csv"
        indicadores = load_indicator_table(ruta_ind)
        entradas = [ruta_ind, cfg.adjacency]

        nombres = [n for n in cfg.indicators if n in indicadores]
        for ausente in sorted(set(cfg.indicators) - set(nombres)):
            logger.warning(f"{ruta_ind} no contiene el indicador {ausente}; se omite")
        regiones = sorted({r for n in nombres for r in indicadores[n].regiones})
        grafo = load_adjacency(cfg.adjacency, regiones)

        tareas = [(n, year) for n in nombres
                  for year in (sorted(cfg.years) if cfg.years else indicadores[n].anios)]

        def por_tarea(tarea):
            nombre, year = tarea
            valores = indicadores[nombre].del_anio(year)
            try:
                subgrafo, n_reg, n_aristas = restringir_a_valores(grafo, valores)
                if n_reg:
                    logger.info(f"Moran {nombre} {year}: se excluyen {n_reg} regiones sin valor "
                                f"y {n_aristas} aristas incidentes")
                fila = (year, nombre, morans_i(valores, subgrafo), skewness(valores))
            except ComplejidadExcepcion as e:
                raise type(e)(f"{nombre}, año {year}: {e.mensaje}", codigo=e.codigo, detalles=e.detalles) from e
            promedios = neighbor_average(valores, grafo, cfg.neighbor_mode)
            return fila, tabla_vecinos(promedios, year, f"{nombre}_n")

        resultados = mapear_ordenado(por_tarea, tareas, settings.workers)
        salidas = [
            write_spatial_series([f for f, _ in resultados], destino / "spatial_series.csv"),
            write_neighbor_averages([t for _, t in resultados], destino / "neighbor_avg.csv"),
        ]
        for ruta in entradas:
            comando.manifiesto.registrar_archivo("entrada", ruta)
        for ruta in salidas:
            comando.manifiesto.registrar_archivo("salida", ruta)
        return ResultadoComandoDTO(mensaje=f"spatial: {len(tareas)} series anuales → {destino}",
                                   entradas=entradas, salidas=salidas)


@ejecutar_comando.register(CalcularEspacialCommand)
def ejecutar_espacial(comando: CalcularEspacialCommand) -> ResultadoComandoDTO:
    return CalcularEspacialHandler().handle(comando)
