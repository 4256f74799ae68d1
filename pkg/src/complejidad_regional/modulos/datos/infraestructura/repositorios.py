import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from ....seedwork.infraestructura.csv import escribir_csv
from ..dominio.entidades import IndicatorSeries, RegionGraph
from ..dominio.repositorios import RepositorioIndicadores
from .mapeadores import MapeadorGrafo, MapeadorIndicador, MapeadorTablaIndicadores

logger = logging.getLogger(__name__)


def load_indicator(path: Path, name: str, units: str = "") -> IndicatorSeries:
    serie = MapeadorIndicador().csv_a_entidad(Path(path), name, units)
    logger.info(f"Indicador {name}: {len(serie)} valores desde {path}")
    return serie


def write_indicator(serie: IndicatorSeries, path: Path) -> Path:
    return escribir_csv(MapeadorIndicador().entidad_a_dataframe(serie), path, claves=("region", "year"))


def load_indicator_table(path: Path) -> Dict[str, IndicatorSeries]:
    return MapeadorTablaIndicadores().csv_a_entidades(Path(path))


def write_indicator_table(series: List[IndicatorSeries], path: Path) -> Path:
    df = MapeadorTablaIndicadores().entidades_a_dataframe(series)
    return escribir_csv(df, path, claves=("indicator", "region", "year"))


def load_adjacency(path: Path, regions: Optional[Iterable[str]] = None) -> RegionGraph:
    grafo = MapeadorGrafo().csv_a_entidad(Path(path), regions)
    logger.info(f"Grafo de adyacencia: {len(grafo.regions)} regiones, {grafo.n_aristas} aristas desde {path}")
    return grafo


def write_adjacency(grafo: RegionGraph, path: Path) -> Path:
    return escribir_csv(MapeadorGrafo().entidad_a_dataframe(grafo), path, claves=("region_a", "region_b"))


class RepositorioIndicadoresCSV(RepositorioIndicadores):
    """
    Repositorio de series respaldado por archivos CSV.

    Acepta archivos de un solo indicador (`region,year,value`) y tablas largas
    con columna `indicator`; las series se cargan al primer acceso.
    """

    def __init__(self):
        self._series: Dict[str, IndicatorSeries] = {}
        self._pendientes: Dict[str, tuple] = {}
        self.archivos_leidos: List[Path] = []

    def registrar_archivo(self, nombre: str, ruta: Path, unidades: str = ""):
        self._pendientes[nombre] = (Path(ruta), unidades)

    def registrar_tabla(self, ruta: Path):
        ruta = Path(ruta)
        if ruta.exists():
            for nombre, serie in load_indicator_table(ruta).items():
                self._series[nombre] = serie
            self.archivos_leidos.append(ruta)

    def obtener(self, nombre: str) -> Optional[IndicatorSeries]:
        if nombre not in self._series and nombre in self._pendientes:
            ruta, unidades = self._pendientes.pop(nombre)
            self._series[nombre] = load_indicator(ruta, nombre, unidades)
            self.archivos_leidos.append(ruta)
        return self._series.get(nombre)

    def agregar(self, serie: IndicatorSeries):
        self._series[serie.name] = serie

    def nombres(self) -> List[str]:
        return sorted(set(self._series) | set(self._pendientes))
