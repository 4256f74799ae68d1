from pathlib import Path
from typing import Any, Dict, List

import yaml

from ....seedwork.infraestructura.csv import escribir_csv
from ...datos.infraestructura.repositorios import write_adjacency
from ..dominio.fixtures import FixtureSintetico

ARCHIVOS = {
    "intensity_industry": ("region", "activity", "year"),
    "intensity_export": ("region", "activity", "year"),
    "crosswalk": ("sub_region",),
    "gdp": ("region", "year"),
    "population": ("region", "year"),
    "price_index": ("year",),
    "pci": ("activity", "year"),
    "external_shares": ("activity", "year"),
}


def write_fixture_set(fixture: FixtureSintetico, configuracion: Dict[str, Any], destino: Path) -> List[Path]:
    destino = Path(destino)
    rutas = [escribir_csv(getattr(fixture, nombre), destino / f"{nombre}.csv", claves=claves)
             for nombre, claves in ARCHIVOS.items()]
    rutas.append(write_adjacency(fixture.grafo, destino / "adjacency.csv"))
    ruta_config = destino / "config.yaml"
    with open(ruta_config, "w", encoding="utf-8", newline="\n") as f:
        yaml.safe_dump(configuracion, f, sort_keys=True, allow_unicode=True)
    rutas.append(ruta_config)
    return rutas
