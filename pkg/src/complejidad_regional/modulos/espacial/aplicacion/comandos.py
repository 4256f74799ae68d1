from dataclasses import dataclass

from ....config import Settings
from ....seedwork.aplicacion.comandos import Comando
from ....seedwork.infraestructura.manifiesto import Manifiesto


@dataclass
class CalcularEspacialCommand(Comando):
    settings: Settings
    manifiesto: Manifiesto
