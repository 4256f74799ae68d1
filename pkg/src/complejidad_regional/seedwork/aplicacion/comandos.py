from functools import singledispatch
from abc import ABC, abstractmethod

from .dto import ResultadoComandoDTO


class Comando:
    pass


class ComandoHandler(ABC):
    @abstractmethod
    def handle(self, comando: Comando) -> ResultadoComandoDTO:
        raise NotImplementedError()


@singledispatch
def ejecutar_comando(comando) -> ResultadoComandoDTO:
    raise NotImplementedError(f'No existe implementación para el comando de tipo {type(comando).__name__}')
