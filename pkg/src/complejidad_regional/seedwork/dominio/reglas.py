from abc import ABC, abstractmethod
from typing import Iterable

import numpy as np


class ReglaNegocio(ABC):
    __mensaje: str = ""
    codigo: str = "regla_invalida"

    def __init__(self, mensaje):
        self.__mensaje = mensaje

    def mensaje(self) -> str:
        return self.__mensaje

    @abstractmethod
    def es_valido(self) -> bool:
        pass


class IdentificadoresUnicos(ReglaNegocio):
    codigo = "identificadores_duplicados"

    def __init__(self, identificadores: Iterable, nombre: str):
        self.identificadores = list(identificadores)
        repetidos = sorted({str(i) for i in self.identificadores if self.identificadores.count(i) > 1})
        super().__init__(f"Identificadores de {nombre} repetidos: {', '.join(repetidos)}")

    def es_valido(self) -> bool:
        return len(set(self.identificadores)) == len(self.identificadores)


class ValoresNoNegativos(ReglaNegocio):
    codigo = "valor_negativo"

    def __init__(self, valores: np.ndarray, nombre: str):
        super().__init__(f"{nombre} contiene valores negativos")
        self.valores = valores

    def es_valido(self) -> bool:
        return bool(np.all(self.valores >= 0))
