from abc import ABC, abstractmethod
from typing import List, Optional

from .entidades import IndicatorSeries


class RepositorioIndicadores(ABC):
    @abstractmethod
    def obtener(self, nombre: str) -> Optional[IndicatorSeries]:
        raise NotImplementedError()

    @abstractmethod
    def agregar(self, serie: IndicatorSeries):
        raise NotImplementedError()

    @abstractmethod
    def nombres(self) -> List[str]:
        raise NotImplementedError()
