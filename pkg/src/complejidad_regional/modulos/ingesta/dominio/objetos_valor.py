from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping

from ....seedwork.dominio.objetos_valor import ObjetoValor
from .reglas import CorrespondenciaSinVacios, IndicePositivo


@dataclass(frozen=True, eq=False)
class Crosswalk(ObjetoValor):
    """Correspondencia muchos-a-uno sub-región → región, invariante en el tiempo."""
    mapa: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "mapa", MappingProxyType(dict(self.mapa)))
        super().__post_init__()

    def validar(self):
        self.validar_regla(CorrespondenciaSinVacios(self.mapa))

    def desconocidas(self, sub_regiones: Iterable[str]) -> List[str]:
        return sorted({s for s in sub_regiones if s not in self.mapa})

    def miembros(self) -> Dict[str, List[str]]:
        grupos: Dict[str, List[str]] = {}
        for sub, region in sorted(self.mapa.items()):
            grupos.setdefault(region, []).append(sub)
        return grupos


@dataclass(frozen=True, eq=False)
class PriceIndex(ObjetoValor):
    valores: Mapping[int, float]

    def __post_init__(self):
        object.__setattr__(self, "valores", MappingProxyType({int(t): float(v) for t, v in self.valores.items()}))
        super().__post_init__()

    def validar(self):
        self.validar_regla(IndicePositivo(self.valores))

    def __getitem__(self, year: int) -> float:
        return self.valores[year]

    def __contains__(self, year) -> bool:
        return year in self.valores
