from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

import numpy as np

from ....seedwork.dominio.objetos_valor import ObjetoValor
from .reglas import DescartadosSinPuntaje, Estandarizado

Descartes = Tuple[Tuple[str, str], ...]


def _proxy(mapa: Optional[Mapping]) -> Optional[Mapping]:
    return None if mapa is None else MappingProxyType(dict(mapa))


@dataclass(frozen=True, eq=False)
class ComplexityResult(ObjetoValor):
    """Puntajes estandarizados (IndECI/ECI, ICI/PCI) de un año y los vectores crudos K, Q."""
    year: int
    region_scores: Mapping[str, float]
    activity_scores: Optional[Mapping[str, float]] = None
    raw_region: Optional[Mapping[str, float]] = None
    raw_activity: Optional[Mapping[str, float]] = None
    dropped_regions: Descartes = ()
    dropped_activities: Descartes = ()
    # Tres autovalores principales de M̂ (parte real); NaN si el solucionador no los obtiene.
    eigenvalues: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for nombre in ("region_scores", "activity_scores", "raw_region", "raw_activity"):
            object.__setattr__(self, nombre, _proxy(getattr(self, nombre)))
        object.__setattr__(self, "dropped_regions", tuple(sorted(self.dropped_regions)))
        object.__setattr__(self, "dropped_activities", tuple(sorted(self.dropped_activities)))
        super().__post_init__()

    def validar(self):
        self.validar_regla(Estandarizado(self.region_scores, "regiones"))
        self.validar_regla(Estandarizado(self.activity_scores, "actividades"))
        self.validar_regla(DescartadosSinPuntaje(self.region_scores, self.dropped_regions))
        self.validar_regla(DescartadosSinPuntaje(self.activity_scores, self.dropped_activities))

    def ranking_regiones(self) -> Tuple[str, ...]:
        """Regiones de mayor a menor puntaje; empates por identificador."""
        return tuple(sorted(self.region_scores, key=lambda r: (-self.region_scores[r], r)))

    def ranking_actividades(self) -> Tuple[str, ...]:
        puntajes = self.activity_scores or {}
        return tuple(sorted(puntajes, key=lambda a: (-puntajes[a], a)))


@dataclass(frozen=True, eq=False)
class ResultadoReflexiones:
    """Secuencias k^(n), q^(n) estandarizadas; fila n = iteración n."""
    year: int
    regions: Tuple[str, ...]
    activities: Tuple[str, ...]
    k: np.ndarray
    q: np.ndarray
    dropped_regions: Descartes = ()
    dropped_activities: Descartes = ()

    @property
    def iteraciones(self) -> int:
        return self.k.shape[0] - 1


# Nombre del indicador regional y del de actividades para cada modo.
NOMBRES_INDICADORES = {"industry": ("indeci", "ici"), "export": ("eci", "pci")}
