from dataclasses import dataclass
from types import MappingProxyType
from typing import List, Literal, Mapping, Optional, Tuple

import numpy as np

from ....seedwork.dominio.objetos_valor import ObjetoValor
from ...datos.dominio.reglas import DimensionesConsistentes
from .reglas import CuotasEnRango, CuotasSegunModo, RcaNoNegativa


@dataclass(frozen=True, eq=False)
class Baseline(ObjetoValor):
    """Expectativa de intensidad relativa Z: interna (cuota nacional) o externa (cuota mundial)."""
    mode: Literal["internal", "external"] = "internal"
    external_shares: Optional[Mapping[Tuple[str, int], float]] = None

    def __post_init__(self):
        if self.external_shares is not None:
            object.__setattr__(self, "external_shares", MappingProxyType(
                {(str(a), int(t)): float(v) for (a, t), v in self.external_shares.items()}))
        super().__post_init__()

    def validar(self):
        self.validar_regla(CuotasSegunModo(self.mode, self.external_shares))
        self.validar_regla(CuotasEnRango(self.external_shares))


@dataclass(frozen=True, eq=False)
class MatrizRCA(ObjetoValor):
    """RCA región × actividad de un año; las filas indefinidas (0/0) son NaN."""
    regions: Tuple[str, ...]
    activities: Tuple[str, ...]
    year: int
    valores: np.ndarray

    def validar(self):
        self.validar_regla(DimensionesConsistentes(self.valores.shape, (len(self.regions), len(self.activities))))
        self.validar_regla(RcaNoNegativa(self.valores[~np.isnan(self.valores)]))

    @property
    def filas_indefinidas(self) -> np.ndarray:
        return np.isnan(self.valores).all(axis=1) if self.valores.shape[1] else np.zeros(len(self.regions), bool)

    @property
    def regiones_indefinidas(self) -> List[str]:
        return [r for r, indefinida in zip(self.regions, self.filas_indefinidas) if indefinida]
