from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ....seedwork.dominio.objetos_valor import ObjetoValor
from ...datos.dominio.reglas import DimensionesConsistentes
from .reglas import DiagonalUnitaria, EntradasEnUnitario, MatrizSimetrica


@dataclass(frozen=True, eq=False)
class ProximityMatrix(ObjetoValor):
    activities: Tuple[str, ...]
    phi: np.ndarray
    ubiquity: np.ndarray
    year: int

    def validar(self):
        n = len(self.activities)
        self.validar_regla(DimensionesConsistentes(self.phi.shape, (n, n)))
        self.validar_regla(MatrizSimetrica(self.phi))
        self.validar_regla(EntradasEnUnitario(self.phi, "φ"))
        self.validar_regla(DiagonalUnitaria(self.phi, self.ubiquity))


@dataclass(frozen=True, eq=False)
class DensityMatrix(ObjetoValor):
    """ω región × actividad; NaN donde la fila de φ suma cero."""
    regions: Tuple[str, ...]
    activities: Tuple[str, ...]
    omega: np.ndarray
    year: int

    def validar(self):
        self.validar_regla(DimensionesConsistentes(self.omega.shape, (len(self.regions), len(self.activities))))
        self.validar_regla(EntradasEnUnitario(self.omega, "ω"))

    def columnas(self, activities: Sequence[str]) -> "DensityMatrix":
        indice = {a: j for j, a in enumerate(self.activities)}
        cols = [indice[a] for a in activities]
        return DensityMatrix(self.regions, tuple(activities), self.omega[:, cols], self.year)
