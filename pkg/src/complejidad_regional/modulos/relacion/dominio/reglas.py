import numpy as np

from ....seedwork.dominio.reglas import ReglaNegocio


class MatrizSimetrica(ReglaNegocio):
    codigo = "proximidad_asimetrica"

    def __init__(self, phi: np.ndarray):
        super().__init__("La matriz de proximidad debe ser simétrica")
        self.phi = phi

    def es_valido(self) -> bool:
        return bool(np.array_equal(self.phi, self.phi.T))


class EntradasEnUnitario(ReglaNegocio):
    codigo = "fuera_de_rango"

    def __init__(self, valores: np.ndarray, nombre: str):
        super().__init__(f"{nombre} debe estar en [0, 1] donde está definida")
        self.valores = valores

    def es_valido(self) -> bool:
        v = self.valores[~np.isnan(self.valores)]
        return bool(np.all((v >= 0) & (v <= 1)))


class DiagonalUnitaria(ReglaNegocio):
    codigo = "diagonal_invalida"

    def __init__(self, phi: np.ndarray, ubicuidad: np.ndarray):
        super().__init__("La diagonal de φ es 1 para actividades con ubicuidad ≥ 1 y 0 en otro caso")
        self.phi = phi
        self.ubicuidad = ubicuidad

    def es_valido(self) -> bool:
        return bool(np.array_equal(np.diag(self.phi), (self.ubicuidad >= 1).astype(np.float64)))
