import numpy as np

from ....seedwork.dominio.reglas import ReglaNegocio


class SinCeros(ReglaNegocio):
    codigo = "cero_almacenado"

    def __init__(self, valores: np.ndarray):
        super().__init__("Las intensidades nulas no se almacenan en el panel")
        self.valores = valores

    def es_valido(self) -> bool:
        return bool(np.all(self.valores != 0))


class IndicesEnRango(ReglaNegocio):
    codigo = "identificador_desconocido"

    def __init__(self, indices: np.ndarray, tamano: int, nombre: str):
        super().__init__(f"Entrada del panel con {nombre} fuera de la lista de identificadores")
        self.indices = indices
        self.tamano = tamano

    def es_valido(self) -> bool:
        return bool(np.all((self.indices >= 0) & (self.indices < self.tamano)))


class ClavesUnicas(ReglaNegocio):
    codigo = "clave_duplicada"

    def __init__(self, claves: np.ndarray):
        super().__init__("Entradas repetidas (región, actividad, año) en el panel")
        self.claves = claves

    def es_valido(self) -> bool:
        return len(np.unique(self.claves)) == len(self.claves)


class MatrizBinaria(ReglaNegocio):
    codigo = "matriz_no_binaria"

    def __init__(self, entradas: np.ndarray):
        super().__init__("La matriz de especialización sólo admite 0 y 1")
        self.entradas = entradas

    def es_valido(self) -> bool:
        return bool(np.isin(self.entradas, (0, 1)).all())


class MarginalesConsistentes(ReglaNegocio):
    codigo = "marginales_inconsistentes"

    def __init__(self, entradas: np.ndarray, diversidad: np.ndarray, ubicuidad: np.ndarray):
        super().__init__("Diversidad/ubicuidad no coinciden con las sumas de filas/columnas")
        self.entradas = entradas
        self.diversidad = diversidad
        self.ubicuidad = ubicuidad

    def es_valido(self) -> bool:
        return (np.array_equal(self.entradas.sum(axis=1), self.diversidad)
                and np.array_equal(self.entradas.sum(axis=0), self.ubicuidad))


class DimensionesConsistentes(ReglaNegocio):
    codigo = "dimensiones_inconsistentes"

    def __init__(self, forma: tuple, esperada: tuple):
        super().__init__(f"Forma {forma} distinta de la esperada {esperada}")
        self.forma = forma
        self.esperada = esperada

    def es_valido(self) -> bool:
        return tuple(self.forma) == tuple(self.esperada)


class GrafoSimetricoSinLazos(ReglaNegocio):
    codigo = "grafo_invalido"

    def __init__(self, vecinos: tuple):
        super().__init__("El grafo de regiones debe ser simétrico y sin lazos")
        self.vecinos = vecinos

    def es_valido(self) -> bool:
        n = len(self.vecinos)
        for r, vs in enumerate(self.vecinos):
            for v in vs:
                if v == r or not 0 <= v < n or r not in self.vecinos[v]:
                    return False
        return True


class ValoresFinitos(ReglaNegocio):
    codigo = "valor_no_finito"

    def __init__(self, valores, nombre: str):
        super().__init__(f"El indicador {nombre} contiene valores no finitos")
        self.valores = np.fromiter(valores, dtype=np.float64)

    def es_valido(self) -> bool:
        return bool(np.all(np.isfinite(self.valores)))
