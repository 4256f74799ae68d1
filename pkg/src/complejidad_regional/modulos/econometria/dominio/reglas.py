import math
from typing import Iterable, Mapping, Tuple

from ....seedwork.dominio.reglas import ReglaNegocio


class HorizontePositivo(ReglaNegocio):
    codigo = "horizonte_invalido"

    def __init__(self, horizonte: int):
        super().__init__(f"El horizonte debe ser al menos 1 (recibido {horizonte})")
        self.horizonte = horizonte

    def es_valido(self) -> bool:
        return self.horizonte >= 1


class ErroresEstandarValidos(ReglaNegocio):
    codigo = "error_estandar_invalido"

    def __init__(self, coeficientes: Mapping[str, Tuple[float, float]]):
        super().__init__("Los errores estándar deben ser finitos y no negativos")
        self.coeficientes = coeficientes

    def es_valido(self) -> bool:
        return all(math.isfinite(se) and se >= 0 for _, se in self.coeficientes.values())


class ProbabilidadesEnUnitario(ReglaNegocio):
    codigo = "p_valor_invalido"

    def __init__(self, p_valores: Iterable[float]):
        super().__init__("Los p-valores deben estar en [0, 1]")
        self.p_valores = [p for p in p_valores if p is not None]

    def es_valido(self) -> bool:
        return all(0.0 <= p <= 1.0 for p in self.p_valores)


class InstrumentosMenosQueRegiones(ReglaNegocio):
    codigo = "instrument_proliferation"

    def __init__(self, n_instrumentos: int, n_regiones: int):
        super().__init__(f"{n_instrumentos} instrumentos para {n_regiones} regiones; "
                         f"colapse los instrumentos o reduzca la profundidad de rezagos")
        self.n_instrumentos = n_instrumentos
        self.n_regiones = n_regiones

    def es_valido(self) -> bool:
        return self.n_instrumentos == 0 or self.n_instrumentos < self.n_regiones
