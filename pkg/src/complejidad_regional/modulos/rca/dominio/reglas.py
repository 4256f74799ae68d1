from typing import Mapping, Optional

import numpy as np

from ....seedwork.dominio.reglas import ReglaNegocio


class CuotasSegunModo(ReglaNegocio):
    codigo = "linea_base_invalida"

    def __init__(self, mode: str, cuotas: Optional[Mapping]):
        super().__init__(f"La línea base '{mode}' es incompatible con las cuotas suministradas")
        self.mode = mode
        self.cuotas = cuotas

    def es_valido(self) -> bool:
        if self.mode == "internal":
            return self.cuotas is None
        return self.mode == "external" and self.cuotas is not None


class CuotasEnRango(ReglaNegocio):
    codigo = "cuota_fuera_de_rango"

    def __init__(self, cuotas: Optional[Mapping]):
        super().__init__("Las cuotas externas deben estar en (0, 1]")
        self.cuotas = cuotas or {}

    def es_valido(self) -> bool:
        return all(0 < v <= 1 for v in self.cuotas.values())


class RcaNoNegativa(ReglaNegocio):
    codigo = "rca_negativa"

    def __init__(self, valores: np.ndarray):
        super().__init__("La RCA debe ser no negativa donde está definida")
        self.valores = valores

    def es_valido(self) -> bool:
        return not bool(np.any(self.valores < 0))
