from typing import Iterable, Mapping, Optional

import numpy as np

from ....seedwork.dominio.reglas import ReglaNegocio

TOLERANCIA_ESTANDARIZACION = 1e-10


class Estandarizado(ReglaNegocio):
    codigo = "no_estandarizado"

    def __init__(self, puntajes: Optional[Mapping[str, float]], nombre: str):
        super().__init__(f"Los puntajes de {nombre} no tienen media 0 y desviación 1")
        self.puntajes = puntajes

    def es_valido(self) -> bool:
        if not self.puntajes:
            return True
        v = np.fromiter(self.puntajes.values(), dtype=np.float64)
        return (abs(v.mean()) < TOLERANCIA_ESTANDARIZACION
                and abs(v.std() - 1.0) < TOLERANCIA_ESTANDARIZACION)


class DescartadosSinPuntaje(ReglaNegocio):
    codigo = "descartado_con_puntaje"

    def __init__(self, puntajes: Optional[Mapping[str, float]], descartados: Iterable):
        super().__init__("Una entidad descartada conserva puntaje")
        self.puntajes = puntajes or {}
        self.descartados = [d for d, _ in descartados]

    def es_valido(self) -> bool:
        return not any(d in self.puntajes for d in self.descartados)
