from typing import Mapping

from ....seedwork.dominio.reglas import ReglaNegocio


class IndicePositivo(ReglaNegocio):
    codigo = "indice_no_positivo"

    def __init__(self, indice: Mapping[int, float]):
        self.indice = indice
        malos = sorted(t for t, v in indice.items() if not v > 0)
        super().__init__(f"Índice de precios no positivo en los años {malos}")

    def es_valido(self) -> bool:
        return all(v > 0 for v in self.indice.values())


class CorrespondenciaSinVacios(ReglaNegocio):
    codigo = "correspondencia_invalida"

    def __init__(self, mapa: Mapping[str, str]):
        super().__init__("La correspondencia contiene identificadores vacíos")
        self.mapa = mapa

    def es_valido(self) -> bool:
        return all(k and v for k, v in self.mapa.items())
