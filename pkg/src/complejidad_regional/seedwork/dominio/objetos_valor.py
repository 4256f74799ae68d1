from dataclasses import dataclass

from .mixins import ValidarReglasMixin


@dataclass(frozen=True)
class ObjetoValor(ValidarReglasMixin):
    def __post_init__(self):
        self.validar()

    def validar(self):
        pass
