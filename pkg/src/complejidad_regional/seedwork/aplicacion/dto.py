from dataclasses import dataclass, field
from pathlib import Path
from typing import List


@dataclass
class DTO:
    pass


@dataclass
class ResultadoComandoDTO(DTO):
    mensaje: str
    entradas: List[Path] = field(default_factory=list)
    salidas: List[Path] = field(default_factory=list)
    exitoso: bool = True
