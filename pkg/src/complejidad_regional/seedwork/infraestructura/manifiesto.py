import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


def sha256_archivo(ruta: Path) -> str:
    digest = hashlib.sha256()
    with open(ruta, "rb") as f:
        for bloque in iter(lambda: f.read(1 << 20), b""):
            digest.update(bloque)
    return digest.hexdigest()


class Manifiesto:
    """Manifiesto de corrida en JSON Lines: un registro por línea, claves ordenadas, sin marcas de tiempo."""

    def __init__(self, ruta: Path, base: Optional[Path] = None):
        self.ruta = Path(ruta)
        self.base = Path(base) if base else self.ruta.parent
        self.registros: List[Dict[str, Any]] = []

    def _relativa(self, ruta: Path) -> str:
        ruta = Path(ruta)
        try:
            return ruta.resolve().relative_to(self.base.resolve()).as_posix()
        except ValueError:
            return ruta.resolve().as_posix()

    def registrar(self, tipo: str, **datos):
        self.registros.append({"tipo": tipo, **datos})

    def registrar_archivo(self, tipo: str, ruta: Path):
        self.registrar(tipo, ruta=self._relativa(ruta), sha256=sha256_archivo(ruta))

    def escribir(self) -> Path:
        self.ruta.parent.mkdir(parents=True, exist_ok=True)
        with open(self.ruta, "w", encoding="utf-8", newline="\n") as f:
            for registro in self.registros:
                f.write(json.dumps(registro, sort_keys=True, default=str, ensure_ascii=False) + "\n")
        logger.info(f"Manifiesto escrito en {self.ruta} ({len(self.registros)} registros)")
        return self.ruta


def leer_manifiesto(ruta: Path) -> List[Dict[str, Any]]:
    with open(ruta, encoding="utf-8") as f:
        return [json.loads(linea) for linea in f if linea.strip()]
