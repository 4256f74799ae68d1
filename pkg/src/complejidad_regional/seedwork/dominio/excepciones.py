from typing import Any, Dict, Optional


class ComplejidadExcepcion(Exception):
    codigo_salida: int = 1

    def __init__(self, mensaje: str, codigo: str = "error", detalles: Optional[Dict[str, Any]] = None):
        self.__mensaje = mensaje
        self.__codigo = codigo
        self.__detalles = detalles or {}
        super().__init__(self.__mensaje)

    @property
    def mensaje(self) -> str:
        return self.__mensaje

    @property
    def codigo(self) -> str:
        return self.__codigo

    @property
    def detalles(self) -> Dict[str, Any]:
        return self.__detalles


class ConfiguracionInvalidaExcepcion(ComplejidadExcepcion):
    """Agrupa todos los problemas de configuración detectados en una pasada."""
    codigo_salida = 2

    def __init__(self, problemas: list[str]):
        self.problemas = list(problemas)
        texto = "Configuración inválida:\n" + "\n".join(f"  - {p}" for p in self.problemas)
        super().__init__(texto, codigo="config_invalida", detalles={"problemas": self.problemas})


class DatosInvalidosExcepcion(ComplejidadExcepcion):
    codigo_salida = 3

    def __init__(self, mensaje: str, codigo: str = "datos_invalidos", linea: Optional[int] = None,
                 detalles: Optional[Dict[str, Any]] = None):
        self.linea = linea
        if linea is not None:
            mensaje = f"línea {linea}: {mensaje}"
        super().__init__(mensaje, codigo=codigo, detalles=detalles)


class FallaNumericaExcepcion(ComplejidadExcepcion):
    codigo_salida = 4

    def __init__(self, mensaje: str, codigo: str = "falla_numerica", detalles: Optional[Dict[str, Any]] = None):
        super().__init__(mensaje, codigo=codigo, detalles=detalles)
