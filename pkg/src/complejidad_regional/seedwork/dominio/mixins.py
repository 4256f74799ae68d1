from .reglas import ReglaNegocio
from .excepciones import DatosInvalidosExcepcion


class ValidarReglasMixin:
    def validar_regla(self, regla: ReglaNegocio):
        if not regla.es_valido():
            raise DatosInvalidosExcepcion(regla.mensaje(), codigo=regla.codigo)
