import logging

from ....seedwork.aplicacion.comandos import ComandoHandler, ejecutar_comando
from ....seedwork.aplicacion.dto import ResultadoComandoDTO
from ..dominio.fixtures import configuracion_fixture, gen_fixture_set
from ..dominio.servicios import ALGORITMO
from ..infraestructura.repositorios import write_fixture_set
from .comandos import GenerarSinteticoCommand

logger = logging.getLogger(__name__)


class GenerarSinteticoHandler(ComandoHandler):
    def handle(self, comando: GenerarSinteticoCommand) -> ResultadoComandoDTO:
        settings = comando.settings
        destino = settings.directorio("synth")
        logger.info(f"synth: semilla {settings.seed} ({ALGORITMO}), modelo {settings.synth.model}")
        fixture = gen_fixture_set(settings.synth, settings.seed)
        configuracion = configuracion_fixture(settings.synth)
        configuracion["seed"] = settings.seed
        salidas = write_fixture_set(fixture, configuracion, destino)
        for ruta in salidas:
            comando.manifiesto.registrar_archivo("salida", ruta)
        return ResultadoComandoDTO(
            mensaje=f"synth: fixture escrito en {destino}; ejecute `complejidad --config {destino / 'config.yaml'} all`",
            entradas=[], salidas=salidas)


@ejecutar_comando.register(GenerarSinteticoCommand)
def ejecutar_sintetico(comando: GenerarSinteticoCommand) -> ResultadoComandoDTO:
    return GenerarSinteticoHandler().handle(comando)
