import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import click

from . import __version__
from .config import COMANDOS, cargar_configuracion, configurar_logging, parsear_overrides, validar_para
from .modulos.complejidad.aplicacion.comandos import CalcularComplejidadCommand
from .modulos.complejidad.aplicacion import handlers as _complejidad  # noqa: F401
from .modulos.econometria.aplicacion.comandos import EstimarRegresionCommand
from .modulos.econometria.aplicacion import handlers as _econometria  # noqa: F401
from .modulos.espacial.aplicacion.comandos import CalcularEspacialCommand
from .modulos.espacial.aplicacion import handlers as _espacial  # noqa: F401
from .modulos.ingesta.aplicacion.comandos import IngerirDatosCommand
from .modulos.ingesta.aplicacion import handlers as _ingesta  # noqa: F401
from .modulos.relacion.aplicacion.comandos import CalcularRelacionCommand
from .modulos.relacion.aplicacion import handlers as _relacion  # noqa: F401
from .modulos.sintetico.aplicacion.comandos import GenerarSinteticoCommand
from .modulos.sintetico.aplicacion import handlers as _sintetico  # noqa: F401
from .seedwork.aplicacion.comandos import ejecutar_comando
from .seedwork.dominio.excepciones import ComplejidadExcepcion
from .seedwork.infraestructura.manifiesto import Manifiesto

logger = logging.getLogger(__name__)

COMANDO_POR_ETAPA = {
    "ingest": IngerirDatosCommand,
    "complexity": CalcularComplejidadCommand,
    "relatedness": CalcularRelacionCommand,
    "spatial": CalcularEspacialCommand,
    "regress": EstimarRegresionCommand,
    "synth": GenerarSinteticoCommand,
}


@dataclass
class Contexto:
    ruta_config: Optional[Path]
    asignaciones: Tuple[str, ...]
    output_dir: Optional[Path]
    log_level: Optional[str]


def _ejecutar(ctx: click.Context, nombre: str, etapas: Sequence[str]):
    contexto: Contexto = ctx.obj
    try:
        overrides = parsear_overrides(contexto.asignaciones)
        if contexto.output_dir is not None:
            overrides["output_dir"] = str(contexto.output_dir.resolve())
        if contexto.log_level is not None:
            overrides["log_level"] = contexto.log_level
        settings = cargar_configuracion(contexto.ruta_config, overrides)
        configurar_logging(settings.log_level)
        validar_para(settings, etapas)

        manifiesto = Manifiesto(settings.output_dir / f"manifest-{nombre}.jsonl", base=settings.output_dir)
        manifiesto.registrar("version", version=__version__)
        manifiesto.registrar("config", sha256=settings.hash())
        for etapa in etapas:
            logger.info(f"Inicio de la etapa {etapa}")
            resultado = ejecutar_comando(COMANDO_POR_ETAPA[etapa](settings=settings, manifiesto=manifiesto))
            logger.info(f"Fin de la etapa {etapa}: {len(resultado.salidas)} archivos")
            click.echo(resultado.mensaje)
        manifiesto.escribir()
    except ComplejidadExcepcion as e:
        logger.error(f"[{e.codigo}] {e.mensaje}")
        click.echo(e.mensaje, err=True)
        ctx.exit(e.codigo_salida)
    except Exception as e:
        logger.exception(f"Error inesperado en `{nombre}`")
        click.echo(f"Error inesperado: {e}", err=True)
        ctx.exit(1)


@click.group()
@click.option("--config", "ruta_config", type=click.Path(dir_okay=False, path_type=Path),
              help="Archivo YAML de configuración.")
@click.option("--set", "asignaciones", multiple=True, metavar="SECCION.CLAVE=VALOR",
              help="Sobrescribe una clave de la configuración; repetible.")
@click.option("--output-dir", type=click.Path(file_okay=False, path_type=Path),
              help="Directorio de resultados.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Verbosidad del log (también COMPLEJIDAD_LOG_LEVEL).")
@click.version_option(__version__, prog_name="complejidad")
@click.pass_context
def cli(ctx: click.Context, ruta_config, asignaciones, output_dir, log_level):
    """Complejidad económica regional: RCA, ECI/IndECI, relación, estadística espacial y paneles."""
    ctx.obj = Contexto(ruta_config, tuple(asignaciones), output_dir, log_level)


@cli.command()
@click.pass_context
def ingest(ctx):
    """Agrega las intensidades por la correspondencia y deflacta el PIB."""
    _ejecutar(ctx, "ingest", ["ingest"])


@cli.command()
@click.pass_context
def complexity(ctx):
    """RCA, binarización e indicadores de complejidad por año."""
    _ejecutar(ctx, "complexity", ["complexity"])


@cli.command()
@click.pass_context
def relatedness(ctx):
    """Proximidad, densidad, cercanía a la complejidad y curva S."""
    _ejecutar(ctx, "relatedness", ["relatedness"])


@cli.command()
@click.pass_context
def spatial(ctx):
    """I de Moran, asimetría y promedios de vecinos."""
    _ejecutar(ctx, "spatial", ["spatial"])


@cli.command()
@click.pass_context
def regress(ctx):
    """Paneles de crecimiento con efectos fijos y GMM de sistema."""
    _ejecutar(ctx, "regress", ["regress"])


@cli.command()
@click.pass_context
def synth(ctx):
    """Escribe un conjunto de insumos sintéticos y su config.yaml."""
    _ejecutar(ctx, "synth", ["synth"])


@cli.command(name="all")
@click.pass_context
def todo(ctx):
    """ingest → complexity → relatedness → spatial → regress."""
    _ejecutar(ctx, "all", list(COMANDOS))
