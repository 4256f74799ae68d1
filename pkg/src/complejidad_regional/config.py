"""
Configuración del pipeline de complejidad regional.

Prioridad de fuentes, de mayor a menor: banderas de la CLI (`--set`,
`--output-dir`, `--log-level`), variables de entorno `COMPLEJIDAD_*` y el
archivo YAML. Las rutas relativas se resuelven contra el directorio del
archivo de configuración.
"""
import hashlib
import json
import logging
from contextvars import ContextVar
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource

from .seedwork.dominio.excepciones import ConfiguracionInvalidaExcepcion

logger = logging.getLogger(__name__)

FORMATO_LOG = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
COMANDOS = ("ingest", "complexity", "relatedness", "spatial", "regress")
INDICADORES_REGRESION = ("indeci", "indeci_n", "eci", "eci_n", "log_gdppc", "log_population")

_datos_archivo: ContextVar[Dict[str, Any]] = ContextVar("datos_archivo", default={})


class Seccion(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SeccionIngesta(Seccion):
    industry_intensity: Optional[Path] = None
    export_intensity: Optional[Path] = None
    crosswalk: Optional[Path] = None
    gdp: Optional[Path] = None
    population: Optional[Path] = None
    price_index: Optional[Path] = None
    base_year: int = 2010
    # El archivo de PIB ya viene por habitante: se deflacta sin dividir por la población.
    gdp_per_capita: bool = False


class SeccionComplejidad(Seccion):
    modes: List[Literal["industry", "export"]] = ["industry"]
    industry_baseline: Literal["internal", "external"] = "internal"
    export_baseline: Literal["internal", "external"] = "external"
    export_method: Literal["pci", "eigen"] = "pci"
    external_shares: Optional[Path] = None
    pci: Optional[Path] = None
    threshold: float = Field(1.0, gt=0)
    years: Optional[List[int]] = None
    reflections_iterations: int = Field(0, ge=0)
    dense_limit: int = Field(2000, ge=3)
    top_k: int = Field(5, ge=1)


class SeccionRelacion(Seccion):
    mode: Literal["industry", "export"] = "industry"
    activity_complexity: Literal["auto", "computed", "external"] = "auto"
    min_candidates: int = Field(3, ge=3)
    years: Optional[List[int]] = None
    write_density: bool = True


class SeccionEspacial(Seccion):
    adjacency: Optional[Path] = None
    indicators: List[str] = ["indeci", "eci"]
    neighbor_mode: Literal["propagate", "subset"] = "propagate"
    years: Optional[List[int]] = None


class EspecificacionConfig(Seccion):
    id: str
    regressors: List[str]


class SeccionRegresion(Seccion):
    horizons: List[int] = [2, 3, 4]
    estimators: List[Literal["system_gmm", "within_fe"]] = ["system_gmm", "within_fe"]
    two_step: bool = True
    collapse: bool = True
    max_lag_depth: int = Field(4, ge=2)
    predetermined_lags: int = Field(3, ge=1)
    lag_mode: Literal["nonoverlapping", "shift1"] = "nonoverlapping"
    specs: Union[Literal["auto"], List[EspecificacionConfig]] = "auto"
    correlation_years: Optional[List[int]] = None


class SeccionSintetico(Seccion):
    n_regions: int = Field(60, ge=3)
    n_activities: int = Field(40, ge=3)
    sub_regions_per_region: int = Field(2, ge=1)
    first_year: int = 2003
    n_years: int = Field(17, ge=2)
    model: Literal["nested", "random", "block"] = "nested"
    density: float = Field(0.3, gt=0, le=1)
    blocks: int = Field(2, ge=1)
    graph: Literal["grid", "cycle", "two_cliques"] = "grid"
    rho: float = 0.5
    beta: float = 0.05


class Settings(BaseSettings):
    """Configuración global y por comando."""

    log_level: str = "INFO"
    output_dir: Path = Path("resultados")
    workers: int = Field(1, ge=1)
    seed: int = 12345

    ingest: SeccionIngesta = SeccionIngesta()
    complexity: SeccionComplejidad = SeccionComplejidad()
    relatedness: SeccionRelacion = SeccionRelacion()
    spatial: SeccionEspacial = SeccionEspacial()
    regress: SeccionRegresion = SeccionRegresion()
    synth: SeccionSintetico = SeccionSintetico()

    model_config = {
        "env_prefix": "COMPLEJIDAD_",
        "env_nested_delimiter": "__",
        "case_sensitive": False,
        "extra": "forbid",
    }

    @field_validator("log_level")
    @classmethod
    def nivel_valido(cls, v: str) -> str:
        v = v.upper()
        if v not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"nivel de log desconocido: {v}")
        return v

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings, dotenv_settings,
                                   file_secret_settings) -> Tuple[PydanticBaseSettingsSource, ...]:
        return init_settings, env_settings, FuenteArchivoYaml(settings_cls)

    def hash(self) -> str:
        canonico = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonico.encode("utf-8")).hexdigest()

    def directorio(self, etapa: str) -> Path:
        return self.output_dir / etapa


class FuenteArchivoYaml(PydanticBaseSettingsSource):
    """Fuente de menor prioridad: el contenido ya leído del archivo YAML."""

    def get_field_value(self, field, field_name: str) -> Tuple[Any, str, bool]:
        return _datos_archivo.get().get(field_name), field_name, False

    def __call__(self) -> Dict[str, Any]:
        return {k: v for k, v in _datos_archivo.get().items() if k in self.settings_cls.model_fields}


def leer_yaml(ruta: Path) -> Dict[str, Any]:
    try:
        with open(ruta, encoding="utf-8") as f:
            datos = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise ConfiguracionInvalidaExcepcion([f"no existe el archivo de configuración {ruta}"])
    except yaml.YAMLError as e:
        raise ConfiguracionInvalidaExcepcion([f"{ruta}: YAML inválido ({e})"])
    if not isinstance(datos, dict):
        raise ConfiguracionInvalidaExcepcion([f"{ruta}: se esperaba un mapa de secciones"])
    return datos


def parsear_overrides(asignaciones: Iterable[str]) -> Dict[str, Any]:
    """Convierte `seccion.clave=valor` en un dict anidado; el valor se interpreta como escalar YAML."""
    resultado: Dict[str, Any] = {}
    problemas = []
    for asignacion in asignaciones:
        clave, sep, valor = asignacion.partition("=")
        if not sep or not clave.strip():
            problemas.append(f"--set '{asignacion}': se esperaba seccion.clave=valor")
            continue
        destino = resultado
        partes = clave.strip().split(".")
        for parte in partes[:-1]:
            destino = destino.setdefault(parte, {})
        try:
            destino[partes[-1]] = yaml.safe_load(valor)
        except yaml.YAMLError:
            problemas.append(f"--set '{asignacion}': valor no interpretable")
    if problemas:
        raise ConfiguracionInvalidaExcepcion(problemas)
    return resultado


def _resolver_rutas(modelo: BaseModel, base: Path):
    for nombre, valor in modelo:
        if isinstance(valor, Path) and not valor.is_absolute():
            setattr(modelo, nombre, (base / valor).resolve())
        elif isinstance(valor, BaseModel):
            _resolver_rutas(valor, base)


def cargar_configuracion(ruta: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """Lee el YAML (si hay), aplica entorno y overrides, y resuelve rutas relativas."""
    datos = leer_yaml(Path(ruta)) if ruta else {}
    base = Path(ruta).resolve().parent if ruta else Path.cwd()
    token = _datos_archivo.set(datos)
    try:
        settings = Settings(**(overrides or {}))
    except ValidationError as e:
        raise ConfiguracionInvalidaExcepcion(
            [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()])
    finally:
        _datos_archivo.reset(token)
    _resolver_rutas(settings, base)
    return settings


def _exigir_archivo(problemas: List[str], ruta: Optional[Path], clave: str, motivo: str = ""):
    if ruta is None:
        problemas.append(f"{clave}: requerido{motivo}")
    elif not Path(ruta).is_file():
        problemas.append(f"{clave}: no existe el archivo {ruta}")


def validar_para(settings: Settings, comandos: Iterable[str]):
    """
    Validación semántica de los comandos a ejecutar; reúne todos los problemas
    en una sola excepción. Los archivos producidos por etapas anteriores de la
    misma corrida no se exigen en disco.
    """
    comandos = [c for c in COMANDOS if c in set(comandos)]
    problemas: List[str] = []
    ing, cpx, rel, esp, reg = (settings.ingest, settings.complexity, settings.relatedness,
                               settings.spatial, settings.regress)
    previos = set()

    def producido(etapa: str, archivo: str, clave: str):
        if etapa not in previos and not (settings.directorio(etapa) / archivo).is_file():
            problemas.append(f"{clave}: falta {settings.directorio(etapa) / archivo}; ejecute `{etapa}` primero")

    for comando in comandos:
        if comando == "ingest":
            if ing.industry_intensity is None and ing.export_intensity is None:
                problemas.append("ingest: se requiere industry_intensity o export_intensity")
            for clave in ("industry_intensity", "export_intensity", "crosswalk", "gdp", "population", "price_index"):
                valor = getattr(ing, clave)
                if valor is not None:
                    _exigir_archivo(problemas, valor, f"ingest.{clave}")
            if ing.gdp is not None and not ing.gdp_per_capita:
                _exigir_archivo(problemas, ing.population, "ingest.population", " para calcular el PIB per cápita")
        elif comando == "complexity":
            for modo in cpx.modes:
                producido("ingest", f"intensity_{modo}.csv", f"complexity.modes[{modo}]")
            if "export" in cpx.modes:
                if cpx.export_method == "pci":
                    _exigir_archivo(problemas, cpx.pci, "complexity.pci", " con mode=export y export_method=pci")
                if cpx.export_baseline == "external":
                    _exigir_archivo(problemas, cpx.external_shares, "complexity.external_shares",
                                    " con export_baseline=external")
            if "industry" in cpx.modes and cpx.industry_baseline == "external":
                _exigir_archivo(problemas, cpx.external_shares, "complexity.external_shares",
                                " con industry_baseline=external")
            if len(set(cpx.modes)) != len(cpx.modes) or not cpx.modes:
                problemas.append("complexity.modes: lista vacía o con repetidos")
        elif comando == "relatedness":
            producido("ingest", f"intensity_{rel.mode}.csv", "relatedness.mode")
            fuente = rel.activity_complexity
            if fuente == "external" or (fuente == "auto" and rel.mode == "export" and cpx.export_method == "pci"):
                _exigir_archivo(problemas, cpx.pci, "complexity.pci", " para relatedness con complejidad externa")
            else:
                producido("complexity", "activities.csv", "relatedness.activity_complexity")
            producido("complexity", "indicators.csv", "relatedness")
            if rel.mode not in cpx.modes and "complexity" in previos:
                problemas.append(f"relatedness.mode: {rel.mode} no figura en complexity.modes")
            base = cpx.industry_baseline if rel.mode == "industry" else cpx.export_baseline
            if base == "external":
                _exigir_archivo(problemas, cpx.external_shares, "complexity.external_shares", " para relatedness")
        elif comando == "spatial":
            _exigir_archivo(problemas, esp.adjacency, "spatial.adjacency")
            producido("complexity", "indicators.csv", "spatial.indicators")
            desconocidos = sorted(set(esp.indicators) - {"indeci", "eci"})
            if desconocidos:
                problemas.append(f"spatial.indicators: indicadores desconocidos {desconocidos}")
        elif comando == "regress":
            fuera = sorted(set(reg.horizons) - {2, 3, 4})
            if fuera or not reg.horizons:
                problemas.append(f"regress.horizons: sólo se admiten 2, 3 y 4 (recibido {reg.horizons})")
            if not reg.estimators:
                problemas.append("regress.estimators: lista vacía")
            producido("ingest", "gdppc.csv", "regress")
            disponibles = _indicadores_disponibles(settings)
            if reg.specs != "auto":
                ids = [s.id for s in reg.specs]
                if len(set(ids)) != len(ids):
                    problemas.append("regress.specs: identificadores repetidos")
                for spec in reg.specs:
                    ausentes = [r for r in spec.regressors if r not in disponibles]
                    if ausentes:
                        problemas.append(f"regress.specs[{spec.id}]: indicadores ausentes {ausentes}")
        previos.add(comando)

    if problemas:
        raise ConfiguracionInvalidaExcepcion(list(dict.fromkeys(problemas)))


def _indicadores_disponibles(settings: Settings) -> List[str]:
    """Indicadores que las etapas configuradas pueden producir."""
    disponibles = ["log_gdppc"]
    if settings.ingest.population is not None or (settings.directorio("ingest") / "population.csv").is_file():
        disponibles.append("log_population")
    modos = settings.complexity.modes
    if "industry" in modos:
        disponibles.append("indeci")
    if "export" in modos:
        disponibles.append("eci")
    if settings.spatial.adjacency is not None:
        disponibles += [f"{n}_n" for n in disponibles if n in ("indeci", "eci")]
    return disponibles


def configurar_logging(nivel: str):
    logging.basicConfig(level=getattr(logging, nivel.upper(), logging.INFO), format=FORMATO_LOG, force=True)
