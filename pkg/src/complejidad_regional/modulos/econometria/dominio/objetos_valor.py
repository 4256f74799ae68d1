from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Literal, Mapping, Optional, Tuple

import pandas as pd

from ....seedwork.dominio.objetos_valor import ObjetoValor
from ....seedwork.dominio.reglas import IdentificadoresUnicos
from .reglas import (ErroresEstandarValidos, HorizontePositivo, InstrumentosMenosQueRegiones,
                     ProbabilidadesEnUnitario)

DENTRO_EF = "within-FE"
GMM_UN_PASO = "system-GMM one-step"
GMM_DOS_PASOS = "system-GMM two-step"

Estimador = Literal["within-FE", "system-GMM one-step", "system-GMM two-step"]
Prueba = Tuple[float, float]


@dataclass(frozen=True)
class PanelSpec(ObjetoValor):
    """Una columna de la tabla de regresión: dependiente, regresores y horizonte."""
    dependent: str = "growth"
    regressors: Tuple[str, ...] = ()
    include_lagged_dependent: bool = True
    horizon: int = 3
    fixed_effects: Tuple[str, ...] = ("region", "year")
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "regressors", tuple(self.regressors))
        object.__setattr__(self, "fixed_effects", tuple(self.fixed_effects))
        super().__post_init__()

    def validar(self):
        self.validar_regla(HorizontePositivo(self.horizon))
        self.validar_regla(IdentificadoresUnicos(self.regressors, "regresores"))

    @property
    def columna_rezago(self) -> str:
        return f"lag_{self.dependent}"

    @property
    def terminos(self) -> Tuple[str, ...]:
        """Columnas explicativas en el orden de la tabla."""
        rezago = (self.columna_rezago,) if self.include_lagged_dependent else ()
        return rezago + self.regressors


@dataclass(frozen=True, eq=False)
class PanelRegresion:
    """
    Tabla (region, year, dependiente, rezago, regresores) tras la eliminación por
    lista, con el registro de filas eliminadas (`region,year,reason`).
    `paso_rezago` es la distancia en años entre una fila y su rezago.
    """
    spec: PanelSpec
    tabla: pd.DataFrame
    eliminaciones: pd.DataFrame
    paso_rezago: int

    @property
    def n_regiones(self) -> int:
        return int(self.tabla["region"].nunique())


@dataclass(frozen=True)
class OpcionesGMM:
    two_step: bool = True
    collapse: bool = True
    max_lag_depth: int = 4
    predetermined_lags: int = 3
    # Regresores estrictamente exógenos: se instrumentan a sí mismos.
    exogenous: Tuple[str, ...] = ()
    # Columnas de la tabla usadas sólo como instrumentos adicionales (Δz en diferencias, z en niveles).
    extra_instruments: Tuple[str, ...] = ()
    year_dummies: bool = True


@dataclass(frozen=True)
class PanelModelResult(ObjetoValor):
    estimator: Estimador
    coefficients: Mapping[str, Tuple[float, float]]
    n_obs: int
    n_regions: int
    n_instruments: int = 0
    p_values: Mapping[str, float] = field(default_factory=dict)
    sargan: Optional[Tuple[float, int, float]] = None
    ar1_test: Optional[Prueba] = None
    ar2_test: Optional[Prueba] = None
    windmeijer: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coefficients", MappingProxyType(
            {k: (float(b), float(se)) for k, (b, se) in self.coefficients.items()}))
        object.__setattr__(self, "p_values", MappingProxyType(dict(self.p_values)))
        super().__post_init__()

    def validar(self):
        self.validar_regla(ErroresEstandarValidos(self.coefficients))
        pruebas = [self.sargan[2] if self.sargan else None,
                   self.ar1_test[1] if self.ar1_test else None,
                   self.ar2_test[1] if self.ar2_test else None]
        self.validar_regla(ProbabilidadesEnUnitario(list(self.p_values.values()) + pruebas))
        self.validar_regla(InstrumentosMenosQueRegiones(self.n_instruments, self.n_regions))

    def estimate(self, termino: str) -> float:
        return self.coefficients[termino][0]

    def std_error(self, termino: str) -> float:
        return self.coefficients[termino][1]
