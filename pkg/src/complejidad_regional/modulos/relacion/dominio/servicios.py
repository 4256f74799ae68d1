import logging
from typing import Mapping

import numpy as np

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ...datos.dominio.entidades import SpecializationMatrix, ValoresRegionales
from .objetos_valor import DensityMatrix, ProximityMatrix

logger = logging.getLogger(__name__)

MINIMO_CANDIDATAS = 3
POCAS_CANDIDATAS = "few candidates"
SIN_VARIANZA = "zero variance"


def proximity(M: SpecializationMatrix) -> ProximityMatrix:
    """φ_{ij} = C_{ij} / max(u_i, u_j): mínimo de las dos probabilidades condicionales de co-especialización."""
    E = M.entries.astype(np.float64)
    C = E.T @ E
    u = M.ubiquity.astype(np.float64)
    denominador = np.maximum.outer(u, u)
    phi = np.divide(C, denominador, out=np.zeros_like(C), where=denominador > 0)
    return ProximityMatrix(activities=M.activities, phi=phi, ubiquity=M.ubiquity, year=M.year)


def density(M: SpecializationMatrix, phi: ProximityMatrix) -> DensityMatrix:
    """ω_{r,i} = Σ_{i'} M_{r,i'} φ_{i,i'} / Σ_{i'} φ_{i,i'}; indefinida si el denominador es cero."""
    if tuple(phi.activities) != tuple(M.activities):
        raise DatosInvalidosExcepcion("φ y M no comparten el mismo conjunto de actividades",
                                      codigo="actividades_inconsistentes")
    numerador = M.entries.astype(np.float64) @ phi.phi.T
    denominador = phi.phi.sum(axis=1)
    omega = np.full(numerador.shape, np.nan)
    definidas = denominador > 0
    omega[:, definidas] = numerador[:, definidas] / denominador[definidas]
    # Redondeo: el cociente puede exceder 1 en el último ulp.
    np.clip(omega, 0.0, 1.0, out=omega)
    return DensityMatrix(regions=M.regions, activities=M.activities, omega=omega, year=M.year)


def closeness_to_complexity(M: SpecializationMatrix, omega: DensityMatrix,
                            activity_complexity: Mapping[str, float],
                            min_candidates: int = MINIMO_CANDIDATAS) -> ValoresRegionales:
    """Pearson entre ω_{r,·} y la complejidad sobre las actividades en que r aún no está especializada."""
    faltantes = [a for a in M.activities if a not in activity_complexity]
    if faltantes:
        raise DatosInvalidosExcepcion(
            f"Complejidad ausente para {len(faltantes)} actividades: {', '.join(faltantes[:20])}",
            codigo="complejidad_ausente", detalles={"actividades": faltantes})
    if tuple(omega.activities) != tuple(M.activities) or tuple(omega.regions) != tuple(M.regions):
        raise DatosInvalidosExcepcion("ω y M no comparten regiones y actividades", codigo="actividades_inconsistentes")
    complejidad = np.array([activity_complexity[a] for a in M.activities], dtype=np.float64)

    valores, indefinidos = {}, {}
    for r, region in enumerate(M.regions):
        candidatas = (M.entries[r] == 0) & ~np.isnan(omega.omega[r])
        if candidatas.sum() < min_candidates:
            indefinidos[region] = POCAS_CANDIDATAS
            continue
        w, c = omega.omega[r, candidatas], complejidad[candidatas]
        if w.std() == 0 or c.std() == 0:
            indefinidos[region] = SIN_VARIANZA
            continue
        valores[region] = float(np.clip(np.corrcoef(w, c)[0, 1], -1.0, 1.0))
    if indefinidos:
        logger.info(f"Cercanía {M.year}: {len(indefinidos)} regiones indefinidas")
    return ValoresRegionales(valores=valores, indefinidos=indefinidos)
