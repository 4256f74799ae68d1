"""
Problema de autovalores de la proyección región–región M̂ = D⁻¹ M U⁻¹ Mᵀ.

M̂ es estocástica por filas y semejante a una matriz simétrica semidefinida
positiva, así que su espectro es real y no negativo; el autovalor principal
es 1 con autovector constante. El autovector del segundo autovalor es K.
"""
import logging
from typing import Tuple

import numpy as np
from scipy import sparse

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion, FallaNumericaExcepcion
from ...datos.dominio.entidades import SpecializationMatrix

logger = logging.getLogger(__name__)

TOLERANCIA_IMAGINARIA = 1e-8
TOLERANCIA_BRECHA = 1e-10
TOLERANCIA_POTENCIA = 1e-12
MAX_ITERACIONES_POTENCIA = 10_000


def _marginales(M: SpecializationMatrix) -> Tuple[np.ndarray, np.ndarray]:
    d = M.diversity.astype(np.float64)
    u = M.ubiquity.astype(np.float64)
    if (d == 0).any() or (u == 0).any():
        raise DatosInvalidosExcepcion(
            f"M̂ requiere diversidad y ubicuidad positivas ({int((d == 0).sum())} filas y "
            f"{int((u == 0).sum())} columnas nulas); pode la matriz primero", codigo="prune_required")
    return d, u


def build_mhat(M: SpecializationMatrix) -> np.ndarray:
    """M̂_{r,r'} = Σ_i M_{r,i} M_{r',i} / (M_{r,*} M_{*,i})."""
    d, u = _marginales(M)
    E = M.entries.astype(np.float64)
    return (E / d[:, None]) @ (E / u[None, :]).T


def segundo_autovector_denso(mhat: np.ndarray) -> Tuple[np.ndarray, Tuple[float, ...]]:
    """Descomposición completa; autovalores ordenados por parte real descendente."""
    w, V = np.linalg.eig(mhat)
    orden = np.argsort(-w.real, kind="stable")
    w, V = w[orden], V[:, orden]
    if np.abs(w[:2].imag).max() > TOLERANCIA_IMAGINARIA:
        raise FallaNumericaExcepcion(
            f"Los dos autovalores principales no son reales: {w[:2]}", codigo="complex_spectrum")
    if np.abs(V[:, 1].imag).max() > TOLERANCIA_IMAGINARIA:
        raise FallaNumericaExcepcion("El segundo autovector no es real", codigo="complex_spectrum")
    principales = tuple(float(x) for x in w[:3].real) + (np.nan,) * max(0, 3 - len(w))
    return V[:, 1].real.copy(), principales


def segundo_autovector_potencia(M: SpecializationMatrix, tolerancia: float = TOLERANCIA_POTENCIA,
                                max_iteraciones: int = MAX_ITERACIONES_POTENCIA) -> Tuple[np.ndarray, Tuple[float, ...]]:
    """
    Iteración de potencia sobre B = M̂ − 1πᵀ, con π = d / Σd el autovector
    izquierdo principal. B conserva el resto del espectro y anula el par
    principal, de modo que su autovector dominante es K. M̂ nunca se forma:
    se aplica como D⁻¹ M U⁻¹ Mᵀ con matrices dispersas.
    """
    d, u = _marginales(M)
    E = sparse.csr_matrix(M.entries.astype(np.float64))
    Et = E.T.tocsr()
    pi = d / d.sum()

    def aplicar(v: np.ndarray) -> np.ndarray:
        mv = (E @ ((Et @ v) / u)) / d
        return mv - pi @ v

    n = len(d)
    v = d + np.arange(n, dtype=np.float64) / n
    v = aplicar(v)
    v /= np.linalg.norm(v)
    for iteracion in range(1, max_iteraciones + 1):
        w = aplicar(v)
        norma = np.linalg.norm(w)
        if norma == 0:
            raise FallaNumericaExcepcion("M̂ no tiene segundo autovalor no nulo", codigo="degenerate_system")
        w /= norma
        if np.linalg.norm(w - v) < tolerancia:
            lam2 = float(v @ aplicar(v))
            logger.debug(f"Iteración de potencia convergió en {iteracion} pasos (λ2={lam2:.6g})")
            return w, (1.0, lam2, np.nan)
        v = w
    raise FallaNumericaExcepcion(
        f"La iteración de potencia no convergió en {max_iteraciones} pasos", codigo="no_convergence")


def eigengap(M: SpecializationMatrix) -> Tuple[float, float, float]:
    """(λ1, λ2, λ3) de M̂ por descomposición densa."""
    _, principales = segundo_autovector_denso(build_mhat(M))
    return principales
