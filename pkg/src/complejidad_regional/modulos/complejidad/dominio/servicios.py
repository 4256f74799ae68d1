import logging
from dataclasses import dataclass
from typing import Dict, List, Literal, Mapping, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion, FallaNumericaExcepcion
from ....seedwork.infraestructura.paralelo import mapear_ordenado
from ...datos.dominio.entidades import ActivityPanel, SpecializationMatrix
from ...rca.dominio.objetos_valor import Baseline
from ...rca.dominio.servicios import binarize, rca
from .autovalores import TOLERANCIA_BRECHA, build_mhat, segundo_autovector_denso, segundo_autovector_potencia
from .objetos_valor import ComplexityResult, ResultadoReflexiones

logger = logging.getLogger(__name__)

SIN_ESPECIALIZACIONES = "no specializations"
SIN_DATOS = "no data"
UBICUIDAD_NULA = "zero ubiquity"
DESCONECTADA = "disconnected"
MINIMO_ENTIDADES = 3
LIMITE_DENSO = 2000


@dataclass
class MatrizPreparada:
    M: SpecializationMatrix
    dropped_regions: List[Tuple[str, str]]
    dropped_activities: List[Tuple[str, str]]


def estandarizar(v: np.ndarray, nombre: str = "puntajes") -> np.ndarray:
    """(v − media) / desviación poblacional."""
    desviacion = v.std()
    if not desviacion > 0 or desviacion < 1e-12 * max(1.0, np.abs(v).max()):
        raise FallaNumericaExcepcion(f"Los {nombre} no varían: no se pueden estandarizar",
                                     codigo="degenerate_system")
    return (v - v.mean()) / desviacion


def preparar(M: SpecializationMatrix, pesos_region: Optional[Mapping[str, float]] = None) -> MatrizPreparada:
    """
    Poda iterativa de filas/columnas nulas y restricción a la mayor componente
    conexa del grafo bipartito región–actividad (por número de regiones; empates
    por peso total y luego por la primera región).
    """
    filas = np.ones(len(M.regions), dtype=bool)
    columnas = np.ones(len(M.activities), dtype=bool)
    descartes_r, descartes_a = [], []
    E = M.entries
    while True:
        sub = E[np.ix_(filas, columnas)]
        nulas_r = np.flatnonzero(filas)[sub.sum(axis=1) == 0]
        nulas_a = np.flatnonzero(columnas)[sub.sum(axis=0) == 0]
        if not len(nulas_r) and not len(nulas_a):
            break
        for i in nulas_r:
            region = M.regions[i]
            descartes_r.append((region, SIN_DATOS if region in M.sin_datos else SIN_ESPECIALIZACIONES))
        descartes_a.extend((M.activities[j], UBICUIDAD_NULA) for j in nulas_a)
        filas[nulas_r] = False
        columnas[nulas_a] = False

    idx_r, idx_a = np.flatnonzero(filas), np.flatnonzero(columnas)
    if len(idx_r):
        sub = sparse.csr_matrix(E[np.ix_(idx_r, idx_a)])
        n_r = len(idx_r)
        bipartito = sparse.bmat([[None, sub], [sub.T, None]], format="csr")
        n_comp, etiquetas = connected_components(bipartito, directed=False)
        if n_comp > 1:
            etiquetas_r = etiquetas[:n_r]
            def clave(c):
                miembros = np.flatnonzero(etiquetas_r == c)
                peso = sum(pesos_region.get(M.regions[idx_r[i]], 0.0) for i in miembros) if pesos_region else 0.0
                return (-len(miembros), -peso, miembros.min() if len(miembros) else n_r)
            elegida = min(range(n_comp), key=clave)
            fuera_r = etiquetas_r != elegida
            fuera_a = etiquetas[n_r:] != elegida
            descartes_r.extend((M.regions[i], DESCONECTADA) for i in idx_r[fuera_r])
            descartes_a.extend((M.activities[j], DESCONECTADA) for j in idx_a[fuera_a])
            logger.info(f"{M.year}: {n_comp} componentes conexas; se descartan {int(fuera_r.sum())} regiones "
                        f"y {int(fuera_a.sum())} actividades desconectadas")
            idx_r, idx_a = idx_r[~fuera_r], idx_a[~fuera_a]

    if len(idx_r) < MINIMO_ENTIDADES or len(idx_a) < MINIMO_ENTIDADES:
        raise FallaNumericaExcepcion(
            f"{M.year}: quedan {len(idx_r)} regiones y {len(idx_a)} actividades tras la poda "
            f"(mínimo {MINIMO_ENTIDADES})", codigo="degenerate_system")
    if descartes_r or descartes_a:
        logger.info(f"{M.year}: poda descarta {len(descartes_r)} regiones y {len(descartes_a)} actividades")
    return MatrizPreparada(M.subconjunto(idx_r, idx_a), descartes_r, descartes_a)


def _fijar_signo(K: np.ndarray, diversidad: np.ndarray) -> np.ndarray:
    """corr(K, diversidad) ≥ 0; con diversidad constante, la mayor componente en valor absoluto es positiva."""
    if diversidad.std() > 0:
        if np.corrcoef(K, diversidad)[0, 1] < 0:
            return -K
        return K
    return -K if K[np.argmax(np.abs(K))] < 0 else K


def eci_from_external(M: SpecializationMatrix, pci: Mapping[str, float]) -> ComplexityResult:
    """ECI_r = promedio de PCI sobre las especializaciones de r, estandarizado sobre las regiones incluidas."""
    incluidas = M.diversity > 0
    usadas = M.entries[incluidas].any(axis=0)
    faltantes = [a for a, usada in zip(M.activities, usadas) if usada and a not in pci]
    if faltantes:
        raise DatosInvalidosExcepcion(
            f"PCI ausente en {M.year} para: {', '.join(faltantes[:20])}", codigo="pci_ausente",
            detalles={"actividades": faltantes, "anio": M.year})
    vector = np.array([pci.get(a, 0.0) if u else 0.0 for a, u in zip(M.activities, usadas)], dtype=np.float64)
    E = M.entries[incluidas].astype(np.float64)
    crudo = (E @ vector) / M.diversity[incluidas]
    regiones = [r for r, inc in zip(M.regions, incluidas) if inc]
    descartes = [(r, SIN_DATOS if r in M.sin_datos else SIN_ESPECIALIZACIONES)
                 for r, inc in zip(M.regions, incluidas) if not inc]
    if len(regiones) < 2:
        raise FallaNumericaExcepcion(f"{M.year}: menos de dos regiones con especializaciones",
                                     codigo="degenerate_system")
    puntajes = estandarizar(crudo, "ECI")
    logger.info(f"ECI {M.year}: {len(regiones)} regiones, {len(descartes)} descartadas")
    return ComplexityResult(
        year=M.year, region_scores=dict(zip(regiones, puntajes)), raw_region=dict(zip(regiones, crudo)),
        dropped_regions=tuple(descartes),
    )


def eigen_complexity(M: SpecializationMatrix, pesos_region: Optional[Mapping[str, float]] = None,
                     dense_limit: int = LIMITE_DENSO) -> ComplexityResult:
    """
    IndECI/ICI por el segundo autovector de M̂.

    Q se obtiene promediando K sobre las regiones especializadas en cada
    actividad, Q_i = (1/M_{*,i}) Σ_r M_{r,i} K_r.
    """
    prep = preparar(M, pesos_region)
    sub = prep.M
    if len(sub.regions) < dense_limit:
        K, autovalores = segundo_autovector_denso(build_mhat(sub))
    else:
        logger.info(f"{sub.year}: {len(sub.regions)} regiones; se usa iteración de potencia")
        K, autovalores = segundo_autovector_potencia(sub)
    l2, l3 = autovalores[1], autovalores[2]
    if np.isfinite(l3) and abs(l2 - l3) < TOLERANCIA_BRECHA:
        raise FallaNumericaExcepcion(
            f"{sub.year}: segundo autovalor no separado (λ2={l2:.3g}, λ3={l3:.3g})", codigo="degenerate_system")
    diversidad = sub.diversity.astype(np.float64)
    K = _fijar_signo(K, diversidad)
    Q = (sub.entries.T.astype(np.float64) @ K) / sub.ubiquity
    logger.info(f"{sub.year}: λ = {', '.join(f'{x:.6g}' for x in autovalores)}")
    return ComplexityResult(
        year=sub.year,
        region_scores=dict(zip(sub.regions, estandarizar(K, "K"))),
        activity_scores=dict(zip(sub.activities, estandarizar(Q, "Q"))),
        raw_region=dict(zip(sub.regions, K)), raw_activity=dict(zip(sub.activities, Q)),
        dropped_regions=tuple(prep.dropped_regions), dropped_activities=tuple(prep.dropped_activities),
        eigenvalues=autovalores,
    )


def _estandarizar_o_centrar(v: np.ndarray) -> np.ndarray:
    desviacion = v.std()
    return (v - v.mean()) / desviacion if desviacion > 1e-15 else v - v.mean()


def reflections(M: SpecializationMatrix, iterations: int) -> ResultadoReflexiones:
    """
    k^(0) = diversidad, q^(0) = ubicuidad; k^(n) promedia q^(n−1) y viceversa, reestandarizando cada paso.

    Desde n = 1 cada k^(n) sigue la convención de signo de eigen_complexity
    (corr(k, diversidad) ≥ 0) y cada q^(n) se orienta con el promedio de k^(n)
    sobre las regiones especializadas.
    """
    if iterations < 0:
        raise DatosInvalidosExcepcion("El número de iteraciones debe ser no negativo", codigo="iteraciones_invalidas")
    prep = preparar(M)
    sub = prep.M
    E = sub.entries.astype(np.float64)
    d, u = sub.diversity.astype(np.float64), sub.ubiquity.astype(np.float64)
    k = np.empty((iterations + 1, len(d)))
    q = np.empty((iterations + 1, len(u)))
    k[0], q[0] = _estandarizar_o_centrar(d), _estandarizar_o_centrar(u)
    for n in range(1, iterations + 1):
        k[n] = _fijar_signo(_estandarizar_o_centrar((E @ q[n - 1]) / d), d)
        q[n] = _fijar_signo(_estandarizar_o_centrar((E.T @ k[n - 1]) / u), (E.T @ k[n]) / u)
    k.setflags(write=False)
    q.setflags(write=False)
    return ResultadoReflexiones(
        year=sub.year, regions=sub.regions, activities=sub.activities, k=k, q=q,
        dropped_regions=tuple(sorted(prep.dropped_regions)),
        dropped_activities=tuple(sorted(prep.dropped_activities)),
    )


def complexity_panel(panel: ActivityPanel, baseline: Baseline, years: List[int],
                     method: Literal["eigen", "pci"] = "eigen",
                     pci: Optional[Mapping[Tuple[str, int], float]] = None, threshold: float = 1.0,
                     dense_limit: int = LIMITE_DENSO, workers: int = 1) -> List[ComplexityResult]:
    """Un ComplexityResult por año, en orden de año; los años se procesan en paralelo."""
    if method == "pci" and pci is None:
        raise DatosInvalidosExcepcion("El método pci requiere un archivo PCI", codigo="pci_ausente")
    faltantes = sorted(set(years) - set(panel.years))
    if faltantes:
        raise DatosInvalidosExcepcion(f"Años ausentes del panel: {faltantes}", codigo="anio_ausente")

    def por_anio(year: int) -> ComplexityResult:
        M = binarize(rca(panel, baseline, year), threshold)
        if method == "pci":
            pci_anio: Dict[str, float] = {a: v for (a, t), v in pci.items() if t == year}
            return eci_from_external(M, pci_anio)
        X = panel.matriz(year)
        pesos = dict(zip(panel.regions, X.sum(axis=1)))
        return eigen_complexity(M, pesos, dense_limit)

    return mapear_ordenado(por_anio, sorted(years), workers)
