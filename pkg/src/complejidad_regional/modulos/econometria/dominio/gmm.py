"""
GMM de sistema para paneles dinámicos.

Cada individuo es un par (región, fase): con rezago de `paso` años las filas
de una misma fase quedan separadas exactamente por un periodo τ. Las
ecuaciones en diferencias y en niveles se apilan; los momentos y los pesos
de dos pasos se agrupan por región.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import sparse

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion, FallaNumericaExcepcion
from .objetos_valor import GMM_DOS_PASOS, GMM_UN_PASO, OpcionesGMM, PanelModelResult, PanelRegresion
from .pruebas import p_valor_chi2, p_valor_normal, p_valor_z

logger = logging.getLogger(__name__)

DIFERENCIAS = 0
NIVELES = 1
PERIODOS_MINIMOS = 4
CONSTANTE = "const"


@dataclass(eq=False)
class InternosGMM:
    """Sistema apilado y estimaciones intermedias; base de las pruebas de Sargan y Arellano–Bond."""
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    ecuacion: np.ndarray
    individuo: np.ndarray
    tau: np.ndarray
    cluster: np.ndarray
    nombres: List[str]
    W1: np.ndarray
    beta1: np.ndarray
    two_step: bool
    W2: Optional[np.ndarray] = None
    beta2: Optional[np.ndarray] = None

    @property
    def n_instrumentos(self) -> int:
        return self.Z.shape[1]

    @property
    def n_parametros(self) -> int:
        return self.X.shape[1]

    @property
    def n_regiones(self) -> int:
        return int(self.cluster.max()) + 1

    @property
    def beta(self) -> np.ndarray:
        return self.beta2 if self.two_step else self.beta1

    @property
    def W(self) -> np.ndarray:
        return self.W2 if self.two_step else self.W1

    def residuos(self, beta: Optional[np.ndarray] = None) -> np.ndarray:
        return self.y - self.X @ (self.beta if beta is None else beta)

    def momentos_por_region(self, u: np.ndarray) -> np.ndarray:
        """G[c] = Σ_{filas de c} Z_i u_i."""
        G = np.zeros((self.n_regiones, self.n_instrumentos))
        np.add.at(G, self.cluster, self.Z * u[:, None])
        return G

    def pasar_a_dos_pasos(self):
        if self.W2 is None:
            G = self.momentos_por_region(self.residuos(self.beta1))
            self.W2 = _invertir_pesos(G.T @ G)
            self.beta2 = _resolver(self.X, self.y, self.Z, self.W2)


def _invertir_pesos(A: np.ndarray) -> np.ndarray:
    if np.linalg.matrix_rank(A) < A.shape[0]:
        raise FallaNumericaExcepcion(
            f"Matriz de ponderación singular ({A.shape[0]} instrumentos, rango {np.linalg.matrix_rank(A)})",
            codigo="singular_weighting_matrix")
    return np.linalg.inv(A)


def _resolver(X: np.ndarray, y: np.ndarray, Z: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Minimizador cerrado de (Z'(y − Xβ))' W (Z'(y − Xβ))."""
    ZX, Zy = Z.T @ X, Z.T @ y
    M = ZX.T @ W @ ZX
    if np.linalg.matrix_rank(M) < M.shape[0]:
        raise FallaNumericaExcepcion("X'Z W Z'X no es invertible: regresores no identificados",
                                     codigo="rank_deficient")
    return np.linalg.solve(M, ZX.T @ W @ Zy)


def _rezagar(claves: pd.DataFrame, fuente: pd.DataFrame, s: int) -> pd.DataFrame:
    """Valores de `fuente` en (individuo, τ − s) para cada fila de `claves`; NaN si no existen."""
    desplazada = fuente.assign(tau=fuente["tau"] + s)
    return claves.merge(desplazada, on=["individuo", "tau"], how="left").drop(columns=["individuo", "tau"])


def _expandir_por_periodo(columna: np.ndarray, tau: np.ndarray) -> List[np.ndarray]:
    return [np.where(tau == p, columna, 0.0) for p in np.unique(tau[columna != 0])]


def _matriz_h(individuo: np.ndarray, tau: np.ndarray, ecuacion: np.ndarray) -> sparse.csr_matrix:
    """2 en la diagonal de diferencias con −1 entre periodos consecutivos del individuo; identidad en niveles."""
    n = len(individuo)
    diagonal = np.where(ecuacion == DIFERENCIAS, 2.0, 1.0)
    filas = pd.DataFrame({"fila": np.arange(n), "individuo": individuo, "tau": tau})
    diferencias = filas.loc[ecuacion == DIFERENCIAS]
    previas = diferencias.assign(tau=diferencias["tau"] + 1)
    pares = diferencias.merge(previas, on=["individuo", "tau"], suffixes=("", "_previa"))
    i, j = pares["fila"].to_numpy(), pares["fila_previa"].to_numpy()
    datos = np.concatenate([diagonal, -np.ones(2 * len(i))])
    return sparse.coo_matrix((datos, (np.concatenate([np.arange(n), i, j]),
                                      np.concatenate([np.arange(n), j, i]))), shape=(n, n)).tocsr()


def construir_sistema(panel: PanelRegresion, opciones: OpcionesGMM) -> InternosGMM:
    spec = panel.spec
    if not spec.include_lagged_dependent:
        raise DatosInvalidosExcepcion(f"GMM de sistema requiere la dependiente rezagada ({spec.id})",
                                      codigo="sin_rezago")
    t = panel.tabla
    dep, rez = spec.dependent, spec.columna_rezago
    regresores = list(spec.regressors)
    extra = list(opciones.extra_instruments)
    faltan = [c for c in list(opciones.exogenous) + extra if c not in t.columns]
    if faltan:
        raise DatosInvalidosExcepcion(f"Columnas de instrumentos ausentes del panel: {faltan}",
                                      codigo="indicador_ausente")
    predeterminados = [r for r in regresores if r not in opciones.exogenous]

    desfase = (t["year"] - t["year"].min()).to_numpy()
    fase = desfase % panel.paso_rezago
    tau = desfase // panel.paso_rezago
    claves = pd.DataFrame({"region": t["region"].to_numpy(), "fase": fase})
    individuo = claves.groupby(["region", "fase"], sort=True).ngroup().to_numpy()
    cluster = pd.factorize(t["region"], sort=True)[0]
    periodos = len(np.unique(tau)) + 1
    if periodos < PERIODOS_MINIMOS:
        raise DatosInvalidosExcepcion(
            f"GMM de sistema {spec.id}: {periodos} periodos utilizables (mínimo {PERIODOS_MINIMOS})",
            codigo="periodos_insuficientes")

    base = pd.DataFrame({"individuo": individuo, "tau": tau})
    # Serie completa de la dependiente: las filas aportan τ y su rezago aporta τ − 1.
    serie = pd.concat([
        base.assign(v=t[dep].to_numpy()),
        base.assign(tau=tau - 1, v=t[rez].to_numpy()),
    ]).drop_duplicates(["individuo", "tau"])
    D = {s: _rezagar(base, serie, s)["v"].to_numpy() for s in range(1, max(opciones.max_lag_depth, 2) + 1)}
    columnas = [dep, rez] + regresores + extra
    fuente = base.assign(**{c: t[c].to_numpy(np.float64) for c in columnas})
    previa = _rezagar(base, fuente, 1)
    dif = previa[dep].notna().to_numpy()
    cuenta = {s: _rezagar(base, fuente, s) for s in range(2, opciones.predetermined_lags + 1)}
    actual = {c: t[c].to_numpy(np.float64) for c in columnas}
    anterior = {c: previa[c].to_numpy() for c in columnas}

    anios = np.sort(t["year"].unique())[1:] if opciones.year_dummies else np.array([], dtype=np.int64)
    year = t["year"].to_numpy()
    dummies = (year[:, None] == anios[None, :]).astype(np.float64)
    dummies_previas = ((year - panel.paso_rezago)[:, None] == anios[None, :]).astype(np.float64)

    nombres = [rez] + regresores + [f"year_{a}" for a in anios] + [CONSTANTE]
    n = len(t)
    X_niv = np.column_stack([actual[rez]] + [actual[r] for r in regresores] + [dummies, np.ones(n)])
    X_dif = np.column_stack([actual[rez] - anterior[rez]] + [actual[r] - anterior[r] for r in regresores]
                            + [dummies - dummies_previas, np.zeros(n)])[dif]
    y_niv = actual[dep]
    y_dif = (actual[dep] - anterior[dep])[dif]

    # (columna en filas de diferencias, columna en filas de niveles, estilo GMM)
    instrumentos: List[Tuple[np.ndarray, np.ndarray, bool]] = []
    ceros_d, ceros_n = np.zeros(int(dif.sum())), np.zeros(n)
    for s in range(2, opciones.max_lag_depth + 1):
        instrumentos.append((D[s][dif], ceros_n, True))
    for r in predeterminados:
        for s in range(1, opciones.predetermined_lags + 1):
            valores = anterior[r] if s == 1 else cuenta[s][r].to_numpy()
            instrumentos.append((valores[dif], ceros_n, True))
    instrumentos.append((ceros_d, D[1] - D[2], True))
    for r in predeterminados:
        instrumentos.append((ceros_d, actual[r] - anterior[r], True))
    for c in [r for r in regresores if r in opciones.exogenous] + extra:
        instrumentos.append(((actual[c] - anterior[c])[dif], actual[c], False))
    for j in range(len(anios)):
        instrumentos.append(((dummies - dummies_previas)[dif, j], dummies[:, j], False))
    instrumentos.append((ceros_d, np.ones(n), False))

    tau_apilado = np.concatenate([tau[dif], tau])
    columnas_z = []
    for en_dif, en_niv, estilo_gmm in instrumentos:
        columna = np.nan_to_num(np.concatenate([en_dif, en_niv]), nan=0.0)
        if estilo_gmm and not opciones.collapse:
            columnas_z.extend(_expandir_por_periodo(columna, tau_apilado))
        else:
            columnas_z.append(columna)
    Z = np.column_stack(columnas_z)
    Z = Z[:, np.any(Z != 0, axis=0)]

    ecuacion = np.concatenate([np.full(int(dif.sum()), DIFERENCIAS), np.full(n, NIVELES)])
    individuo_apilado = np.concatenate([individuo[dif], individuo])
    cluster_apilado = np.concatenate([cluster[dif], cluster])
    X = np.vstack([X_dif, X_niv])
    y = np.concatenate([y_dif, y_niv])
    n_regiones = int(cluster.max()) + 1

    if Z.shape[1] >= n_regiones:
        raise FallaNumericaExcepcion(
            f"Proliferación de instrumentos en {spec.id}: {Z.shape[1]} instrumentos para {n_regiones} regiones; "
            f"active collapse o reduzca max_lag_depth", codigo="instrument_proliferation",
            detalles={"instrumentos": Z.shape[1], "regiones": n_regiones})
    if Z.shape[1] < X.shape[1]:
        raise FallaNumericaExcepcion(
            f"{spec.id}: {Z.shape[1]} instrumentos para {X.shape[1]} parámetros", codigo="not_identified")

    H = _matriz_h(individuo_apilado, tau_apilado, ecuacion)
    W1 = _invertir_pesos(Z.T @ (H @ Z))
    beta1 = _resolver(X, y, Z, W1)
    return InternosGMM(X=X, y=y, Z=Z, ecuacion=ecuacion, individuo=individuo_apilado, tau=tau_apilado,
                       cluster=cluster_apilado, nombres=nombres, W1=W1, beta1=beta1, two_step=opciones.two_step)


def _varianza(internos: InternosGMM) -> np.ndarray:
    ZX = internos.Z.T @ internos.X
    A = np.linalg.inv(ZX.T @ internos.W @ ZX)
    if internos.two_step:
        return A
    u = internos.residuos()
    dif = internos.ecuacion == DIFERENCIAS
    sigma2 = float(u[dif] @ u[dif]) / (2.0 * dif.sum())
    return sigma2 * A


def _influencia(internos: InternosGMM) -> np.ndarray:
    """
    Aporte de cada región a β̂ − β (una fila por región). En dos pasos suma el
    efecto de β̂₁ sobre la matriz de ponderación, ∂β̂₂/∂β₁ · ψ₁.
    """
    ZX = internos.Z.T @ internos.X
    P1 = np.linalg.solve(ZX.T @ internos.W1 @ ZX, ZX.T @ internos.W1)
    G1 = internos.momentos_por_region(internos.residuos(internos.beta1))
    psi1 = G1 @ P1.T
    if not internos.two_step:
        return psi1
    W2 = internos.W2
    P2 = np.linalg.solve(ZX.T @ W2 @ ZX, ZX.T @ W2)
    u2 = internos.residuos(internos.beta2)
    psi2 = internos.momentos_por_region(u2) @ P2.T
    ZX_region = np.zeros((internos.n_regiones, internos.n_instrumentos, internos.n_parametros))
    np.add.at(ZX_region, internos.cluster, internos.Z[:, :, None] * internos.X[:, None, :])
    Wg = W2 @ (internos.Z.T @ u2)
    D = np.empty((internos.n_parametros, internos.n_parametros))
    for k in range(internos.n_parametros):
        dOmega = ZX_region[:, :, k].T @ G1
        D[:, k] = P2 @ ((dOmega + dOmega.T) @ Wg)
    return psi2 + psi1 @ D.T


def sargan_test(internos: InternosGMM) -> Tuple[float, int, float]:
    """J de Hansen con la matriz de ponderación eficiente, evaluado en la estimación de dos pasos."""
    grados = internos.n_instrumentos - internos.n_parametros
    if grados <= 0:
        raise FallaNumericaExcepcion(
            f"Modelo no sobreidentificado ({internos.n_instrumentos} instrumentos, "
            f"{internos.n_parametros} parámetros)", codigo="not_overidentified")
    internos.pasar_a_dos_pasos()
    g = internos.Z.T @ internos.residuos(internos.beta2)
    J = max(float(g @ internos.W2 @ g), 0.0)
    return J, grados, p_valor_chi2(J, grados)


def arellano_bond_test(internos: InternosGMM, orden: int) -> Tuple[float, float]:
    """
    Estadístico z de autocorrelación de orden m en los residuos de la ecuación
    en diferencias. La varianza es la de Arellano y Bond agrupada por región,
    Σ_c (d_c − qᵀψ_c)², con q = ∂(Σ û_t û_{t−m})/∂β y ψ_c el aporte de la región c
    al error de estimación.
    """
    u = internos.residuos()
    dif = np.flatnonzero(internos.ecuacion == DIFERENCIAS)
    filas = pd.DataFrame({"fila": dif, "individuo": internos.individuo[dif], "tau": internos.tau[dif]})
    rezagadas = filas.assign(tau=filas["tau"] + orden)
    pares = filas.merge(rezagadas, on=["individuo", "tau"], suffixes=("", "_rezago"))
    if pares.empty:
        raise DatosInvalidosExcepcion(f"Periodos insuficientes para la prueba AR({orden})",
                                      codigo="periodos_insuficientes")
    i, j = pares["fila"].to_numpy(), pares["fila_rezago"].to_numpy()
    producto = u[i] * u[j]
    por_region = np.zeros(internos.n_regiones)
    np.add.at(por_region, internos.cluster[i], producto)

    q = u[j] @ internos.X[i] + u[i] @ internos.X[j]
    corregido = por_region - _influencia(internos) @ q
    varianza = float(corregido @ corregido)
    if not varianza > 0:
        raise FallaNumericaExcepcion(f"Varianza nula en la prueba AR({orden})", codigo="degenerate_system")
    z = float(producto.sum()) / np.sqrt(varianza)
    return float(z), p_valor_z(z)


def system_gmm(panel: PanelRegresion, opciones: OpcionesGMM = OpcionesGMM()) -> PanelModelResult:
    spec = panel.spec
    internos = construir_sistema(panel, opciones)
    if opciones.two_step:
        internos.pasar_a_dos_pasos()
    V = _varianza(internos)
    errores = np.sqrt(np.clip(np.diag(V), 0.0, None))
    coeficientes = {nombre: (float(b), float(se)) for nombre, b, se in zip(internos.nombres, internos.beta, errores)}

    sargan = None
    try:
        sargan = sargan_test(internos)
    except FallaNumericaExcepcion as e:
        logger.warning(f"GMM {spec.id}: sin prueba de Sargan ({e.mensaje})")
    pruebas_ar = {}
    for orden in (1, 2):
        try:
            pruebas_ar[orden] = arellano_bond_test(internos, orden)
        except DatosInvalidosExcepcion as e:
            logger.warning(f"GMM {spec.id}: {e.mensaje}")
    estimador = GMM_DOS_PASOS if opciones.two_step else GMM_UN_PASO
    logger.info(f"{estimador} {spec.id} (h={spec.horizon}): {len(panel.tabla)} observaciones, "
                f"{internos.n_instrumentos} instrumentos, {internos.n_regiones} regiones")
    return PanelModelResult(
        estimator=estimador, coefficients=coeficientes, n_obs=len(panel.tabla),
        n_regions=internos.n_regiones, n_instruments=internos.n_instrumentos,
        p_values={t: p_valor_normal(b, se) for t, (b, se) in coeficientes.items()},
        sargan=sargan, ar1_test=pruebas_ar.get(1), ar2_test=pruebas_ar.get(2), windmeijer=False,
    )
