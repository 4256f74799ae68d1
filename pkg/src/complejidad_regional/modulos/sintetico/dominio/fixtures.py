"""Conjunto completo de insumos sintéticos para correr el pipeline de punta a punta."""
import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
import pandas as pd

from ....config import SeccionSintetico
from ...datos.dominio.entidades import RegionGraph
from .servicios import gen_specialization, generador, grafo_para

logger = logging.getLogger(__name__)

ANIO_BASE = 2010
INFLACION = 0.04
FRACCION_SIN_EXPORTACIONES = 0.1
FONDO = 0.02
PERTURBACION = 0.02


@dataclass(frozen=True, eq=False)
class FixtureSintetico:
    intensity_industry: pd.DataFrame
    intensity_export: pd.DataFrame
    crosswalk: pd.DataFrame
    gdp: pd.DataFrame
    population: pd.DataFrame
    price_index: pd.DataFrame
    pci: pd.DataFrame
    external_shares: pd.DataFrame
    grafo: RegionGraph


def _intensidad(rng: np.random.Generator, M0: np.ndarray, tamanio: np.ndarray, pesos: np.ndarray) -> np.ndarray:
    """Intensidad alta donde hay especialización planteada y un fondo bajo en el resto, con ruido lognormal."""
    M = M0.copy()
    volteos = rng.random(M.shape) < PERTURBACION
    M[volteos] = 1 - M[volteos]
    base = np.where(M == 1, 1.0, FONDO) * tamanio[:, None] * pesos[None, :]
    return base * np.exp(0.3 * rng.standard_normal(M.shape))


def _a_subregiones(rng: np.random.Generator, X: np.ndarray, subregiones: int) -> np.ndarray:
    """Reparte cada fila entre sus sub-regiones con pesos aleatorios."""
    partes = rng.dirichlet(np.ones(subregiones), size=X.shape[0])
    return X[:, None, :] * partes[:, :, None]


def gen_fixture_set(cfg: SeccionSintetico, seed: int) -> FixtureSintetico:
    rng = generador(seed)
    M0 = gen_specialization(cfg.n_regions, cfg.n_activities, cfg.model, seed, cfg.density, cfg.blocks)
    regiones, actividades = list(M0.regions), list(M0.activities)
    nr, na, ns = len(regiones), len(actividades), cfg.sub_regions_per_region
    anios = list(range(cfg.first_year, cfg.first_year + cfg.n_years))
    subregiones = [f"{r}_{k}" for r in regiones for k in range(ns)]

    diversidad = M0.diversity.astype(np.float64)
    complejidad = (diversidad - diversidad.mean()) / (diversidad.std() or 1.0)
    tamanio = np.exp(rng.normal(0.0, 0.5, nr) + 0.3 * complejidad)
    pesos = rng.dirichlet(np.ones(na)) * na
    exportan = rng.permutation(nr) >= int(FRACCION_SIN_EXPORTACIONES * nr)

    # PIB per cápita: crecimiento persistente con un término proporcional a la complejidad planteada.
    log_y = np.empty((len(anios), nr))
    log_y[0] = 8.0 + 0.5 * complejidad + rng.normal(0.0, 0.2, nr)
    g = np.full(nr, 0.01)
    for k in range(1, len(anios)):
        g = (1 - cfg.rho) * 0.01 + cfg.rho * g + cfg.beta * complejidad * 0.1 + rng.normal(0.0, 0.01, nr)
        log_y[k] = log_y[k - 1] + g
    # Tendencia poblacional propia de cada región, no absorbible por los efectos fijos.
    log_pob = np.log(1e4) + rng.normal(0.0, 1.0, nr) + np.cumsum(rng.normal(0.01, 0.005, (len(anios), nr)), axis=0)
    reparto = rng.dirichlet(np.ones(ns), size=nr)

    filas_ind, filas_exp, filas_gdp, filas_pob, filas_pci, filas_cuotas = [], [], [], [], [], []
    ubicuidad = M0.ubiquity.astype(np.float64)
    for k, year in enumerate(anios):
        X = _intensidad(rng, M0.entries, tamanio, pesos)
        E = _intensidad(rng, M0.entries, tamanio, pesos) * exportan[:, None]
        for destino, matriz in ((filas_ind, X), (filas_exp, E)):
            por_sub = _a_subregiones(rng, matriz, ns).reshape(nr * ns, na)
            s, a = np.nonzero(por_sub)
            destino.append(pd.DataFrame({"region": np.array(subregiones)[s], "activity": np.array(actividades)[a],
                                         "year": year, "value": por_sub[s, a]}))
        precio = (1 + INFLACION) ** (year - ANIO_BASE)
        poblacion = np.exp(log_pob[k])
        pob_sub = (poblacion[:, None] * reparto).ravel()
        gdp_sub = (np.exp(log_y[k]) * poblacion * precio)[:, None] * reparto
        filas_pob.append(pd.DataFrame({"region": subregiones, "year": year, "value": pob_sub}))
        filas_gdp.append(pd.DataFrame({"region": subregiones, "year": year, "value": gdp_sub.ravel()}))
        pci = -(ubicuidad - ubicuidad.mean()) / (ubicuidad.std() or 1.0) + rng.normal(0.0, 0.1, na)
        filas_pci.append(pd.DataFrame({"activity": actividades, "year": year, "pci": pci}))
        cuotas = E.sum(axis=0) + FONDO
        filas_cuotas.append(pd.DataFrame({"activity": actividades, "year": year, "share": cuotas / cuotas.sum()}))

    logger.info(f"Fixture sintético: {nr} regiones ({nr * ns} sub-regiones), {na} actividades, "
                f"{len(anios)} años, {int((~exportan).sum())} regiones sin exportaciones")
    return FixtureSintetico(
        intensity_industry=pd.concat(filas_ind, ignore_index=True),
        intensity_export=pd.concat(filas_exp, ignore_index=True),
        crosswalk=pd.DataFrame({"sub_region": subregiones, "region": np.repeat(regiones, ns)}),
        gdp=pd.concat(filas_gdp, ignore_index=True),
        population=pd.concat(filas_pob, ignore_index=True),
        price_index=pd.DataFrame({"year": anios, "index": [(1 + INFLACION) ** (a - ANIO_BASE) for a in anios]}),
        pci=pd.concat(filas_pci, ignore_index=True),
        external_shares=pd.concat(filas_cuotas, ignore_index=True),
        grafo=grafo_para(cfg.graph, regiones),
    )


def configuracion_fixture(cfg: SeccionSintetico) -> Dict[str, Any]:
    """Configuración YAML que apunta a los archivos del fixture, con rutas relativas al propio archivo."""
    return {
        "output_dir": "resultados",
        "ingest": {
            "industry_intensity": "intensity_industry.csv", "export_intensity": "intensity_export.csv",
            "crosswalk": "crosswalk.csv", "gdp": "gdp.csv", "population": "population.csv",
            "price_index": "price_index.csv", "base_year": ANIO_BASE,
        },
        "complexity": {
            "modes": ["industry", "export"], "industry_baseline": "internal", "export_baseline": "external",
            "export_method": "pci", "pci": "pci.csv", "external_shares": "external_shares.csv",
        },
        "relatedness": {"mode": "industry", "activity_complexity": "computed"},
        "spatial": {"adjacency": "adjacency.csv", "indicators": ["indeci", "eci"]},
        "regress": {"horizons": [2, 3, 4]},
        "synth": cfg.model_dump(mode="json"),
    }
