"""
Tipos canónicos compartidos por todos los módulos.

Todos son inmutables después de construirse: los arreglos numpy se marcan
como de sólo lectura y los mapas se exponen como `MappingProxyType`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import sparse

from ....seedwork.dominio.excepciones import DatosInvalidosExcepcion
from ....seedwork.dominio.objetos_valor import ObjetoValor
from ....seedwork.dominio.reglas import IdentificadoresUnicos, ValoresNoNegativos
from .reglas import (ClavesUnicas, DimensionesConsistentes, GrafoSimetricoSinLazos, IndicesEnRango,
                     MarginalesConsistentes, MatrizBinaria, SinCeros, ValoresFinitos)


def _congelar(arreglo, dtype) -> np.ndarray:
    arreglo = np.array(arreglo, dtype=dtype, copy=True)
    arreglo.setflags(write=False)
    return arreglo


@dataclass(frozen=True, eq=False)
class ActivityPanel(ObjetoValor):
    """Tensor disperso región × actividad × año de intensidades no negativas (formato COO)."""
    regions: Tuple[str, ...]
    activities: Tuple[str, ...]
    years: Tuple[int, ...]
    region_idx: np.ndarray
    activity_idx: np.ndarray
    year_idx: np.ndarray
    values: np.ndarray

    def validar(self):
        self.validar_regla(IdentificadoresUnicos(self.regions, "regiones"))
        self.validar_regla(IdentificadoresUnicos(self.activities, "actividades"))
        self.validar_regla(IdentificadoresUnicos(self.years, "años"))
        self.validar_regla(IndicesEnRango(self.region_idx, len(self.regions), "región"))
        self.validar_regla(IndicesEnRango(self.activity_idx, len(self.activities), "actividad"))
        self.validar_regla(IndicesEnRango(self.year_idx, len(self.years), "año"))
        self.validar_regla(ValoresNoNegativos(self.values, "El panel de intensidades"))
        self.validar_regla(SinCeros(self.values))
        self.validar_regla(ClavesUnicas(self._claves()))

    def _claves(self) -> np.ndarray:
        n_a, n_r = max(len(self.activities), 1), max(len(self.regions), 1)
        return (self.year_idx.astype(np.int64) * n_r + self.region_idx) * n_a + self.activity_idx

    @classmethod
    def desde_dataframe(cls, df: pd.DataFrame, regions: Optional[Sequence[str]] = None,
                        activities: Optional[Sequence[str]] = None,
                        years: Optional[Sequence[int]] = None) -> "ActivityPanel":
        """Construye el panel desde columnas `region, activity, year, value`; los ceros se descartan."""
        df = df.loc[df["value"] != 0]
        regions = tuple(regions) if regions is not None else tuple(sorted(df["region"].unique()))
        activities = tuple(activities) if activities is not None else tuple(sorted(df["activity"].unique()))
        years = tuple(int(y) for y in years) if years is not None else tuple(sorted(int(y) for y in df["year"].unique()))
        r = pd.Index(regions).get_indexer(df["region"])
        a = pd.Index(activities).get_indexer(df["activity"])
        t = pd.Index(years).get_indexer(df["year"].astype(np.int64))
        orden = np.lexsort((a, r, t))
        return cls(
            regions=regions, activities=activities, years=years,
            region_idx=_congelar(r[orden], np.int64), activity_idx=_congelar(a[orden], np.int64),
            year_idx=_congelar(t[orden], np.int64),
            values=_congelar(df["value"].to_numpy(dtype=np.float64)[orden], np.float64),
        )

    def a_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "region": np.asarray(self.regions, dtype=object)[self.region_idx],
            "activity": np.asarray(self.activities, dtype=object)[self.activity_idx],
            "year": np.asarray(self.years, dtype=np.int64)[self.year_idx],
            "value": self.values,
        })

    def matriz(self, year: int) -> np.ndarray:
        """Matriz densa X (regiones × actividades) del año indicado."""
        if year not in self.years:
            raise DatosInvalidosExcepcion(f"El año {year} no está en el panel", codigo="anio_ausente")
        sel = self.year_idx == self.years.index(year)
        coo = sparse.coo_matrix(
            (self.values[sel], (self.region_idx[sel], self.activity_idx[sel])),
            shape=(len(self.regions), len(self.activities)),
        )
        return coo.toarray()

    def valor(self, region: str, activity: str, year: int) -> float:
        sel = ((self.region_idx == self.regions.index(region))
               & (self.activity_idx == self.activities.index(activity))
               & (self.year_idx == self.years.index(year)))
        return float(self.values[sel].sum())

    def totales_por_actividad(self) -> pd.DataFrame:
        """Total de intensidad por (actividad, año); usado para verificar conservación de masa."""
        return (self.a_dataframe().groupby(["activity", "year"], as_index=False)["value"].sum()
                .sort_values(["activity", "year"], kind="mergesort").reset_index(drop=True))

    @property
    def n_entradas(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True, eq=False)
class SpecializationMatrix(ObjetoValor):
    regions: Tuple[str, ...]
    activities: Tuple[str, ...]
    entries: np.ndarray
    diversity: np.ndarray
    ubiquity: np.ndarray
    year: int
    # Regiones cuya fila de RCA estaba indefinida (intensidad total nula).
    sin_datos: frozenset = field(default_factory=frozenset)

    def validar(self):
        self.validar_regla(IdentificadoresUnicos(self.regions, "regiones"))
        self.validar_regla(IdentificadoresUnicos(self.activities, "actividades"))
        self.validar_regla(DimensionesConsistentes(self.entries.shape, (len(self.regions), len(self.activities))))
        self.validar_regla(MatrizBinaria(self.entries))
        self.validar_regla(MarginalesConsistentes(self.entries, self.diversity, self.ubiquity))

    @classmethod
    def desde_entradas(cls, regions: Sequence[str], activities: Sequence[str], entries,
                       year: int, sin_datos: Iterable[str] = ()) -> "SpecializationMatrix":
        entradas = _congelar(entries, np.int8)
        return cls(
            regions=tuple(regions), activities=tuple(activities), entries=entradas,
            diversity=_congelar(entradas.sum(axis=1, dtype=np.int64), np.int64),
            ubiquity=_congelar(entradas.sum(axis=0, dtype=np.int64), np.int64),
            year=int(year), sin_datos=frozenset(sin_datos),
        )

    def subconjunto(self, filas: Sequence[int], columnas: Sequence[int]) -> "SpecializationMatrix":
        filas, columnas = np.asarray(filas, dtype=np.int64), np.asarray(columnas, dtype=np.int64)
        regiones = tuple(self.regions[i] for i in filas)
        return SpecializationMatrix.desde_entradas(
            regiones, tuple(self.activities[j] for j in columnas),
            self.entries[np.ix_(filas, columnas)], self.year,
            sin_datos=self.sin_datos.intersection(regiones),
        )

    def a_dataframe(self) -> pd.DataFrame:
        r, a = np.nonzero(self.entries)
        return pd.DataFrame({
            "region": np.asarray(self.regions, dtype=object)[r],
            "activity": np.asarray(self.activities, dtype=object)[a],
            "year": self.year,
        })

    @property
    def forma(self) -> Tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class RegionGraph(ObjetoValor):
    regions: Tuple[str, ...]
    neighbors: Tuple[frozenset, ...]

    def validar(self):
        self.validar_regla(IdentificadoresUnicos(self.regions, "regiones"))
        self.validar_regla(DimensionesConsistentes((len(self.neighbors),), (len(self.regions),)))
        self.validar_regla(GrafoSimetricoSinLazos(self.neighbors))

    @classmethod
    def desde_aristas(cls, regions: Sequence[str], aristas: Iterable[Tuple[str, str]]) -> "RegionGraph":
        regions = tuple(regions)
        indice = {r: i for i, r in enumerate(regions)}
        vecinos = [set() for _ in regions]
        for a, b in aristas:
            i, j = indice[a], indice[b]
            vecinos[i].add(j)
            vecinos[j].add(i)
        return cls(regions=regions, neighbors=tuple(frozenset(v) for v in vecinos))

    @property
    def indice(self) -> Dict[str, int]:
        return {r: i for i, r in enumerate(self.regions)}

    @property
    def n_aristas(self) -> int:
        return sum(len(v) for v in self.neighbors) // 2

    def grados(self) -> np.ndarray:
        return np.fromiter((len(v) for v in self.neighbors), dtype=np.int64, count=len(self.neighbors))

    def aristas(self) -> list[Tuple[str, str]]:
        """Aristas no dirigidas como pares ordenados (a < b), en orden lexicográfico."""
        pares = set()
        for i, vs in enumerate(self.neighbors):
            for j in vs:
                a, b = self.regions[i], self.regions[j]
                pares.add((a, b) if a < b else (b, a))
        return sorted(pares)

    def adyacencia(self) -> sparse.csr_matrix:
        filas = [i for i, vs in enumerate(self.neighbors) for _ in vs]
        columnas = [j for vs in self.neighbors for j in sorted(vs)]
        n = len(self.regions)
        datos = np.ones(len(filas), dtype=np.float64)
        return sparse.csr_matrix((datos, (filas, columnas)), shape=(n, n))

    def subgrafo(self, conservar: Iterable[str]) -> Tuple["RegionGraph", int]:
        """Restringe el grafo a `conservar` (en el orden del grafo); devuelve también las aristas removidas."""
        conservar = set(conservar)
        regiones = tuple(r for r in self.regions if r in conservar)
        aristas = [(a, b) for a, b in self.aristas() if a in conservar and b in conservar]
        return RegionGraph.desde_aristas(regiones, aristas), self.n_aristas - len(aristas)


@dataclass(frozen=True, eq=False)
class IndicatorSeries(ObjetoValor):
    """Indicador escalar por (región, año); una ausencia es un dato faltante, nunca cero."""
    name: str
    values: Mapping[Tuple[str, int], float]
    units: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(
            {(str(r), int(t)): float(v) for (r, t), v in self.values.items()}))
        super().__post_init__()

    def validar(self):
        self.validar_regla(ValoresFinitos(self.values.values(), self.name))

    @classmethod
    def desde_dataframe(cls, df: pd.DataFrame, name: str, units: str = "",
                        columna: str = "value") -> "IndicatorSeries":
        df = df.loc[df[columna].notna()]
        claves = zip(df["region"].astype(str), df["year"].astype(np.int64))
        return cls(name=name, values=dict(zip(claves, df[columna].astype(np.float64))), units=units)

    def a_dataframe(self, columna: str = "value") -> pd.DataFrame:
        filas = sorted(self.values.items())
        return pd.DataFrame({
            "region": [r for (r, _), _ in filas],
            "year": np.array([t for (_, t), _ in filas], dtype=np.int64),
            columna: np.array([v for _, v in filas], dtype=np.float64),
        })

    @property
    def regiones(self) -> Tuple[str, ...]:
        return tuple(sorted({r for r, _ in self.values}))

    @property
    def anios(self) -> Tuple[int, ...]:
        return tuple(sorted({t for _, t in self.values}))

    def del_anio(self, year: int) -> Dict[str, float]:
        return {r: v for (r, t), v in sorted(self.values.items()) if t == year}

    def get(self, region: str, year: int) -> Optional[float]:
        return self.values.get((region, year))

    def renombrar(self, name: str, units: Optional[str] = None) -> "IndicatorSeries":
        return IndicatorSeries(name=name, values=dict(self.values), units=self.units if units is None else units)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class ValoresRegionales:
    """Resultado por región: valores definidos y regiones indefinidas con su motivo."""
    valores: Mapping[str, float]
    indefinidos: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "valores", MappingProxyType(dict(self.valores)))
        object.__setattr__(self, "indefinidos", MappingProxyType(dict(self.indefinidos)))
