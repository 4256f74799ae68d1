from itertools import product

import numpy as np
import pytest

from complejidad_regional.modulos.datos.dominio.entidades import SpecializationMatrix
from complejidad_regional.modulos.relacion.dominio.objetos_valor import DensityMatrix
from complejidad_regional.modulos.relacion.dominio.servicios import (closeness_to_complexity, density,
                                                                     proximity)
from complejidad_regional.modulos.sintetico.dominio.servicios import gen_specialization
from complejidad_regional.seedwork.dominio.excepciones import DatosInvalidosExcepcion


def _proximidad_por_enumeracion(E: np.ndarray, i: int, j: int) -> float:
    """min(P(i | j), P(j | i)) contando regiones una por una."""
    ambas = sum(1 for r in range(E.shape[0]) if E[r, i] and E[r, j])
    con_i = sum(1 for r in range(E.shape[0]) if E[r, i])
    con_j = sum(1 for r in range(E.shape[0]) if E[r, j])
    if not con_i or not con_j:
        return 0.0
    return min(ambas / con_i, ambas / con_j)


class TestProximity:
    """Pruebas de la proximidad entre actividades"""

    def test_caso_conocido(self, matriz):
        """M = [[1,1],[1,0]]: u = (2,1), C_12 = 1 → φ_12 = 1/2"""
        phi = proximity(matriz([[1, 1], [1, 0]])).phi

        assert phi[0, 1] == 0.5
        assert phi[1, 0] == 0.5
        np.testing.assert_array_equal(np.diag(phi), [1.0, 1.0])

    def test_enumeracion(self):
        M = gen_specialization(12, 8, "random", seed=11, density=0.4)
        phi = proximity(M).phi

        for i, j in product(range(8), repeat=2):
            if i != j:
                assert phi[i, j] == pytest.approx(_proximidad_por_enumeracion(M.entries, i, j), abs=1e-15)
        np.testing.assert_array_equal(phi, phi.T)
        assert phi.min() >= 0 and phi.max() <= 1

    def test_ubicuidad_nula(self, matriz):
        phi = proximity(matriz([[1, 0], [1, 0]])).phi

        np.testing.assert_array_equal(phi[1], [0.0, 0.0])

    def test_columnas_identicas(self, matriz):
        phi = proximity(matriz([[1, 1, 0], [0, 0, 1], [1, 1, 1]])).phi

        assert phi[0, 1] == 1.0


class TestDensity:
    """Pruebas de la densidad región–actividad"""

    def test_caso_conocido(self, matriz):
        """ω de la región 2 en la actividad 2 = φ_21 / (φ_21 + φ_22) = 1/3"""
        M = matriz([[1, 1], [1, 0]])
        omega = density(M, proximity(M)).omega

        assert omega[1, 1] == pytest.approx(1 / 3, abs=1e-15)

    def test_fila_completa_y_vacia(self, matriz):
        M = matriz([[1, 1, 1], [0, 0, 0], [1, 0, 1]])
        omega = density(M, proximity(M)).omega

        np.testing.assert_allclose(omega[0], 1.0)
        np.testing.assert_array_equal(omega[1], 0.0)

    def test_actividad_sin_proximidad_indefinida(self, matriz):
        M = matriz([[1, 0], [1, 0]])
        omega = density(M, proximity(M)).omega

        assert np.isnan(omega[:, 1]).all()

    @pytest.mark.parametrize("seed", range(10))
    def test_agregar_especializacion_no_reduce_omega(self, seed):
        """Con φ fija, sumar una especialización a r no baja ningún ω_r,i ni toca las demás regiones"""
        M = gen_specialization(12, 10, "random", seed=seed, density=0.3)
        phi = proximity(M)
        rng = np.random.default_rng(seed)
        r, i = rng.choice(np.argwhere(M.entries == 0))
        entradas = M.entries.copy()
        entradas[r, i] = 1
        ampliada = SpecializationMatrix.desde_entradas(M.regions, M.activities, entradas, M.year)
        antes, despues = density(M, phi).omega, density(ampliada, phi).omega

        definidas = ~np.isnan(antes[r])
        np.testing.assert_array_equal(np.isnan(despues[r]), ~definidas)
        assert (despues[r][definidas] >= antes[r][definidas] - 1e-15).all()
        otras = np.arange(len(M.regions)) != r
        np.testing.assert_allclose(despues[otras], antes[otras], rtol=1e-14, atol=0)

    def test_actividades_inconsistentes(self, matriz):
        M = matriz([[1, 1], [1, 0]])
        otra = matriz([[1, 1, 0], [1, 0, 1]])
        with pytest.raises(DatosInvalidosExcepcion) as e:
            density(M, proximity(otra))
        assert e.value.codigo == "actividades_inconsistentes"


class TestClosenessToComplexity:
    """Pruebas de la cercanía a la complejidad"""

    def _omega(self, M, valores) -> DensityMatrix:
        return DensityMatrix(regions=M.regions, activities=M.activities,
                             omega=np.asarray(valores, dtype=np.float64), year=M.year)

    def test_relacion_lineal_perfecta(self, matriz):
        """ω afín creciente en la complejidad sobre las candidatas → ρ = 1"""
        M = matriz(np.array([[1] + [0] * 9, [1] * 10]))
        complejidad = {f"a{j + 1}": float(j) for j in range(10)}
        omega = self._omega(M, [[0.05 + 0.09 * j for j in range(10)], [1.0] * 10])
        resultado = closeness_to_complexity(M, omega, complejidad)

        assert resultado.valores["r1"] == pytest.approx(1.0, abs=1e-12)
        assert resultado.indefinidos["r2"] == "few candidates"

    def test_densidad_constante(self, matriz):
        M = matriz([[1, 0, 0, 0, 0]])
        omega = self._omega(M, [[0.5] * 5])
        resultado = closeness_to_complexity(M, omega, {f"a{j + 1}": float(j) for j in range(5)})

        assert resultado.indefinidos == {"r1": "zero variance"}

    def test_complejidad_ausente(self, matriz):
        M = matriz([[1, 0, 0, 0]])
        with pytest.raises(DatosInvalidosExcepcion) as e:
            closeness_to_complexity(M, self._omega(M, [[0.1, 0.2, 0.3, 0.4]]), {"a1": 0.0})
        assert e.value.codigo == "complejidad_ausente"
