import math

from scipy import stats


def p_valor_normal(estimado: float, error: float) -> float:
    """p-valor bilateral de estimado/error bajo la normal estándar."""
    if error > 0:
        return float(min(1.0, 2.0 * stats.norm.sf(abs(estimado / error))))
    return 1.0 if estimado == 0 or not math.isfinite(estimado) else 0.0


def p_valor_z(z: float) -> float:
    return float(min(1.0, 2.0 * stats.norm.sf(abs(z))))


def p_valor_chi2(estadistico: float, grados: int) -> float:
    return float(stats.chi2.sf(max(estadistico, 0.0), grados))
