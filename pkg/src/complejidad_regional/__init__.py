"""Indicadores de complejidad económica regional, estadística espacial y
regresiones de crecimiento en paneles región × actividad × año."""

__version__ = "1.0.0"
