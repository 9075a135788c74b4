"""Critical points of p4 = sum x_i^4 on the surfaces {p1 = 0, p2 = 1, p3 = c} in R^5."""

from .enumerator import CriticalOrbit, RegimeReport, analyze, enumerate_orbits
from .surface import C_EDGE, C_SING, Regime, SurfaceSpec, classify_regime

__all__ = [
    "C_EDGE",
    "C_SING",
    "CriticalOrbit",
    "Regime",
    "RegimeReport",
    "SurfaceSpec",
    "analyze",
    "classify_regime",
    "enumerate_orbits",
]
