"""Power sums and the constraint geometry of the surface

    A(c) = {x in R^5 : p1(x) = 0, p2(x) = 1, p3(x) = c},   p_k(x) = sum_i x_i**k.

The surface is smooth except where the coordinates take fewer than three
distinct values; this happens only for |c| = 1/sqrt(30) (ten singular points)
and |c| = 3/sqrt(20) (the surface collapses to five points).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .errors import NotOnSurface, RankDeficient, SingularPoint

C_SING = 1.0 / math.sqrt(30.0)
C_EDGE = 3.0 / math.sqrt(20.0)
BOUNDARY_TOL = 1e-12

TOL_SURFACE = 1e-10
TOL_DISTINCT = 1e-8


class Regime(str, enum.Enum):
    EMPTY = "empty"
    FIVE_POINTS = "five-points"
    SINGULAR = "singular"
    SMOOTH_CONNECTED = "smooth-connected"
    SMOOTH_FIVE_SPHERES = "smooth-five-spheres"

    @property
    def is_smooth(self) -> bool:
        return self in (Regime.SMOOTH_CONNECTED, Regime.SMOOTH_FIVE_SPHERES)

    @property
    def components(self) -> int | None:
        """Number of connected components implied by the regime, if finite-dimensional data applies."""
        return {
            Regime.SMOOTH_CONNECTED: 1,
            Regime.SMOOTH_FIVE_SPHERES: 5,
            Regime.FIVE_POINTS: 5,
            Regime.SINGULAR: 1,
            Regime.EMPTY: 0,
        }[self]


@dataclass(frozen=True)
class SurfaceSpec:
    c: float
    tol_surface: float = TOL_SURFACE
    tol_distinct: float = TOL_DISTINCT

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError(f"c must be finite, got {self.c!r}")
        if self.tol_surface <= 0 or self.tol_distinct <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class TangentFrame:
    """Orthonormal basis (2 x 5) of the tangent plane; orientation is arbitrary."""

    basis: np.ndarray


def as_point(p) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.shape != (5,):
        raise ValueError(f"expected 5 coordinates, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("coordinates must be finite")
    return x


def power_sum(p, k: int) -> float:
    if not 1 <= k <= 4:
        raise ValueError(f"k must be in 1..4, got {k}")
    x = as_point(p)
    return float(np.sum(x**k))


def constraint_residuals(p, c: float) -> np.ndarray:
    """(p1, p2 - 1, p3 - c) at ``p``."""
    x = np.asarray(p, dtype=float)
    return np.array([x.sum(), (x * x).sum() - 1.0, (x**3).sum() - c])


def on_surface(p, spec: SurfaceSpec) -> bool:
    return bool(np.all(np.abs(constraint_residuals(p, spec.c)) <= spec.tol_surface))


def classify_regime(spec: SurfaceSpec | float) -> Regime:
    c = spec.c if isinstance(spec, SurfaceSpec) else float(spec)
    a = abs(c)
    if abs(a - C_EDGE) <= BOUNDARY_TOL:
        return Regime.FIVE_POINTS
    if a > C_EDGE:
        return Regime.EMPTY
    if abs(a - C_SING) <= BOUNDARY_TOL:
        return Regime.SINGULAR
    if a < C_SING:
        return Regime.SMOOTH_CONNECTED
    return Regime.SMOOTH_FIVE_SPHERES


def value_clusters(p, tol_distinct: float = TOL_DISTINCT) -> list[tuple[float, int]]:
    """Group sorted coordinates into (mean value, multiplicity) clusters.

    A new cluster starts wherever consecutive sorted coordinates differ by
    more than ``tol_distinct``.  Clusters are returned in ascending order.
    """
    if tol_distinct <= 0:
        raise ValueError("tol_distinct must be positive")
    xs = np.sort(np.asarray(p, dtype=float))
    groups: list[list[float]] = [[xs[0]]]
    for prev, cur in zip(xs[:-1], xs[1:]):
        if cur - prev > tol_distinct:
            groups.append([cur])
        else:
            groups[-1].append(cur)
    return [(float(np.mean(g)), len(g)) for g in groups]


def distinct_value_count(p, tol_distinct: float = TOL_DISTINCT) -> int:
    return len(value_clusters(p, tol_distinct))


def is_singular_surface_point(p, spec: SurfaceSpec) -> bool:
    if not on_surface(p, spec):
        raise NotOnSurface(
            f"point is not on the surface c={spec.c} "
            f"(residuals {constraint_residuals(p, spec.c)})"
        )
    return distinct_value_count(p, spec.tol_distinct) < 3


def constraint_jacobian(p) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    return np.vstack([np.ones(5), 2.0 * x, 3.0 * x * x])


def tangent_frame(p, spec: SurfaceSpec) -> TangentFrame:
    x = as_point(p)
    if distinct_value_count(x, spec.tol_distinct) < 3:
        raise SingularPoint(f"no tangent plane at singular point {x}")
    jac = constraint_jacobian(x)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise RankDeficient(f"constraint Jacobian singular values {sv}")
    basis = null_space(jac).T
    if basis.shape[0] != 2:
        raise RankDeficient(f"tangent space has dimension {basis.shape[0]}")
    return TangentFrame(basis)


def lagrangian_hessian_diag(p, multipliers) -> np.ndarray:
    """Diagonal of the ambient Hessian of p4 - l3*p3 - l2*p2 - l1*p1.

    Entry i is the derivative of 4t^3 - 3*l3*t^2 - 2*l2*t - l1 at t = x_i.
    """
    x = np.asarray(p, dtype=float)
    _, l2, l3 = multipliers
    return 12.0 * x * x - 6.0 * l3 * x - 2.0 * l2


def projected_hessian(p, multipliers, frame: TangentFrame) -> np.ndarray:
    d = lagrangian_hessian_diag(p, multipliers)
    b = frame.basis
    h = (b * d) @ b.T
    return 0.5 * (h + h.T)


def morse_index_from_hessian(h: np.ndarray, tol: float = 1e-9) -> int:
    """Number of negative eigenvalues; raises if the form is degenerate."""
    ev = np.linalg.eigvalsh(h)
    if np.any(np.abs(ev) <= tol):
        raise ValueError(f"degenerate restricted Hessian, eigenvalues {ev}")
    return int(np.sum(ev < 0))
