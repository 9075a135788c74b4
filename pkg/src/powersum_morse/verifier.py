"""Numerical cross-checks that do not rely on the closed-form enumeration.

The full Lagrange system in the unknowns (x_1..x_5, l1, l2, l3) is

    4 x_i^3 - 3 l3 x_i^2 - 2 l2 x_i - l1 = 0      (i = 1..5)
    p1 = 0,  p2 = 1,  p3 = c

and is solved by damped Newton from random surface points.  Converged
states are matched against the enumerated orbits by their coordinate values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .enumerator import CriticalOrbit, enumerate_orbits, orbit_key
from .errors import DegenerateRegime
from .surface import (
    C_EDGE,
    SurfaceSpec,
    constraint_jacobian,
    constraint_residuals,
    distinct_value_count,
    tangent_frame,
    value_clusters,
)

NEWTON_TOL = 1e-11
NEWTON_MAX_ITER = 50
MAX_HALVINGS = 20
MATCH_TOL = 1e-7


@dataclass(frozen=True)
class KktState:
    point: np.ndarray
    multipliers: np.ndarray

    @classmethod
    def from_vector(cls, z):
        z = np.asarray(z, dtype=float)
        return cls(z[:5].copy(), z[5:].copy())

    def vector(self) -> np.ndarray:
        return np.concatenate([self.point, self.multipliers])


@dataclass
class VerificationReport:
    n_starts: int
    n_converged: int
    matched_orbits: dict[str, int]
    unmatched: list[KktState]
    max_residual: float
    seed: int
    missed_orbits: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unmatched and self.max_residual < NEWTON_TOL


def _residual(z, c):
    x, (l1, l2, l3) = z[:5], z[5:]
    stat = 4.0 * x**3 - 3.0 * l3 * x**2 - 2.0 * l2 * x - l1
    return np.concatenate([stat, constraint_residuals(x, c)])


def kkt_residual(state: KktState, spec: SurfaceSpec) -> np.ndarray:
    return _residual(state.vector(), spec.c)


def kkt_jacobian(state: KktState) -> np.ndarray:
    """Analytic 8 x 8 Jacobian of :func:`kkt_residual` in (x, l1, l2, l3)."""
    x = state.point
    _, l2, l3 = state.multipliers
    jac = np.zeros((8, 8))
    jac[:5, :5] = np.diag(12.0 * x * x - 6.0 * l3 * x - 2.0 * l2)
    jac[:5, 5] = -1.0
    jac[:5, 6] = -2.0 * x
    jac[:5, 7] = -3.0 * x * x
    jac[5:, :5] = constraint_jacobian(x)
    return jac


def newton_solve(
    start: KktState,
    spec: SurfaceSpec,
    max_iter: int = NEWTON_MAX_ITER,
    tol: float = NEWTON_TOL,
) -> KktState | None:
    """Damped Newton on the Lagrange system.

    Returns the converged state (infinity-norm residual below ``tol``) or
    None when the iteration diverges, hits a singular Jacobian or runs out
    of iterations.
    """
    if max_iter < 1 or tol <= 0:
        raise ValueError("need max_iter >= 1 and tol > 0")
    z = start.vector()
    r = _residual(z, spec.c)
    for _ in range(max_iter):
        if not np.all(np.isfinite(r)):
            return None
        if np.max(np.abs(r)) < tol:
            return KktState.from_vector(_polish(z, r, spec.c))
        try:
            step = np.linalg.solve(kkt_jacobian(KktState.from_vector(z)), -r)
        except np.linalg.LinAlgError:
            return None
        norm = np.linalg.norm(r)
        alpha = 1.0
        for _ in range(MAX_HALVINGS + 1):
            z_new = z + alpha * step
            r_new = _residual(z_new, spec.c)
            if np.linalg.norm(r_new) < norm:
                break
            alpha *= 0.5
        else:
            return None
        z, r = z_new, r_new
    if np.all(np.isfinite(r)) and np.max(np.abs(r)) < tol:
        return KktState.from_vector(_polish(z, r, spec.c))
    return None


def _polish(z, r, c):
    """One extra undamped step, kept only if it lowers the residual."""
    try:
        z2 = z + np.linalg.solve(kkt_jacobian(KktState.from_vector(z)), -r)
    except np.linalg.LinAlgError:
        return z
    r2 = _residual(z2, c)
    return z2 if np.max(np.abs(r2)) < np.max(np.abs(r)) else z


def sample_surface(spec: SurfaceSpec, n: int, seed=None, max_rounds: int = 20) -> np.ndarray:
    """``n`` points on the surface, as an (n, 5) array.

    Gaussian samples are centred and normalised onto {p1 = 0, p2 = 1} and
    then pushed along the gradient of p3 within that 3-sphere until p3 = c.
    The resulting distribution is not uniform in area.
    """
    c = spec.c
    if abs(c) >= C_EDGE - 1e-9:
        raise DegenerateRegime(f"surface is empty or zero-dimensional for c={c}")
    rng = np.random.default_rng(seed)
    out = np.empty((0, 5))
    for _ in range(max_rounds):
        need = n - len(out)
        if need <= 0:
            break
        x = _to_sphere(rng.standard_normal((need, 5)))
        x, ok = _retract_p3(x, c, spec.tol_surface)
        out = np.vstack([out, x[ok]])
    if len(out) < n:
        raise DegenerateRegime(f"could not sample the surface at c={c}")
    return out[:n]


def _to_sphere(x):
    x = x - x.mean(axis=1, keepdims=True)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _retract_p3(x, c, tol, max_iter=200, max_step=0.2):
    for _ in range(max_iter):
        r = c - np.sum(x**3, axis=1)
        if np.all(np.abs(r) < 1e-14):
            break
        g = 3.0 * x * x
        g -= g.mean(axis=1, keepdims=True)
        g -= np.sum(g * x, axis=1, keepdims=True) * x
        gg = np.sum(g * g, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            coef = np.where(gg > 1e-30, r / gg, 0.0)
        step = coef[:, None] * g
        sn = np.linalg.norm(step, axis=1, keepdims=True)
        step *= np.minimum(1.0, max_step / np.maximum(sn, 1e-300))
        x = _to_sphere(x + step)
    res = np.column_stack(
        [x.sum(axis=1), np.sum(x * x, axis=1) - 1.0, np.sum(x**3, axis=1) - c]
    )
    ok = np.all(np.abs(res) < min(tol, 1e-10), axis=1) & np.all(np.isfinite(x), axis=1)
    return x, ok


def random_surface_point(spec: SurfaceSpec, seed=None) -> np.ndarray:
    return sample_surface(spec, 1, seed)[0]


def initial_multipliers(x) -> np.ndarray:
    """Least-squares fit of the (linear in the multipliers) stationarity equations."""
    x = np.asarray(x, dtype=float)
    a = np.column_stack([np.ones(5), 2.0 * x, 3.0 * x * x])
    lam, *_ = np.linalg.lstsq(a, 4.0 * x**3, rcond=None)
    return lam


def match_state(state: KktState, orbits: list[CriticalOrbit], spec: SurfaceSpec):
    """Orbit matching the state's coordinate values within MATCH_TOL, or None."""
    levels = value_clusters(state.point, spec.tol_distinct)
    for o in orbits:
        if len(o.levels) != len(levels):
            continue
        if all(
            m == om and abs(v - ov) <= MATCH_TOL
            for (v, m), (ov, om) in zip(levels, o.levels)
        ):
            return o
    return None


def multistart_verify(spec: SurfaceSpec, n_starts: int, seed: int = 0) -> VerificationReport:
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    orbits = enumerate_orbits(spec)
    hits = {o.key: 0 for o in orbits}
    unmatched: list[KktState] = []
    n_conv = 0
    max_res = 0.0
    for child in np.random.SeedSequence(seed).spawn(n_starts):
        x = random_surface_point(spec, np.random.default_rng(child))
        s = newton_solve(KktState(x, initial_multipliers(x)), spec)
        if s is None:
            continue
        n_conv += 1
        max_res = max(max_res, float(np.max(np.abs(kkt_residual(s, spec)))))
        o = match_state(s, orbits, spec)
        if o is None:
            unmatched.append(s)
        else:
            hits[o.key] += 1
    return VerificationReport(
        n_starts=n_starts,
        n_converged=n_conv,
        matched_orbits=hits,
        unmatched=unmatched,
        max_residual=max_res,
        seed=seed,
        missed_orbits=[k for k, v in hits.items() if v == 0],
    )


def project_to_surface(q, c, tol=1e-13, max_iter=60):
    """Minimum-norm Gauss-Newton projection of ``q`` onto the surface."""
    q = np.array(q, dtype=float)
    for _ in range(max_iter):
        r = constraint_residuals(q, c)
        if np.max(np.abs(r)) < tol:
            return q
        step, *_ = np.linalg.lstsq(constraint_jacobian(q), -r, rcond=None)
        q = q + step
    return q if np.max(np.abs(constraint_residuals(q, c))) < 1e-10 else None


@dataclass(frozen=True)
class ProbeResult:
    verdict: str  # "LocalMin", "LocalMax" or "Neither"
    margin: float
    n_above: int
    n_below: int
    n_samples: int
    max_distance: float


def local_extremum_probe(
    p, spec: SurfaceSpec, radius: float = 1e-3, n_probe: int = 200, seed=0
) -> ProbeResult:
    """Compare p4 at ``p`` with p4 at nearby surface points.

    Smooth points are perturbed within the tangent plane; singular points
    (no tangent plane) are perturbed in all ambient directions.  Each
    perturbation is projected back onto the surface.
    """
    if abs(spec.c) >= C_EDGE - 1e-9:
        raise DegenerateRegime(f"surface is empty or zero-dimensional for c={spec.c}")
    p = np.asarray(p, dtype=float)
    rng = np.random.default_rng(seed)
    f0 = float(np.sum(p**4))
    smooth = distinct_value_count(p, spec.tol_distinct) >= 3
    basis = tangent_frame(p, spec).basis if smooth else None
    deltas = []
    max_dist = 0.0
    attempts = 0
    while len(deltas) < n_probe and attempts < 10 * n_probe:
        attempts += 1
        if smooth:
            theta = rng.uniform(0.0, 2.0 * np.pi)
            d = np.cos(theta) * basis[0] + np.sin(theta) * basis[1]
        else:
            d = rng.standard_normal(5)
            d /= np.linalg.norm(d)
        q = project_to_surface(p + radius * d, spec.c)
        if q is None:
            continue
        dist = float(np.linalg.norm(q - p))
        if dist > 10.0 * radius:
            continue
        max_dist = max(max_dist, dist)
        deltas.append(float(np.sum(q**4)) - f0)
    deltas = np.array(deltas)
    above = int(np.sum(deltas > 0))
    below = int(np.sum(deltas < 0))
    if len(deltas) and above == len(deltas):
        verdict = "LocalMin"
    elif len(deltas) and below == len(deltas):
        verdict = "LocalMax"
    else:
        verdict = "Neither"
    margin = float(np.min(np.abs(deltas))) if len(deltas) else 0.0
    return ProbeResult(verdict, margin, above, below, len(deltas), max_dist)


__all__ = [
    "KktState",
    "ProbeResult",
    "VerificationReport",
    "initial_multipliers",
    "kkt_jacobian",
    "kkt_residual",
    "local_extremum_probe",
    "match_state",
    "multistart_verify",
    "newton_solve",
    "orbit_key",
    "random_surface_point",
    "sample_surface",
]
