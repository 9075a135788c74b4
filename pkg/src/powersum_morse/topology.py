"""Topological invariants of the surface and the bifurcation sweep over c."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import DegenerateRegime, InconsistentTopology
from .surface import Regime, SurfaceSpec, classify_regime


@dataclass(frozen=True)
class ComponentEstimate:
    n_components: int
    n_samples: int
    epsilon: float
    largest_component_fraction: float


@dataclass(frozen=True)
class SweepRow:
    c: float
    regime: Regime
    n_orbits: int
    counts: tuple[int, int, int]
    chi: int | None
    genus: int | None
    p4_values: tuple[float, ...]


@dataclass(frozen=True)
class Transition:
    c_left: float
    c_right: float
    regime_left: Regime
    regime_right: Regime
    counts_left: tuple[int, int, int]
    counts_right: tuple[int, int, int]

    def __str__(self):
        return (
            f"transition in ({self.c_left}, {self.c_right}): "
            f"{self.regime_left.value} {self.counts_left} -> "
            f"{self.regime_right.value} {self.counts_right}"
        )


def euler_characteristic(n_min: int, n_saddle: int, n_max: int) -> int:
    if min(n_min, n_saddle, n_max) < 0:
        raise ValueError("counts must be non-negative")
    return n_min - n_saddle + n_max


def genus(chi: int, n_components: int) -> int:
    """Total genus of a closed orientable surface with ``n_components`` components."""
    twice_g = 2 * n_components - chi
    if n_components < 1 or twice_g < 0 or twice_g % 2:
        raise InconsistentTopology(
            f"chi={chi} is impossible for a closed orientable surface with "
            f"{n_components} component(s)"
        )
    return twice_g // 2


def count_components(points: np.ndarray, epsilon: float) -> tuple[int, np.ndarray]:
    """Connected components of the epsilon-neighbourhood graph of ``points``."""
    n = len(points)
    pairs = cKDTree(points).query_pairs(epsilon, output_type="ndarray")
    graph = coo_matrix(
        (np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])), shape=(n, n)
    )
    return connected_components(graph, directed=False)


def component_count(
    spec: SurfaceSpec, n_samples: int = 20000, epsilon: float = 0.15, seed=0
) -> ComponentEstimate:
    """Empirical number of connected components from a random surface sample.

    The estimate depends on ``epsilon``: too small splits a component, too
    large merges nearby ones.
    """
    from .verifier import sample_surface

    regime = classify_regime(spec)
    if regime is Regime.EMPTY:
        raise DegenerateRegime(f"surface is empty for c={spec.c}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if regime is Regime.FIVE_POINTS:
        return ComponentEstimate(5, 5, epsilon, 0.2)
    if n_samples < 100:
        raise ValueError("need at least 100 samples")
    pts = sample_surface(spec, n_samples, seed)
    n, labels = count_components(pts, epsilon)
    largest = np.bincount(labels).max() / n_samples
    return ComponentEstimate(int(n), n_samples, epsilon, float(largest))


def critical_value_profile(spec: SurfaceSpec, merge_tol: float = 1e-12):
    """Critical values in ascending order as (p4 value, index, multiplicity).

    Orbits with equal value and index are merged.
    """
    from .enumerator import enumerate_orbits

    profile: list[list] = []
    for o in enumerate_orbits(spec):
        if not o.is_morse:
            continue
        if profile and profile[-1][1] == o.morse_index and abs(profile[-1][0] - o.p4_value) <= merge_tol:
            profile[-1][2] += o.multiplicity
        else:
            profile.append([o.p4_value, o.morse_index, o.multiplicity])
    return [tuple(e) for e in profile]


def distinct_values(values, tol: float = 1e-12) -> tuple[float, ...]:
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return tuple(out)


def sweep_row(c: float) -> SweepRow:
    from .enumerator import analyze

    rep = analyze(SurfaceSpec(c))
    return SweepRow(
        c=c,
        regime=rep.regime,
        n_orbits=len(rep.orbits),
        counts=rep.counts,
        chi=rep.euler_characteristic,
        genus=rep.genus,
        p4_values=distinct_values(o.p4_value for o in rep.orbits),
    )


def step_digits(step: float) -> int:
    """Decimal places needed to print grid values of this step exactly."""
    return max(0, -Decimal(repr(step)).normalize().as_tuple().exponent)


def grid(c_lo: float, c_hi: float, step: float) -> list[float]:
    """Grid lo, lo+step, ... <= hi, rounded to the decimal places of ``step``."""
    if not c_lo < c_hi:
        raise ValueError("empty range: need c_lo < c_hi")
    if step <= 0:
        raise ValueError("step must be positive")
    n = math.floor((c_hi - c_lo) / step + 1e-9) + 1
    digits = step_digits(step)
    return [round(c_lo + i * step, digits) + 0.0 for i in range(n)]


def sweep(c_lo: float, c_hi: float, step: float):
    """Per-c summary rows on a uniform grid and the intervals where they change.

    A transition is reported between neighbouring grid values whose regime
    or (min, saddle, max) counts differ.
    """
    rows = [sweep_row(c) for c in grid(c_lo, c_hi, step)]
    transitions = [
        Transition(a.c, b.c, a.regime, b.regime, a.counts, b.counts)
        for a, b in zip(rows, rows[1:])
        if a.regime is not b.regime or a.counts != b.counts
    ]
    return rows, transitions
