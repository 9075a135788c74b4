import math

import numpy as np
import pytest

from powersum_morse.enumerator import C_EDGE, C_SING, SINGULAR, enumerate_orbits
from powersum_morse.errors import DegenerateRegime
from powersum_morse.surface import SurfaceSpec, distinct_value_count
from powersum_morse.verifier import (
    NEWTON_TOL,
    KktState,
    kkt_jacobian,
    kkt_residual,
    local_extremum_probe,
    match_state,
    multistart_verify,
    newton_solve,
    random_surface_point,
)

S2 = 1 / math.sqrt(2)


def test_kkt_residual_examples():
    spec = SurfaceSpec(0.0)
    r = kkt_residual(KktState(np.array([0.5, 0.5, -0.5, -0.5, 0]), np.array([0, 0.5, 0])), spec)
    assert np.max(np.abs(r)) < 1e-14
    r = kkt_residual(KktState(np.array([0, 0, 0, S2, -S2]), np.array([0, 1.0, 0])), spec)
    assert np.max(np.abs(r)) < 1e-14
    r = kkt_residual(KktState(np.array([1.0, 0, 0, 0, 0]), np.zeros(3)), spec)
    assert (r[0], r[5], r[6], r[7]) == (4, 1, 0, 1)


def test_kkt_jacobian_matches_central_differences():
    rng = np.random.default_rng(12)
    spec = SurfaceSpec(0.1)
    h = 1e-6
    for _ in range(100):
        z = rng.standard_normal(8)
        jac = kkt_jacobian(KktState.from_vector(z))
        fd = np.empty((8, 8))
        for k in range(8):
            e = np.zeros(8)
            e[k] = h
            fd[:, k] = (
                kkt_residual(KktState.from_vector(z + e), spec)
                - kkt_residual(KktState.from_vector(z - e), spec)
            ) / (2 * h)
        rel = np.linalg.norm(jac - fd) / np.linalg.norm(jac)
        assert rel < 1e-5


@pytest.mark.parametrize("c", [0.0, 0.1, -0.4, 0.55])
def test_newton_returns_to_perturbed_orbit(c):
    spec = SurfaceSpec(c)
    orbits = enumerate_orbits(spec)
    rng = np.random.default_rng(0)
    for o in orbits:
        start = KktState(o.representative + 1e-3 * rng.standard_normal(5), np.array(o.multipliers))
        s = newton_solve(start, spec)
        assert s is not None
        assert match_state(s, orbits, spec) is o


def test_newton_far_start_never_false_success():
    spec = SurfaceSpec(0.0)
    s = newton_solve(KktState(np.full(5, 10.0), np.zeros(3)), spec)
    if s is not None:
        assert np.max(np.abs(kkt_residual(s, spec))) < NEWTON_TOL
    with pytest.raises(ValueError):
        newton_solve(KktState(np.zeros(5), np.zeros(3)), spec, max_iter=0)


def test_random_surface_point_contract():
    spec = SurfaceSpec(0.0)
    for seed in range(20):
        p = random_surface_point(spec, seed)
        assert abs(p.sum()) < 1e-12
        assert abs(p @ p - 1) < 1e-10
        assert abs(np.sum(p**3)) < 1e-10
    np.testing.assert_array_equal(random_surface_point(spec, 7), random_surface_point(spec, 7))
    with pytest.raises(DegenerateRegime):
        random_surface_point(SurfaceSpec(0.7), 0)
    with pytest.raises(DegenerateRegime):
        random_surface_point(SurfaceSpec(C_EDGE), 0)


def test_multistart_c0():
    spec = SurfaceSpec(0.0)
    rep = multistart_verify(spec, 1000, seed=42)
    assert rep.unmatched == []
    assert len(rep.matched_orbits) == 4
    assert all(v >= 1 for v in rep.matched_orbits.values())
    assert rep.n_converged == sum(rep.matched_orbits.values()) + len(rep.unmatched)
    assert rep.max_residual < NEWTON_TOL
    with pytest.raises(ValueError):
        multistart_verify(spec, 0)


def test_multistart_c04_three_orbits():
    rep = multistart_verify(SurfaceSpec(0.4), 1000, seed=1)
    assert rep.unmatched == []
    assert sum(v > 0 for v in rep.matched_orbits.values()) == 3


def test_multistart_deterministic():
    a = multistart_verify(SurfaceSpec(0.25), 50, seed=3)
    b = multistart_verify(SurfaceSpec(0.25), 50, seed=3)
    assert a.matched_orbits == b.matched_orbits
    assert a.max_residual == b.max_residual and a.n_converged == b.n_converged


def test_converged_states_take_at_most_three_values():
    spec = SurfaceSpec(-0.3)
    orbits = enumerate_orbits(spec)
    rng = np.random.default_rng(8)
    for _ in range(200):
        x = random_surface_point(spec, rng)
        s = newton_solve(KktState(x, rng.standard_normal(3)), spec)
        if s is None:
            continue
        assert distinct_value_count(s.point, spec.tol_distinct) <= 3
        assert match_state(s, orbits, spec) is not None


def test_probe_smooth_points_at_zero():
    spec = SurfaceSpec(0.0)
    by_index = {o.morse_index: o for o in enumerate_orbits(spec)}
    assert local_extremum_probe(by_index[2].representative, spec).verdict == "LocalMax"
    assert local_extremum_probe(by_index[1].representative, spec).verdict == "Neither"
    res = local_extremum_probe(by_index[0].representative, spec)
    assert res.verdict == "LocalMin" and res.margin > 0


@pytest.mark.parametrize("c", [C_SING, -C_SING])
def test_probe_singular_points_definite(c):
    spec = SurfaceSpec(c)
    (o,) = [o for o in enumerate_orbits(spec) if o.morse_index == SINGULAR]
    res = local_extremum_probe(o.representative, spec, seed=5)
    assert res.verdict in ("LocalMin", "LocalMax")
    assert res.margin > 0
    assert res.n_samples == 200
