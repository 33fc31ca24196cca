import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matbands.potential import MatrixPotential, MeanSpectrum
from matbands.unperturbed import (
    AsymptoticParams,
    Radii,
    ThresholdError,
    auto_thresholds,
    branch_values,
    condition_one,
    delta_k,
    epsilon_k,
    exceptional_points,
    free_multiplicity,
    gamma_k,
    intersect_unions,
    mu_kj,
    overlap_interval,
    safe_intervals,
    subtract_open_balls,
    window_S,
    window_U,
)

PI = math.pi


def brute_force_d(mu):
    """Independent exhaustive oracle: loops over every index tuple."""
    best = 0.0
    p = len(mu)
    for j1, j2, j3 in itertools.combinations(range(p), 3):
        smallest = math.inf
        for i1 in range(p):
            for i2 in range(p):
                for i3 in range(p):
                    vals = (mu[j1] + mu[i1], mu[j2] + mu[i2], mu[j3] + mu[i3])
                    smallest = min(smallest, max(vals) - min(vals))
        best = max(best, smallest)
    return best


def crossing_oracle(k, j, mu, n=200001):
    """Crossings on [0, pi] of branch (k, j) with (-k, i) and (-k-1, i), by sign changes."""
    t = np.linspace(0, PI, n)
    out = []
    for kk in (-k, -k - 1):
        for i in range(len(mu)):
            # difference of squares expanded, so f(0) carries no cancellation error
            f = 2 * PI * (k - kk) * (2 * PI * (k + kk) + 2 * t) + mu[j] - mu[i]
            idx = np.flatnonzero(np.sign(f[:-1]) * np.sign(f[1:]) <= 0)
            for a in idx:
                # linear interpolation is exact: f is affine in t
                ta = t[a] - f[a] * (t[a + 1] - t[a]) / (f[a + 1] - f[a]) if f[a + 1] != f[a] else t[a]
                out.append(ta)
    return sorted(set(round(x, 9) for x in out))


def test_branches():
    sp = MeanSpectrum.from_values([-1.0, 2.0], [2, 1])
    e = mu_kj(3, 2, 0.5, sp)
    assert e.value == pytest.approx((6 * PI + 0.5) ** 2 + 2.0) and e.multiplicity == 1
    vals = branch_values([-1, 0, 1], 0.25, sp)
    assert vals.shape == (3, 2)
    assert vals[2, 0] == pytest.approx((2 * PI + 0.25) ** 2 - 1)
    with pytest.raises(ValueError):
        mu_kj(1, 1, -PI, sp)


def test_free_multiplicities():
    assert free_multiplicity(0, 0.0, 3) == 3
    assert free_multiplicity(2, 0.0, 3) == 6
    assert free_multiplicity(-1, PI, 2) == 4
    assert free_multiplicity(5, 1.0, 2) == 2


def test_exceptional_points_examples():
    sp = MeanSpectrum.from_values([0.0, 1.0])
    # mu_i = mu_j: even collision at t = 0, odd collision at t = pi
    pts = {(e.parity_index, e.i): e.t_star for e in exceptional_points(5, 1, sp)}
    assert pts[(10, 1)] == 0.0
    assert pts[(11, 1)] == pytest.approx(PI)
    assert pts[(10, 2)] == pytest.approx(1 / (40 * PI))
    # odd collision with mu_i > mu_j lands above pi and is dropped
    assert (11, 2) not in pts


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=4, unique=True),
       st.integers(2, 30).flatmap(lambda a: st.sampled_from([a, -a])))
def test_exceptional_points_match_crossing_oracle(mu, k):
    mu = sorted(mu)
    if min(np.diff(mu), default=1.0) < 1e-3:
        return
    sp = MeanSpectrum.from_values(mu)
    for j in range(1, sp.p + 1):
        ours = sorted(set(round(e.t_star, 9) for e in exceptional_points(k, j, sp)))
        ref = crossing_oracle(k, j - 1, sp.distinct_values)
        assert np.allclose(ours, ref, atol=1e-7), (ours, ref)


def test_radius_formulas():
    params = AsymptoticParams(c1=2.0)
    assert epsilon_k(4, 0.1, params) == pytest.approx(2.0 * (math.log(4) / 4 + 0.1))
    assert epsilon_k(-4, 0.1, params) == epsilon_k(4, 0.1, params)
    assert delta_k(5, [0.2, 0.3]) == pytest.approx(0.3 / (16 * PI))
    g = gamma_k(5, 0.01, 0.2, 3.0)
    assert g == pytest.approx(2 * (10 * PI + PI) * 0.01 + 0.2 + (3 / (36 * PI)) ** 2)
    with pytest.raises(ValueError):
        epsilon_k(1, 0.0, params)


def test_params_validation():
    with pytest.raises(ValueError):
        AsymptoticParams(c1=0.0)
    with pytest.raises(ValueError):
        AsymptoticParams(N=6, N1=5)


def _constant_eps_radii(mu, eps=0.1, **kw):
    # tail chosen so that c1 (ln k / k + q_k) == eps for every k
    c1 = eps
    params = AsymptoticParams(c1=c1, **kw)
    return Radii.synthetic(MeanSpectrum.from_values(mu), params,
                           lambda k: 1.0 - math.log(k) / k)


def test_window_U_example():
    r = _constant_eps_radii([-1.0, 1.0])
    w = window_U(10, r)
    assert w.lower == pytest.approx((10 * PI) ** 2 - 1.1)
    assert w.upper == pytest.approx((10 * PI) ** 2 + 1.1)
    assert w.contains(w.lower + 0.1, w.upper - 0.1)
    assert not w.contains(w.lower - 0.1, w.upper)
    with pytest.raises(ValueError):
        window_U(r.params.N1, r)
    assert window_U(r.params.N1, r, boundary=True).s == r.params.N1


def test_window_U_degenerates_to_point():
    r = Radii.synthetic(MeanSpectrum.from_values([0.0]), AsymptoticParams(c1=1e-300))
    w = window_U(10, r)
    assert w.upper - w.lower == pytest.approx(0.0, abs=1e-9)


def test_consecutive_U_windows_disjoint():
    r = Radii.synthetic(MeanSpectrum.from_values([0.0, 2.0]), AsymptoticParams())
    for s in range(10, 60):
        assert window_U(s, r).upper < window_U(s + 1, r).lower


def test_window_S_and_overlap_interval():
    r = _constant_eps_radii([0.0, 1.0, 3.0])
    s = 20
    w = window_S(2, s, r)
    g = r.gamma_s(s)
    centres = sorted((s * PI) ** 2 + (mi + 1.0) / 2 for mi in (0.0, 1.0, 3.0))
    assert [p[0] + g for p in w.subintervals] == pytest.approx(centres)
    a, b = overlap_interval(s, r)
    assert a == pytest.approx((s * PI) ** 2 + 3.0 + 0.1)
    assert b == pytest.approx(((s + 1) * PI) ** 2 - 0.1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10), max_size=6), st.floats(0.01, 2.0))
def test_subtract_open_balls_against_sampling(centres, radius):
    parts = subtract_open_balls((0.0, 10.0), centres, radius)
    for a, b in parts:
        assert 0 <= a < b <= 10
    for (_, b), (c, _) in zip(parts, parts[1:]):
        assert b < c
    for x in np.linspace(0, 10, 1001):
        inside = any(a <= x <= b for a, b in parts)
        removed = any(abs(x - c) < radius for c in centres)
        near_edge = any(abs(abs(x - c) - radius) < 1e-9 for c in centres)
        if not near_edge:
            assert inside != removed


def test_intersect_unions():
    got = intersect_unions([[(0, 2), (3, 5)], [(1, 4)], [(1.5, 3.5)]])
    assert got == [(1.5, 2), (3, 3.5)]
    assert intersect_unions([[(0, 1)], [(1, 2)]]) == []


def test_safe_intervals_against_dense_sampling():
    sp = MeanSpectrum.from_values([-0.7, 0.4, 1.9])
    r = Radii.synthetic(sp, AsymptoticParams(c1=0.5, N2=6, N3=7), 0.05)
    for k in (6, -6, 9):
        for j in (1, 2, 3):
            sis = safe_intervals(k, j, r)
            stars = crossing_oracle(k, j - 1, sp.distinct_values)
            assert sis.v == len(sis.intervals)
            for t in np.linspace(0, PI, 2001):
                dist = min(abs(t - s) for s in stars)
                if abs(dist - sis.delta_k) < 1e-9:
                    continue
                assert any(a <= t <= b for a, b in sis.intervals) == (dist >= sis.delta_k)
    with pytest.raises(ValueError):
        safe_intervals(3, 1, r)


@pytest.mark.parametrize("mu, d", [([0, 1, 2], 0.0), ([0, 1, 3], 1.0), ([0, 1], 0.0)])
def test_condition_one_examples(mu, d):
    rep = condition_one(MeanSpectrum.from_values(mu))
    assert rep.d == pytest.approx(d, abs=1e-15)
    assert rep.d == pytest.approx(brute_force_d(mu), abs=1e-15)
    assert rep.satisfied == (d > 0)
    assert rep.applicable == (len(mu) >= 3)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=3, max_size=6, unique=True))
def test_condition_one_matches_brute_force(mu):
    mu = sorted(float(x) for x in mu)
    rep = condition_one(MeanSpectrum.from_values(mu))
    assert rep.d == brute_force_d(mu)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True),
       st.floats(0.01, 3.0), st.floats(0.0, 0.5))
def test_auto_thresholds_are_ordered_and_premises_hold(mu, c1, tail0):
    # half-integer spacing and a tail vanishing beyond k = 2, as for a trigonometric potential
    sp = MeanSpectrum.from_values(sorted(x / 2 for x in mu))
    r = Radii.synthetic(sp, AsymptoticParams(c1=c1), lambda k: tail0 if k <= 2 else 0.0)
    params = auto_thresholds(r)
    assert params.N <= params.N1 <= params.N2 < params.N3
    rr = Radii(sp, params, r.tail)
    for s in range(params.N1, params.N1 + 5):
        a, b = overlap_interval(s, rr)
        assert a < b
        assert window_U(s + 1, rr).upper < window_U(s + 2, rr).lower


def test_auto_thresholds_gives_up_without_decay():
    sp = MeanSpectrum.from_values([0.0, 0.1])
    with pytest.raises(ThresholdError):
        auto_thresholds(Radii.synthetic(sp, AsymptoticParams(c1=1.0), 0.5))


def test_auto_thresholds_for_a_potential():
    q = MatrixPotential.from_modes({0: [[0, 0.5], [0.5, 2]], 1: [[1, 0.3], [0.2, 0.5]]})
    params = auto_thresholds(Radii.for_potential(q, AsymptoticParams(c1=0.01)))
    assert (params.N, params.N1, params.N2, params.N3) == (3, 6, 6, 7)
