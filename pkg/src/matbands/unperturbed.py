"""Closed-form spectral data of the free and constant-potential operators.

Band-energy branches of the constant potential C are ``(2 pi k + t)^2 + mu_j``.
Everything asymptotic (radii, safe intervals, gap windows) is built on top of
them together with the constant ``c1`` and index thresholds carried by
:class:`AsymptoticParams`.

Indices follow the mathematical convention: distinct eigenvalues of C are
``j = 1..p``; Fourier indices ``k`` are signed integers; window indices ``s``
label the energies ``(pi s)^2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .potential import MatrixPotential, MeanSpectrum, fourier_tail, mean_matrix, mean_spectrum

Interval = tuple[float, float]


@dataclass(frozen=True)
class AsymptoticParams:
    c1: float = 1.0
    N: int = 3
    N1: int = 6
    N2: int = 6
    N3: int = 7
    tol: float = 1e-9

    def __post_init__(self):
        if not self.c1 > 0:
            raise ValueError(f"c1 must be positive, got {self.c1}")
        if not (self.N <= self.N1 <= self.N2 <= self.N3):
            raise ValueError(f"thresholds must satisfy N <= N1 <= N2 <= N3, got "
                             f"{(self.N, self.N1, self.N2, self.N3)}")
        if self.N < 2:
            raise ValueError("N must be >= 2 (ln|k| vanishes at |k| = 1)")


@dataclass(frozen=True)
class UnperturbedEigenvalue:
    k: int
    j: int
    t: float
    value: float
    multiplicity: int


@dataclass(frozen=True)
class ExceptionalPoint:
    parity_index: int
    j: int
    i: int
    t_star: float


@dataclass(frozen=True)
class SafeIntervalSet:
    k: int
    j: int
    delta_k: float
    intervals: tuple[Interval, ...]

    @property
    def v(self) -> int:
        return len(self.intervals)

    @property
    def empty(self) -> bool:
        return not self.intervals


@dataclass(frozen=True)
class GapWindow:
    s: int
    lower: float
    upper: float
    kind: str
    j: int | None = None
    gamma: float | None = None
    subintervals: tuple[Interval, ...] = ()

    def contains(self, a: float, b: float) -> bool:
        """Is the closed interval [a, b] inside the window (open pieces)?"""
        if self.kind == "U":
            return self.lower < a and b < self.upper
        return any(lo < a and b < hi for lo, hi in self.subintervals)


@dataclass(frozen=True)
class ConditionOneReport:
    applicable: bool
    best_triple: tuple[int, int, int] | None
    d: float
    satisfied: bool
    per_triple: dict = field(default_factory=dict)


# --- branches of L(O) and L(C) ---------------------------------------------

def mu_kj(k: int, j: int, t: float, spectrum: MeanSpectrum) -> UnperturbedEigenvalue:
    if not -math.pi < t <= math.pi:
        raise ValueError(f"t={t} outside (-pi, pi]")
    mu = spectrum.mu(j)
    return UnperturbedEigenvalue(k, j, t, (2 * math.pi * k + t) ** 2 + mu,
                                 spectrum.multiplicities[j - 1])


def branch_values(ks, t, spectrum: MeanSpectrum) -> np.ndarray:
    """Array ``[k, j] -> (2 pi k + t)^2 + mu_j`` for vectorised use."""
    ks = np.asarray(ks, dtype=float)
    return (2 * np.pi * ks[:, None] + t) ** 2 + spectrum.distinct_values[None, :]


def free_multiplicity(k: int, t: float, m: int) -> int:
    if not -math.pi < t <= math.pi:
        raise ValueError(f"t={t} outside (-pi, pi]")
    if (t == 0 and k != 0) or t == math.pi:
        return 2 * m
    return m


def exceptional_points(k: int, j: int, spectrum: MeanSpectrum) -> list[ExceptionalPoint]:
    """Quasimomenta in [0, pi] where branch (k, j) meets branch (-k, i) or (-k-1, i).

    Signed ``k`` is accepted; the formulas are valid for either sign.
    """
    if k == 0:
        raise ValueError("k must be non-zero")
    mu_j = spectrum.mu(j)
    out = []
    for i in range(1, spectrum.p + 1):
        diff = spectrum.mu(i) - mu_j
        t_even = diff / (4 * math.pi * (2 * k))
        t_odd = math.pi + diff / (4 * math.pi * (2 * k + 1))
        for parity, ts in ((2 * k, t_even), (2 * k + 1, t_odd)):
            if 0.0 <= ts <= math.pi:
                out.append(ExceptionalPoint(parity, j, i, ts))
    return out


# --- asymptotic radii --------------------------------------------------------

def epsilon_k(k: int, q_k: float, params: AsymptoticParams) -> float:
    if abs(k) < 2:
        raise ValueError(f"epsilon_k needs |k| >= 2, got {k}")
    if q_k < 0:
        raise ValueError("q_k must be non-negative")
    return params.c1 * (math.log(abs(k)) / abs(k) + q_k)


def delta_k(k: int, eps_values: Sequence[float]) -> float:
    """Half-width of the deleted quasimomentum balls.

    ``eps_values`` are the radii of the branches that can collide with branch k
    (indices k, -k, -k-1); the equality case of the separation requirement is
    used, ``4 pi (2|k| - 2) delta = 2 max(eps)``.
    """
    if abs(k) < 2:
        raise ValueError(f"delta_k needs |k| >= 2, got {k}")
    return max(eps_values) / (4 * math.pi * (abs(k) - 1))


def gamma_k(k: int, delta: float, eps: float, spread: float) -> float:
    """Explicit radius of the S-windows.

    Dominates the eps-extension of the image of a deleted delta-ball under the
    branch map (slope at most ``2(2 pi |k| + pi)``) plus the quadratic shift of
    the collision energy away from the window centre.
    """
    return (2 * (2 * math.pi * abs(k) + math.pi) * delta + eps
            + (spread / (4 * math.pi * (2 * abs(k) - 1))) ** 2)


@dataclass(frozen=True)
class Radii:
    """Radii eps_k, delta_k, gamma_k for one potential and parameter set."""

    spectrum: MeanSpectrum
    params: AsymptoticParams
    tail: Callable[[int], float]

    @classmethod
    def for_potential(cls, potential: MatrixPotential, params: AsymptoticParams,
                      spectrum: MeanSpectrum | None = None) -> "Radii":
        if spectrum is None:
            spectrum = mean_spectrum(mean_matrix(potential))
        return cls(spectrum, params, lambda k: fourier_tail(potential, k))

    @classmethod
    def synthetic(cls, spectrum: MeanSpectrum, params: AsymptoticParams,
                  tail: Callable[[int], float] | float = 0.0) -> "Radii":
        if not callable(tail):
            value = float(tail)
            return cls(spectrum, params, lambda k: value)
        return cls(spectrum, params, tail)

    def with_params(self, **changes) -> "Radii":
        return replace(self, params=replace(self.params, **changes))

    def eps(self, k: int) -> float:
        return epsilon_k(k, self.tail(abs(k)), self.params)

    def eps_s(self, s: int) -> float:
        """eps(s) = eps_k for s in {2k, 2k+1}."""
        return self.eps(s // 2)

    def delta(self, k: int) -> float:
        # eps_{-k} == eps_k since the tail only sees |n|; index -k-1 has
        # |.| = |k|+1 for k > 0 and |k|-1 for k < 0 (skipped below 2)
        partners = [self.eps(k)]
        other = abs(-k - 1)
        if other >= 2:
            partners.append(self.eps(other))
        return delta_k(k, partners)

    def gamma(self, k: int) -> float:
        return gamma_k(k, self.delta(k), self.eps(k), self.spectrum.spread)

    def gamma_s(self, s: int) -> float:
        return self.gamma(s // 2)


# --- interval helpers --------------------------------------------------------

def subtract_open_balls(base: Interval, centres: Sequence[float], radius: float
                        ) -> list[Interval]:
    """Closed remnant of ``base`` after removing open balls of ``radius``."""
    lo, hi = base
    holes = sorted((max(lo, c - radius), min(hi, c + radius))
                   for c in centres if c + radius > lo and c - radius < hi)
    merged: list[list[float]] = []
    for a, b in holes:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    out = []
    cursor = lo
    for a, b in merged:
        if a > cursor:
            out.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < hi:
        out.append((cursor, hi))
    return [(a, b) for a, b in out if b > a]


def intersect_unions(unions: Sequence[Sequence[Interval]]) -> list[Interval]:
    """Intersection of several unions of open intervals."""
    current = sorted(unions[0])
    for other in unions[1:]:
        nxt = []
        for a, b in current:
            for c, d in other:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    nxt.append((lo, hi))
        current = sorted(nxt)
    return current


# --- safe intervals and windows ---------------------------------------------

def safe_intervals(k: int, j: int, radii: Radii) -> SafeIntervalSet:
    if abs(k) < max(2, radii.params.N2):
        raise ValueError(f"|k|={abs(k)} below max(2, N2={radii.params.N2})")
    dk = radii.delta(k)
    if not dk > 0:
        raise ValueError("delta_k must be positive")
    centres = [e.t_star for e in exceptional_points(k, j, radii.spectrum)]
    parts = subtract_open_balls((0.0, math.pi), centres, dk)
    return SafeIntervalSet(k, j, dk, tuple(parts))


def window_U(s: int, radii: Radii, boundary: bool = False) -> GapWindow:
    """U(s); ``boundary=True`` also admits s = N1 (same formula)."""
    if s < radii.params.N1 or (s == radii.params.N1 and not boundary):
        raise ValueError(f"s={s} must exceed N1={radii.params.N1}")
    mu = radii.spectrum.distinct_values
    centre = (math.pi * s) ** 2
    return GapWindow(s, centre + mu[0] - radii.eps_s(s - 1),
                     centre + mu[-1] + radii.eps_s(s), "U")


def window_S(j: int, s: int, radii: Radii) -> GapWindow:
    if s <= radii.params.N3:
        raise ValueError(f"s={s} must exceed N3={radii.params.N3}")
    g = radii.gamma_s(s)
    mu = radii.spectrum.distinct_values
    mu_j = radii.spectrum.mu(j)
    centre = (math.pi * s) ** 2
    pieces = sorted({(centre + (mu_i + mu_j) / 2 - g, centre + (mu_i + mu_j) / 2 + g)
                     for mu_i in mu})
    return GapWindow(s, pieces[0][0], pieces[-1][1], "S", j=j, gamma=g,
                     subintervals=tuple(pieces))


def overlap_interval(s: int, radii: Radii) -> Interval:
    """Interval [(s pi)^2 + mu_p + eps(s), (s pi + pi)^2 + mu_1 - eps(s)]."""
    mu = radii.spectrum.distinct_values
    e = radii.eps_s(s)
    return ((s * math.pi) ** 2 + mu[-1] + e, (s * math.pi + math.pi) ** 2 + mu[0] - e)


# --- Condition 1 -------------------------------------------------------------

def condition_one(spectrum: MeanSpectrum, tol: float = 1e-12) -> ConditionOneReport:
    """Best separation over triples of distinct eigenvalues of C.

    For every triple j1 < j2 < j3 the smallest diameter of
    ``{mu_j1 + mu_i1, mu_j2 + mu_i2, mu_j3 + mu_i3}`` over all ``i`` is computed;
    ``d`` is the largest of these minima.
    """
    p = spectrum.p
    if p < 3:
        return ConditionOneReport(False, None, 0.0, False, {})
    mu = spectrum.distinct_values
    sums = mu[:, None] + mu[None, :]
    per_triple = {}
    for j1, j2, j3 in itertools.combinations(range(p), 3):
        a = sums[j1][:, None, None]
        b = sums[j2][None, :, None]
        c = sums[j3][None, None, :]
        diam = np.maximum(np.maximum(a, b), c) - np.minimum(np.minimum(a, b), c)
        per_triple[(j1 + 1, j2 + 1, j3 + 1)] = float(diam.min())
    best = max(per_triple, key=lambda tr: (per_triple[tr], tuple(-x for x in tr)))
    d = per_triple[best]
    return ConditionOneReport(True, best, d, d > tol, per_triple)


# --- threshold scans ---------------------------------------------------------

def lemma1_disjoint(k: int, radii: Radii, n_min: int, samples: int = 9) -> bool:
    """Closed eps-neighbourhoods of branch (k, j) avoid all other branches with
    |n| >= n_min, at sample points of every safe interval of every j."""
    spec = radii.spectrum
    p = spec.p
    ns = np.array([n for n in range(-abs(k) - 3, abs(k) + 4) if abs(n) >= n_min])
    eps_n = np.array([radii.eps(n) for n in ns])
    eps_k = radii.eps(k)
    dk = radii.delta(k)
    for j in range(1, p + 1):
        centres = [e.t_star for e in exceptional_points(k, j, spec)]
        parts = subtract_open_balls((0.0, math.pi), centres, dk)
        for a, b in parts:
            for t in np.linspace(a, b, samples):
                vals = branch_values(ns, t, spec)
                own = (2 * math.pi * k + t) ** 2 + spec.mu(j)
                gap = np.abs(vals - own) - (eps_k + eps_n[:, None])
                mask = np.ones_like(gap, dtype=bool)
                own_row = np.flatnonzero(ns == k)
                if own_row.size:
                    mask[own_row[0], j - 1] = False
                if np.any(gap[mask] <= 0):
                    return False
    return True


def overlap_premise(s: int, radii: Radii) -> bool:
    """I(s) non-empty and U(s), U(s+1) disjoint."""
    a, b = overlap_interval(s, radii)
    mu = radii.spectrum.distinct_values
    upper_s = (math.pi * s) ** 2 + mu[-1] + radii.eps_s(s)
    lower_next = (math.pi * (s + 1)) ** 2 + mu[0] - radii.eps_s(s)
    return a < b and upper_s < lower_next


class ThresholdError(RuntimeError):
    """No index threshold below the scan limit (radii too large for the mean spectrum)."""


def _first_persistent(start: int, pred: Callable[[int], bool], run: int = 5,
                      limit: int = 2000) -> int:
    s = start
    while s < limit:
        for r in range(run):
            if not pred(s + r):
                s += r + 1
                break
        else:
            return s
    raise ThresholdError(f"no threshold found below {limit}")


def auto_thresholds(radii: Radii, N: int | None = None, run: int = 5) -> AsymptoticParams:
    """Index thresholds from the unperturbed premises.

    ``N1`` is the first window index (>= max(4, 2N)) from which the overlap
    intervals are non-empty and consecutive U-windows are disjoint; ``N2`` the
    first Fourier index from which the closed radius neighbourhoods of
    distinct branches stay disjoint on the safe intervals.  Each must hold for
    ``run`` consecutive indices.
    """
    N = radii.params.N if N is None else N
    base = radii.with_params(N=N, N1=N, N2=N, N3=N)
    N1 = _first_persistent(max(4, 2 * N), lambda s: overlap_premise(s, base), run)
    N2 = _first_persistent(max(2, N), lambda k: lemma1_disjoint(k, base, max(2, N))
                           and lemma1_disjoint(-k, base, max(2, N)), run, limit=400)
    N2 = max(N2, N1)
    return replace(radii.params, N=N, N1=N1, N2=N2, N3=N2 + 1)
