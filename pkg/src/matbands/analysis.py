"""Bands, gaps and numerical checks of the band-overlap and finite-gap results.

Every check returns a :class:`Verdict` whose witnesses are plain numbers, so a
report can be re-checked without rerunning the solver.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import monodromy
from .bloch import (BandGrid, SolverConfig, _lowest, bands_needed, hp_truncation,
                    precise_eigenvalues,
                    sample_bands, solve)
from .potential import MatrixPotential, MeanSpectrum, mean_matrix, mean_spectrum
from .unperturbed import (
    AsymptoticParams,
    Radii,
    auto_thresholds,
    branch_values,
    condition_one,
    intersect_unions,
    overlap_interval,
    safe_intervals,
    window_S,
    window_U,
)

log = logging.getLogger(__name__)

PASS, FAIL, NA = "pass", "fail", "not-applicable"


@dataclass(frozen=True)
class Band:
    n: int
    lo: float
    hi: float
    t_lo: float = float("nan")
    t_hi: float = float("nan")


@dataclass(frozen=True)
class Gap:
    lower: float
    upper: float
    between: tuple[int, int]
    window_s: int | None = None
    width: float | None = None
    digits: int | None = None

    def __post_init__(self):
        if self.width is None:
            object.__setattr__(self, "width", self.upper - self.lower)

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "width": self.width,
                "between": list(self.between), "window_s": self.window_s,
                "digits": self.digits}


@dataclass
class Verdict:
    status: str
    witnesses: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {"status": self.status, "witnesses": self.witnesses,
                "violations": self.violations, **self.notes}


# --- bands and gaps ----------------------------------------------------------

def _canonical_t(t: float) -> float:
    return math.pi if t == -math.pi else float(t)


def extract_bands(grid: BandGrid) -> list[Band]:
    out = []
    for n in range(1, grid.n_bands + 1):
        row = grid.band(n)
        i_lo, i_hi = int(np.argmin(row)), int(np.argmax(row))
        out.append(Band(n, float(row[i_lo]), float(row[i_hi]),
                        _canonical_t(grid.t_values[i_lo]), _canonical_t(grid.t_values[i_hi])))
    return out


def extract_gaps(bands: Sequence[Band], touch_tol: float = 0.0) -> list[Gap]:
    """Complement of the union of the closed bands above the lowest energy.

    Bands closer than ``touch_tol`` count as touching.
    """
    if not bands:
        return []
    order = sorted(bands, key=lambda b: (b.lo, b.n))
    gaps = []
    reach, owner = order[0].hi, order[0].n
    for b in order[1:]:
        if b.lo - reach > touch_tol:
            gaps.append(Gap(reach, b.lo, (owner, b.n)))
        if b.hi > reach:
            reach, owner = b.hi, b.n
    return gaps


def _golden_extremum(fun, lo: float, hi: float, sign: float, xtol: float = 1e-9):
    g = (math.sqrt(5) - 1) / 2
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = sign * fun(x1), sign * fun(x2)
    while hi - lo > xtol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = sign * fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = sign * fun(x2)
    return (x1, sign * f1) if f1 >= f2 else (x2, sign * f2)


def refine_edge(potential: MatrixPotential, n: int, t0: float, dt: float,
                K: int, kind: str) -> tuple[float, float]:
    """Locate max (``kind='hi'``) or min (``'lo'``) of band n near grid point t0.

    ``K`` is a truncation already certified for band n.
    """
    sign = 1.0 if kind == "hi" else -1.0

    def lam(t):
        return float(_lowest(potential, np.array([t]), K, n)[0, n - 1])

    base = lam(t0)
    if t0 in (0.0, math.pi):
        h = 1e-3 * dt
        if sign * lam(t0 - h) <= sign * base and sign * lam(t0 + h) <= sign * base:
            return t0, base
    t_star, val = _golden_extremum(lam, t0 - dt, t0 + dt, sign, xtol=1e-7)
    if sign * base >= sign * val:
        return t0, base
    return t_star, val


def resolve_gaps(potential: MatrixPotential, grid: BandGrid, config: SolverConfig,
                 dps: int = 0, candidate_tol: float | None = None,
                 oracle: bool = False) -> list[Gap]:
    """Gaps with refined edges.

    Every adjacent band pair whose sampled ranges come within ``candidate_tol``
    of separating is re-examined: the band extremum is relocated by a
    golden-section search in t, and the edge energies are recomputed either by
    monodromy root refinement (``oracle``) or, with ``dps > 0``, by
    extended-precision bisection of the Galerkin matrix.
    """
    bands = extract_bands(grid)
    dt = float(np.max(np.diff(grid.t_values))) if len(grid.t_values) > 1 else 0.1
    gaps = []
    for b, c in zip(bands[:-1], bands[1:]):
        scale = max(1.0, abs(b.hi))
        tol = candidate_tol if candidate_tol is not None else \
            max(100 * config.convergence_tol, 1e-9 * scale)
        if c.lo - b.hi <= -tol:
            continue
        t_hi, alpha = refine_edge(potential, b.n, b.t_hi, dt, grid.truncation, "hi")
        t_lo, beta = refine_edge(potential, c.n, c.t_lo, dt, grid.truncation, "lo")
        alpha, beta = max(alpha, b.hi), min(beta, c.lo)
        # a band can peak between samples (crossings of decoupled channels);
        # the multipliers at the midpoint tell whether anything covers it
        if beta > alpha - tol:
            cover = monodromy.covering_quasimomenta(potential, 0.5 * (alpha + beta))
            if cover.size:
                log.debug("bands %d/%d: midpoint covered at t=%s", b.n, c.n, cover)
                continue
        if dps > 0:
            K = hp_truncation(potential, c.n)
            a_mp = precise_eigenvalues(potential, t_hi, [b.n], [alpha], K, dps)[0]
            b_mp = precise_eigenvalues(potential, t_lo, [c.n], [beta], K, dps)[0]
            width = b_mp - a_mp
            floor = mpmath.mpf(10) ** (-(dps - 12)) * scale
            if width > floor:
                gaps.append(Gap(float(a_mp), float(b_mp), (b.n, c.n), width=float(width),
                                digits=dps))
            continue
        if oracle and beta - alpha > tol:
            w = 0.45 * (beta - alpha)
            try:
                alpha = monodromy.refine_eigenvalue(potential, t_hi, alpha, w)
                beta = monodromy.refine_eigenvalue(potential, t_lo, beta, w)
            except monodromy.OracleError as exc:
                log.warning("edge refinement skipped for bands %d/%d: %s", b.n, c.n, exc)
        if beta - alpha > tol:
            gaps.append(Gap(alpha, beta, (b.n, c.n)))
    return gaps


def attach_windows(gaps: Iterable[Gap], radii: Radii) -> list[Gap]:
    out = []
    for g in gaps:
        s = containing_window(g, radii)
        out.append(replace(g, window_s=s))
    return out


def containing_window(gap: Gap, radii: Radii) -> int | None:
    hits = windows_containing(gap, radii)
    return hits[0] if len(hits) == 1 else None


def windows_containing(gap: Gap, radii: Radii) -> list[int]:
    centre = math.sqrt(max(gap.lower - radii.spectrum.distinct_values[0], 0.0)) / math.pi
    hits = []
    # a gap just above (pi N1)^2 sits between I(N1-1) and I(N1), hence in U(N1)
    for s in range(max(radii.params.N1, int(centre) - 2), int(centre) + 4):
        if window_U(s, radii, boundary=True).contains(gap.lower, gap.upper):
            hits.append(s)
    return hits


# --- calibration of c1 -------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    c1: float
    raw: float
    witness: dict


def fit_c1(t_values, values, spectrum: MeanSpectrum, tail, N: int, n_forward: int,
           rel_margin: float = 1e-6, floor: float = 1e-6) -> FitResult:
    """Smallest c1 putting the large computed eigenvalues in their radius windows.

    Both directions are enforced at each t: every eigenvalue among the first
    ``n_forward`` whose nearest branch has |k| >= N lies within
    ``c1 (ln|k|/|k| + q_k)`` of some large branch, and every large branch
    below ``lambda_{n_forward}(t)`` has its ``m_j`` nearest eigenvalues within
    that radius.
    """
    values = np.atleast_2d(values)
    mu = spectrum.distinct_values
    mult = np.array(spectrum.multiplicities)
    best, witness = 0.0, {}
    for t, row in zip(np.asarray(t_values, float), values):
        kmax = int(math.sqrt(max(row[-1] - mu[0], 0.0)) / (2 * math.pi)) + 2
        ks = np.arange(-kmax, kmax + 1)
        br = branch_values(ks, t, spectrum)
        den = np.array([math.log(abs(k)) / abs(k) + tail(abs(k)) if abs(k) >= 2 else np.inf
                        for k in ks])
        large = np.abs(ks) >= N
        lam = row[:n_forward]
        dist = np.abs(lam[:, None, None] - br[None])
        flat = dist.reshape(len(lam), -1).argmin(axis=1)
        near_k = ks[flat // len(mu)]
        ratio = (dist / den[None, :, None])[:, large, :].reshape(len(lam), -1).min(axis=1)
        for i in np.flatnonzero(np.abs(near_k) >= N):
            if ratio[i] > best:
                best = float(ratio[i])
                witness = {"direction": "eigenvalue", "t": float(t), "lambda": float(lam[i]),
                           "k": int(near_k[i]), "ratio": best}
        top = lam[-1]
        for a in np.flatnonzero(large):
            for j in range(len(mu)):
                if br[a, j] > top:
                    continue
                d = np.sort(np.abs(row - br[a, j]))[mult[j] - 1]
                r = d / den[a]
                if r > best:
                    best = float(r)
                    witness = {"direction": "branch", "t": float(t), "k": int(ks[a]),
                               "j": j + 1, "mu_kj": float(br[a, j]), "ratio": best}
    return FitResult(max(best * (1 + rel_margin), floor), best, witness)


# --- theorem checks ----------------------------------------------------------

def verify_theorem1(bands: Sequence[Band], radii: Radii, s_values: Iterable[int]) -> Verdict:
    """Overlap intervals I(s) inside each of the bands sm+1..sm+m."""
    m = radii.spectrum.m
    verdict = Verdict(PASS)
    for s in s_values:
        if s < radii.params.N1:
            continue
        if (s + 1) * m > len(bands):
            verdict.status = FAIL if verdict.status == FAIL else NA
            verdict.notes["insufficient_bands"] = f"need {(s + 1) * m}, have {len(bands)}"
            break
        a, b = overlap_interval(s, radii)
        entry = {"s": s, "interval": [a, b], "bands": list(range(s * m + 1, s * m + m + 1))}
        if a > b:
            entry["empty_interval"] = True
            verdict.witnesses.append(entry)
            continue
        for r in range(s * m + 1, s * m + m + 1):
            band = bands[r - 1]
            if not (band.lo <= a and b <= band.hi):
                verdict.status = FAIL
                verdict.violations.append({"s": s, "band": r, "interval": [a, b],
                                           "band_range": [band.lo, band.hi]})
        verdict.witnesses.append(entry)
    if verdict.violations:
        verdict.notes["first_failing_s"] = verdict.violations[0]["s"]
    return verdict


def verify_corollary1_theorem2(gaps: Sequence[Gap], radii: Radii,
                               s_max: int | None = None) -> tuple[Verdict, Verdict]:
    """Gap windows U(s), gap position between bands sm and sm+1, and gap length."""
    m = radii.spectrum.m
    N1 = radii.params.N1
    placement, length = Verdict(PASS), Verdict(PASS)
    for g in gaps:
        if g.lower <= (math.pi * N1) ** 2:
            continue
        hits = windows_containing(g, radii)
        if s_max is not None and hits and min(hits) > s_max:
            continue
        rec = {"gap": [g.lower, g.upper], "width": g.width, "between": list(g.between),
               "windows": hits}
        if len(hits) != 1:
            placement.status = FAIL
            placement.violations.append({**rec, "reason": "not in exactly one U(s)"})
            continue
        s = hits[0]
        if tuple(g.between) != (s * m, s * m + 1):
            placement.status = FAIL
            placement.violations.append({**rec, "reason": f"not between bands {s * m} "
                                                          f"and {s * m + 1}"})
        else:
            placement.witnesses.append(rec)
        bound = 2 * max(radii.eps_s(s - 1), radii.eps_s(s))
        lrec = {"s": s, "width": g.width, "bound": bound}
        if g.width > bound:
            length.status = FAIL
            length.violations.append(lrec)
        else:
            length.witnesses.append(lrec)
    return placement, length


def _theorem3_samples(a: float, b: float, interior: int = 9) -> np.ndarray:
    return a + (b - a) * np.arange(interior + 2) / (interior + 1)


def theorem3_plan(radii: Radii, k_values: Iterable[int], interior: int = 9):
    """(k, j, interval, sample t's) for every safe interval; skipped k's separately."""
    plan, skipped = [], []
    for k in k_values:
        if abs(k) < max(2, radii.params.N2):
            skipped.append(k)
            continue
        for j in range(1, radii.spectrum.p + 1):
            sis = safe_intervals(k, j, radii)
            if sis.empty:
                plan.append((k, j, None, None))
            for a, b in sis.intervals:
                plan.append((k, j, (a, b), _theorem3_samples(a, b, interior)))
    return plan, skipped


def _theorem3_count(k_values, spectrum: MeanSpectrum) -> int:
    m = spectrum.m
    kmax = max(abs(k) for k in k_values)
    return m * (2 * kmax + 4)


def verify_theorem3(potential: MatrixPotential, radii: Radii, config: SolverConfig,
                    k_values: Iterable[int], interior: int = 9) -> Verdict:
    """Eigenvalue counts in the radius windows on safe intervals, and band subsets."""
    k_values = list(k_values)
    plan, skipped = theorem3_plan(radii, k_values, interior)
    verdict = Verdict(PASS, notes={"skipped_k": skipped})
    if not any(p[2] is not None for p in plan):
        verdict.status = NA
        verdict.notes["reason"] = "no safe intervals in range"
        return verdict
    spec = radii.spectrum
    count = _theorem3_count(k_values, spec)
    ts = np.concatenate([p[3] for p in plan if p[3] is not None])
    lam_all, _, _ = solve(potential, ts, config, count=count)
    cursor = 0
    for k, j, interval, samples in plan:
        if interval is None:
            verdict.witnesses.append({"k": k, "j": j, "safe_intervals": "none"})
            continue
        lam = lam_all[cursor:cursor + len(samples)]
        cursor += len(samples)
        eps = radii.eps(k)
        mj = spec.multiplicities[j - 1]
        mu = (2 * math.pi * k + samples) ** 2 + spec.mu(j)
        inside = (lam > (mu - eps)[:, None]) & (lam < (mu + eps)[:, None])
        counts = inside.sum(axis=1)
        ls = (lam <= (mu - eps)[:, None]).sum(axis=1)
        bad = [{"t": float(t), "count": int(c)} for t, c in zip(samples, counts) if c != mj]
        rec = {"k": k, "j": j, "interval": list(interval), "m_j": mj,
               "counts": counts.tolist(), "l": sorted(set(ls.tolist()))}
        if bad:
            verdict.status = FAIL
            verdict.violations.append({**rec, "reason": "count", "bad": bad})
            continue
        if len(rec["l"]) != 1:
            verdict.status = FAIL
            verdict.violations.append({**rec, "reason": "band label l not constant"})
            continue
        l = rec["l"][0]
        lo, hi = (mu[0] + eps, mu[-1] - eps) if k > 0 else (mu[-1] + eps, mu[0] - eps)
        rec["image"] = [float(lo), float(hi)]
        if lo <= hi:
            for r in range(l + 1, l + mj + 1):
                vals = lam[:, r - 1]
                if not (vals.min() <= lo and hi <= vals.max()):
                    verdict.status = FAIL
                    verdict.violations.append({**rec, "reason": "image not in band",
                                               "band": r,
                                               "sampled": [float(vals.min()), float(vals.max())]})
        verdict.witnesses.append(rec)
    return verdict


def verify_corollary2(gaps: Sequence[Gap], radii: Radii) -> Verdict:
    verdict = Verdict(PASS)
    N3 = radii.params.N3
    for g in gaps:
        hits = windows_containing(g, radii)
        if len(hits) != 1 or hits[0] <= N3:
            continue
        s = hits[0]
        excluded = [j for j in range(1, radii.spectrum.p + 1)
                    if not window_S(j, s, radii).contains(g.lower, g.upper)]
        rec = {"gap": [g.lower, g.upper], "s": s, "gamma": radii.gamma_s(s)}
        if excluded:
            verdict.status = FAIL
            verdict.violations.append({**rec, "excluding_j": excluded})
        else:
            verdict.witnesses.append(rec)
    return verdict


@dataclass(frozen=True)
class Theorem4Threshold:
    applicable: bool
    d: float
    triple: tuple[int, int, int] | None
    s_star: int | None = None
    H: float | None = None


def theorem4_threshold(radii: Radii, horizon: int = 64, tol: float = 1e-12) -> Theorem4Threshold:
    """H = (pi s*)^2 with s* the least window index > N3 from which 4 gamma < d.

    The inequality is required on ``horizon`` consecutive indices.
    """
    cond = condition_one(radii.spectrum, tol)
    if not cond.satisfied:
        return Theorem4Threshold(False, cond.d, cond.best_triple)
    s = radii.params.N3 + 1
    while s < 100_000:
        if all(4 * radii.gamma_s(s + r) < cond.d for r in range(horizon)):
            return Theorem4Threshold(True, cond.d, cond.best_triple, s, (math.pi * s) ** 2)
        s += 1
    return Theorem4Threshold(False, cond.d, cond.best_triple)


def triple_windows_empty(radii: Radii, triple: Sequence[int], s: int) -> bool:
    unions = [window_S(j, s, radii).subintervals for j in triple]
    return not intersect_unions(unions)


def verify_theorem4(potential: MatrixPotential, radii: Radii, config: SolverConfig,
                    scan_width: float = 200.0, dps: int = 0, horizon: int = 64
                    ) -> tuple[Verdict, list[Gap]]:
    """No gaps in [H, H + scan_width] when the triple condition holds."""
    thr = theorem4_threshold(radii, horizon)
    notes = {"applicable": thr.applicable, "d": thr.d,
             "triple": list(thr.triple) if thr.triple else None, "H": thr.H,
             "s_star": thr.s_star}
    if not thr.applicable:
        return Verdict(NA, notes=notes), []
    verdict = Verdict(PASS, notes=notes)
    empty = [s for s in range(thr.s_star, thr.s_star + horizon)
             if not triple_windows_empty(radii, thr.triple, s)]
    if empty:
        verdict.status = FAIL
        verdict.violations.append({"reason": "triple S-window intersection non-empty",
                                   "s": empty})
    top = thr.H + scan_width
    n = bands_needed(potential, top)
    grid = sample_bands(potential, replace(config, n_bands=n))
    gaps = resolve_gaps(potential, grid, config, dps=dps)
    hits = [g for g in gaps if g.upper > thr.H and g.lower < top]
    notes["scan"] = {"lower": thr.H, "upper": top, "bands": n,
                     "gaps_found": [g.to_dict() for g in hits]}
    if hits:
        verdict.status = FAIL
        verdict.violations.extend(g.to_dict() for g in hits)
    return verdict, gaps


# --- pipeline ----------------------------------------------------------------

ALL_CHECKS = ("theorem1", "corollary1", "theorem2", "theorem3", "corollary2", "theorem4")


@dataclass
class Analysis:
    potential: MatrixPotential
    config: SolverConfig
    spectrum: MeanSpectrum
    grid: BandGrid
    bands: list
    gaps: list
    params: AsymptoticParams
    fit: FitResult | None
    verdicts: dict
    oracle: dict | None = None

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())


def calibrate(potential: MatrixPotential, spectrum: MeanSpectrum, config: SolverConfig,
              t_values, params: AsymptoticParams, fit_c1_: bool, auto: bool,
              theorem3_k: Sequence[int] = (), max_rounds: int = 8
              ) -> tuple[AsymptoticParams, FitResult | None]:
    """Fit c1 (optionally) and derive thresholds, iterating over theorem-3 samples."""
    m = spectrum.m
    tail = Radii.for_potential(potential, params, spectrum).tail
    base_ts = np.asarray(t_values, float)
    n_fwd = config.n_bands
    base_vals, _, _ = solve(potential, base_ts, config, count=n_fwd + 2 * m)
    extra_ts = np.empty(0)
    extra_vals = np.empty((0, 0))
    fit = None
    for _ in range(max_rounds):
        if fit_c1_:
            f_base = fit_c1(base_ts, base_vals, spectrum, tail, params.N, n_fwd)
            raw = f_base.raw
            witness = f_base.witness
            if extra_ts.size:
                f_extra = fit_c1(extra_ts, extra_vals, spectrum, tail, params.N,
                                 extra_vals.shape[1] - 2 * m)
                if f_extra.raw > raw:
                    raw, witness = f_extra.raw, f_extra.witness
            fit = FitResult(max(raw * (1 + 1e-6), 1e-6), raw, witness)
            if math.isclose(fit.c1, params.c1, rel_tol=1e-12) and extra_ts.size:
                break
            params = replace(params, c1=fit.c1)
        radii = Radii(spectrum, params, tail)
        if auto:
            params = auto_thresholds(radii)
            radii = Radii(spectrum, params, tail)
        if not (fit_c1_ and theorem3_k):
            break
        plan, _ = theorem3_plan(radii, theorem3_k)
        ts = [p[3] for p in plan if p[3] is not None]
        if not ts:
            break
        extra_ts = np.concatenate(ts)
        count = _theorem3_count(theorem3_k, spectrum)
        extra_vals, _, _ = solve(potential, extra_ts, config, count=count + 2 * m)
    return params, fit


def analyze(potential: MatrixPotential, config: SolverConfig | None = None,
            params: AsymptoticParams | None = None, fit: bool = True, auto: bool = True,
            checks: Iterable[str] = ALL_CHECKS, theorem1_s: Iterable[int] | None = None,
            theorem3_k: Iterable[int] | None = None, dps: int = 60,
            oracle: bool = False, scan_width: float = 200.0) -> Analysis:
    config = config or SolverConfig()
    params = params or AsymptoticParams()
    checks = tuple(checks)
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    spectrum = mean_spectrum(mean_matrix(potential))
    m = spectrum.m
    grid = sample_bands(potential, config)
    s_top = grid.n_bands // m - 1
    if theorem3_k is None:
        theorem3_k = ()
    theorem3_k = list(theorem3_k)
    params, fit_result = calibrate(potential, spectrum, config, grid.t_values, params, fit,
                                   auto, theorem3_k if "theorem3" in checks else ())
    radii = Radii.for_potential(potential, params, spectrum)
    bands = extract_bands(grid)
    gaps = attach_windows(resolve_gaps(potential, grid, config, dps=dps, oracle=oracle), radii)
    verdicts = {}
    if "theorem1" in checks:
        s_values = range(params.N1, s_top + 1) if theorem1_s is None else theorem1_s
        verdicts["theorem1"] = verify_theorem1(bands, radii, s_values)
    if "corollary1" in checks or "theorem2" in checks:
        placement, length = verify_corollary1_theorem2(gaps, radii)
        if "corollary1" in checks:
            verdicts["corollary1"] = placement
        if "theorem2" in checks:
            verdicts["theorem2"] = length
    if "theorem3" in checks:
        if not theorem3_k:
            hi = max(params.N2 + 4, (s_top // 2))
            theorem3_k = [k for a in range(params.N2, hi + 1) for k in (a, -a)]
        verdicts["theorem3"] = verify_theorem3(potential, radii, config, theorem3_k)
    if "corollary2" in checks:
        verdicts["corollary2"] = verify_corollary2(gaps, radii)
    if "theorem4" in checks:
        verdicts["theorem4"], _ = verify_theorem4(potential, radii, config, scan_width, dps)
    oracle_report = None
    if oracle:
        ts = np.array([0.0, math.pi / 3, math.pi])
        cmp = monodromy.cross_check(potential, ts, min(8, grid.n_bands), config)
        oracle_report = {"t_values": ts.tolist(), "max_deviation": cmp.max_deviation,
                         "max_det_defect": cmp.max_det_defect,
                         "passed": cmp.max_deviation <= 1e-7 and cmp.max_det_defect <= 1e-8}
    return Analysis(potential, config, spectrum, grid, bands, gaps, params, fit_result,
                    verdicts, oracle_report)
