"""Independent eigenvalue check through the fundamental matrix solutions.

``Y1``/``Y2`` solve ``-Y'' + Q Y = lam Y`` on [0, 1] with ``Y1(0) = 0, Y1'(0) = I``
and ``Y2(0) = I, Y2'(0) = 0``.  They are obtained from the first-order system
``Phi' = [[0, I], [Q - lam, 0]] Phi`` with the 4-stage Gauss-Legendre
collocation scheme (order 8).  For a linear system every step is a fixed
2m x 2m propagator, so all steps are formed in one batched solve and then
multiplied together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bloch import SolverConfig, solve
from .potential import MatrixPotential, evaluate


class OracleError(RuntimeError):
    """Integration or root refinement failed."""


@lru_cache(maxsize=None)
def _gauss_legendre(stages: int = 4):
    x, w = np.polynomial.legendre.leggauss(stages)
    c = (x + 1) / 2
    b = w / 2
    a = np.empty((stages, stages))
    for j in range(stages):
        others = np.delete(c, j)
        basis = np.polynomial.Polynomial.fromroots(others)
        basis = basis / basis(c[j])
        integral = basis.integ()
        a[:, j] = integral(c) - integral(0.0)
    return c, b, a


@dataclass(frozen=True)
class MonodromyData:
    lam: float
    Y1: np.ndarray
    Y1p: np.ndarray
    Y2: np.ndarray
    Y2p: np.ndarray
    steps: int
    error: float

    @property
    def transfer(self) -> np.ndarray:
        return np.block([[self.Y2, self.Y1], [self.Y2p, self.Y1p]])

    @property
    def det_defect(self) -> float:
        return abs(np.linalg.det(self.transfer) - 1.0)


def _propagate(potential: MatrixPotential, lam: float, steps: int) -> np.ndarray:
    m = potential.dimension
    d = 2 * m
    c, b, a = _gauss_legendre()
    s = len(c)
    h = 1.0 / steps
    x = (np.arange(steps)[:, None] + c[None, :]) * h  # (steps, s)
    A = np.zeros((steps, s, d, d), dtype=complex)
    A[..., :m, m:] = np.eye(m)
    A[..., m:, :m] = evaluate(potential, x) - lam * np.eye(m)
    G = np.zeros((steps, s, d, s, d), dtype=complex)
    for i in range(s):
        for j in range(s):
            G[:, i, :, j, :] = -h * a[i, j] * A[:, j]
        G[:, i, :, i, :] += np.eye(d)
    G = G.reshape(steps, s * d, s * d)
    rhs = np.broadcast_to(np.tile(np.eye(d), (s, 1)), (steps, s * d, d))
    Y = np.linalg.solve(G, rhs).reshape(steps, s, d, d)
    R = np.eye(d) + h * np.einsum("i,nijk,nikl->njl", b, A, Y)
    # ordered product R[-1] @ ... @ R[0] by pairwise reduction
    while R.shape[0] > 1:
        if R.shape[0] % 2:
            R = np.concatenate([R, np.eye(d)[None]], axis=0)
        R = R[1::2] @ R[0::2]
    return R[0]


def default_steps(potential: MatrixPotential, lam: float) -> int:
    scale = abs(lam) + sum(np.abs(potential.coefficient(n)).sum()
                           for n in range(potential.max_index + 1))
    steps = max(64, 4 * math.sqrt(scale), 16 * potential.max_index)
    return 1 << math.ceil(math.log2(steps))


def integrate(potential: MatrixPotential, lam: float, steps: int | None = None,
              tol: float | None = 1e-11, max_steps: int = 1 << 15) -> MonodromyData:
    """Fundamental solutions at x = 1.

    With ``tol`` set, the step count is doubled (Richardson comparison of the
    ``steps`` and ``2*steps`` results) until the relative change is below
    ``tol``; ``tol=None`` integrates once with ``steps``.
    """
    if steps is None:
        steps = default_steps(potential, lam)
    if steps < 64:
        raise ValueError("steps must be >= 64")
    M = _propagate(potential, lam, steps)
    error = float("nan")
    if tol is not None:
        while True:
            M2 = _propagate(potential, lam, 2 * steps)
            error = float(np.abs(M2 - M).max() / max(1.0, np.abs(M2).max()))
            M, steps = M2, 2 * steps
            if error <= tol:
                break
            if steps >= max_steps:
                raise OracleError(f"integration error {error:.2e} above tolerance at "
                                  f"{steps} steps")
    m = potential.dimension
    return MonodromyData(lam, M[:m, m:], M[m:, m:], M[:m, :m], M[m:, :m], steps, error)


def delta_from(data: MonodromyData, t: float) -> complex:
    m = data.Y1.shape[0]
    z = np.exp(1j * t) * np.eye(m)
    return complex(np.linalg.det(np.block([[data.Y1, data.Y2 - z],
                                            [data.Y1p - z, data.Y2p]])))


def delta(potential: MatrixPotential, lam: float, t: float, steps: int | None = None) -> complex:
    """Characteristic determinant; zero exactly at the Bloch eigenvalues for t."""
    if abs(t) > math.pi + 1e-12:
        raise ValueError("|t| must not exceed pi")
    return delta_from(integrate(potential, lam, steps), t)


def delta_coefficients(data: MonodromyData) -> np.ndarray:
    """Coefficients of the determinant as a polynomial in z = exp(it), low to high."""
    m = data.Y1.shape[0]
    n = 2 * m + 1
    zs = np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([np.linalg.det(np.block([[data.Y1, data.Y2 - z * np.eye(m)],
                                             [data.Y1p - z * np.eye(m), data.Y2p]]))
                     for z in zs])
    return np.fft.fft(vals) / n


def floquet_multipliers(potential: MatrixPotential, lam: float,
                        steps: int | None = None) -> np.ndarray:
    """Eigenvalues of the transfer matrix over one period."""
    return np.linalg.eigvals(integrate(potential, lam, steps).transfer)


def covering_quasimomenta(potential: MatrixPotential, lam: float, circle_tol: float = 1e-6,
                          edge_tol: float = 1e-6) -> np.ndarray:
    """Quasimomenta t in (0, pi) with lam an eigenvalue for t, read off the multipliers.

    Multipliers within ``edge_tol`` of the real axis (t near 0 or pi) are
    ignored; there the multiplier does not separate a band edge from a point
    just inside a very thin gap.
    """
    rho = floquet_multipliers(potential, lam)
    on_circle = np.abs(np.abs(rho) - 1.0) < circle_tol
    t = np.abs(np.angle(rho[on_circle]))
    return np.sort(t[(t > edge_tol) & (t < math.pi - edge_tol)])


_GOLD = (math.sqrt(5) - 1) / 2


def refine_eigenvalue(potential: MatrixPotential, t: float, lambda_guess: float,
                      bracket_width: float, steps: int | None = None,
                      rtol: float = 1e-6) -> float:
    """Zero of the characteristic determinant near ``lambda_guess``.

    Golden-section search on ``|Delta|^2`` over ``lambda_guess +- bracket_width``,
    finished by the vertex of a parabola through the last three points.
    """
    if bracket_width <= 0:
        raise ValueError("bracket_width must be positive")
    if steps is None:
        steps = integrate(potential, lambda_guess + bracket_width).steps

    def f(lam):
        return abs(delta_from(integrate(potential, lam, steps, tol=None), t)) ** 2

    lo, hi = lambda_guess - bracket_width, lambda_guess + bracket_width
    xtol = 4e-15 * max(1.0, abs(lambda_guess))
    x1 = hi - _GOLD * (hi - lo)
    x2 = lo + _GOLD * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xtol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLD * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLD * (hi - lo)
            f2 = f(x2)
    x, fx = (x1, f1) if f1 <= f2 else (x2, f2)
    # parabola through the final bracket (h chosen well above the noise floor)
    h = max(hi - lo, 1e-9 * max(1.0, abs(x)))
    fa, fb = f(x - h), f(x + h)
    denom = fa - 2 * fx + fb
    if denom > 0:
        vertex = x + h * (fa - fb) / (2 * denom)
        if abs(vertex - x) < h:
            fv = f(vertex)
            if fv <= fx:
                x, fx = vertex, fv
    edge = lambda_guess - bracket_width, lambda_guess + bracket_width
    scale = max(f(edge[0]), f(edge[1]))
    if min(abs(x - edge[0]), abs(x - edge[1])) < 1e-3 * bracket_width or \
            math.sqrt(fx) > rtol * math.sqrt(scale):
        raise OracleError(f"no determinant zero in [{edge[0]:.10g}, {edge[1]:.10g}] "
                          f"(|Delta| = {math.sqrt(fx):.3e})")
    return x


@dataclass(frozen=True)
class OracleComparison:
    t_values: np.ndarray
    galerkin: np.ndarray
    refined: np.ndarray
    max_deviation: float
    max_det_defect: float


def cross_check(potential: MatrixPotential, t_values, n_bands: int,
                config: SolverConfig | None = None, max_bracket: float = 0.5
                ) -> OracleComparison:
    """Refine each Galerkin eigenvalue through the determinant and compare."""
    t_values = np.asarray(t_values, dtype=float)
    config = config or SolverConfig(n_bands=n_bands)
    w, _, _ = solve(potential, t_values, config, count=n_bands + 1)
    refined = np.empty((len(t_values), n_bands))
    det_defect = 0.0
    for a, t in enumerate(t_values):
        row = w[a]
        for n in range(n_bands):
            gaps = [abs(row[n] - row[q]) for q in range(len(row)) if q != n]
            near = [g for g in gaps if g > 1e-9 * max(1.0, abs(row[n]))]
            width = min([max_bracket] + [0.45 * g for g in near])
            refined[a, n] = refine_eigenvalue(potential, t, row[n], width)
            det_defect = max(det_defect, integrate(potential, refined[a, n]).det_defect)
    dev = float(np.abs(refined - w[:, :n_bands]).max())
    return OracleComparison(t_values, w[:, :n_bands], refined, dev, det_defect)
