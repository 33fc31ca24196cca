"""Bloch eigenvalues by plane-wave (Fourier-Galerkin) discretisation.

For quasimomentum t the operator -y'' + Q y with y(1) = exp(it) y(0) is
projected onto ``exp(i(2 pi n + t)x) e_a`` for ``|n| <= K``.  Block (n, n') of
the resulting Hermitian matrix is ``(2 pi n + t)^2 delta_{nn'} I + Q_{n-n'}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import mpmath
import numpy as np

from .potential import MatrixPotential


class ConvergenceError(RuntimeError):
    """Galerkin eigenvalues failed to settle within the allowed truncation."""

    def __init__(self, message: str, residual: float, truncation: int):
        super().__init__(f"{message} (residual {residual:.3e} at K={truncation})")
        self.residual = residual
        self.truncation = truncation


@dataclass(frozen=True)
class SolverConfig:
    truncation: int | None = None
    t_samples: int = 101
    n_bands: int = 16
    convergence_tol: float = 1e-8
    max_truncation: int = 512

    def __post_init__(self):
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if self.t_samples < 2:
            raise ValueError("t_samples must be >= 2")
        if self.n_bands < 1:
            raise ValueError("n_bands must be >= 1")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")

    def initial_truncation(self, potential: MatrixPotential) -> int:
        if self.truncation is not None:
            K = self.truncation
        else:
            m = potential.dimension
            K = max(8, 2 * math.ceil(self.n_bands / m) + potential.max_index + 4)
        return max(K, minimum_truncation(self.n_bands, potential.dimension))


def minimum_truncation(n_bands: int, m: int) -> int:
    """Smallest K with n_bands <= (2K+1)m - 2m (top 2m eigenvalues discarded)."""
    return max(1, math.ceil((n_bands / m + 1) / 2))


@dataclass(frozen=True)
class BandGrid:
    t_values: np.ndarray
    values: np.ndarray  # shape (n_bands, n_t); column i holds lambda_n(t_i)
    truncation: int
    residual: float

    @property
    def n_bands(self) -> int:
        return self.values.shape[0]

    @property
    def coarse(self) -> bool:
        return len(self.t_values) < 8

    def band(self, n: int) -> np.ndarray:
        """Samples of lambda_n (1-based ``n``)."""
        return self.values[n - 1]


def block_offsets(potential: MatrixPotential, K: int):
    return [(d, potential.coefficient(d)) for d in range(-2 * K, 2 * K + 1)
            if d == 0 or abs(d) <= potential.max_index]


def assemble(potential: MatrixPotential, t, K: int) -> np.ndarray:
    """Galerkin matrix of size (2K+1)m; ``t`` may be an array (leading axis)."""
    t = np.asarray(t, dtype=float)
    m = potential.dimension
    size = (2 * K + 1) * m
    ns = np.arange(-K, K + 1)
    base = np.zeros((size, size), dtype=complex)
    for d, c in block_offsets(potential, K):
        if not np.any(c):
            continue
        # block (n, n') = Q_{n - n'}; the shifted identity places it at row n = n' + d
        base += np.kron(np.eye(2 * K + 1, k=-d), c)
    kinetic = np.repeat((2 * np.pi * ns[None, :] + t.reshape(-1, 1)) ** 2, m, axis=1)
    out = np.broadcast_to(base, t.shape + (size, size)).copy()
    idx = np.arange(size)
    out[..., idx, idx] += kinetic.reshape(t.shape + (size,))
    return out


def _lowest(potential: MatrixPotential, ts: np.ndarray, K: int, count: int) -> np.ndarray:
    w = np.linalg.eigvalsh(assemble(potential, ts, K))
    return w[..., :count]


def solve(potential: MatrixPotential, ts, config: SolverConfig,
          count: int | None = None) -> tuple[np.ndarray, int, float]:
    """Lowest ``count`` eigenvalues at each t, certified against K+4.

    Returns ``(values, K, residual)`` with ``values`` of shape ``(len(ts), count)``.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    m = potential.dimension
    count = config.n_bands if count is None else count
    K = max(config.initial_truncation(potential), minimum_truncation(count, m))
    while True:
        w = _lowest(potential, ts, K, count)
        w_ref = _lowest(potential, ts, K + 4, count)
        residual = float(np.max(np.abs(w - w_ref))) if w.size else 0.0
        if residual <= config.convergence_tol:
            return w_ref, K + 4, residual
        if 2 * K > config.max_truncation:
            raise ConvergenceError("Galerkin eigenvalues did not converge", residual, K)
        K *= 2


def eigen_sorted(potential: MatrixPotential, t: float, config: SolverConfig) -> np.ndarray:
    return solve(potential, [t], config)[0][0]


def t_grid(samples: int) -> np.ndarray:
    """Uniform grid on [-pi, pi]; contains 0 for odd ``samples`` and pi always.

    The endpoint -pi is the same quasimomentum as pi.
    """
    grid = np.linspace(-np.pi, np.pi, samples)
    grid[-1] = np.pi
    if samples % 2 == 1:
        grid[samples // 2] = 0.0
    return grid


def sample_bands(potential: MatrixPotential, config: SolverConfig,
                 t_values=None) -> BandGrid:
    ts = t_grid(config.t_samples) if t_values is None else np.asarray(t_values, float)
    w, K, residual = solve(potential, ts, config)
    return BandGrid(ts, np.ascontiguousarray(w.T), K, residual)


def bands_needed(potential: MatrixPotential, energy: float) -> int:
    """Band count that reaches ``energy`` at every quasimomentum."""
    c = potential.coefficient(0)
    qmax = sum(np.abs(potential.coefficient(n)).sum() for n in range(1, potential.max_index + 1))
    lowest = float(np.linalg.eigvalsh(c)[0]) - 2 * qmax
    reach = math.sqrt(max(energy - lowest, 0.0)) / math.pi
    return potential.dimension * (int(reach) + 2)


# --- extended precision ------------------------------------------------------

def _mp_quasimomentum(t: float, pi):
    if t == 0:
        return gmpy2.mpfr(0)
    if abs(abs(t) - math.pi) < 1e-12:
        return pi if t > 0 else -pi
    return gmpy2.mpfr(t)


class _BandedHermitian:
    """Galerkin matrix in extended precision, stored by rows within the band.

    Entries are gmpy2 numbers at the working precision; mpmath objects carry
    too much per-operation overhead for the inertia counts.
    """

    def __init__(self, potential: MatrixPotential, t: float, K: int, prec: int):
        m = potential.dimension
        self.size = (2 * K + 1) * m
        self.bw = m * (potential.max_index + 1) - 1
        self.prec = prec
        self.real = real = potential.is_real()
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            conv = (lambda z: gmpy2.mpfr(float(z.real))) if real else \
                (lambda z: gmpy2.mpc(float(z.real), float(z.imag)))
            pi = gmpy2.const_pi()
            tm = _mp_quasimomentum(t, pi)
            coeffs = {d: potential.coefficient(d)
                      for d in range(-potential.max_index, potential.max_index + 1)}
            self.rows = []
            for r in range(self.size):
                n, a = divmod(r, m)
                row = {}
                for c in range(max(0, r - self.bw), r + 1):
                    n2, b = divmod(c, m)
                    d = n - n2
                    if abs(d) > potential.max_index:
                        continue
                    val = coeffs[d][a, b]
                    if r == c:
                        kin = (2 * pi * (n - K) + tm) ** 2
                        row[c] = kin + gmpy2.mpfr(float(val.real))
                    elif val != 0:
                        row[c] = conv(val)
                self.rows.append(row)

    def count_below(self, x) -> int:
        """Number of eigenvalues < x (Sylvester inertia of LDL^H)."""
        with gmpy2.context(gmpy2.get_context(), precision=self.prec):
            x = gmpy2.mpfr(x)
            bw = self.bw
            L: list[dict] = []
            D = []
            tiny = gmpy2.mpfr(2) ** (-(self.prec + 20))
            negatives = 0
            conj = (lambda z: z) if self.real else (lambda z: z.conjugate())
            sq = (lambda z: z * z) if self.real else gmpy2.norm
            for i, row in enumerate(self.rows):
                lrow = {}
                lo = max(0, i - bw)
                for j in range(lo, i):
                    s = row.get(j, 0)
                    lj = L[j]
                    for k in range(max(lo, j - bw), j):
                        lik = lrow.get(k)
                        if lik is None:
                            continue
                        ljk = lj.get(k)
                        if ljk is not None:
                            s -= lik * conj(ljk) * D[k]
                    if s != 0:
                        lrow[j] = s / D[j]
                d = row[i] - x
                for k, lik in lrow.items():
                    d -= sq(lik) * D[k]
                if d == 0:
                    d = tiny
                if d < 0:
                    negatives += 1
                D.append(d)
                L.append(lrow)
            return negatives


def hp_truncation(potential: MatrixPotential, index: int) -> int:
    """Plane-wave cutoff for extended-precision work on eigenvalue ``index``.

    Modes beyond the resonant ones couple with strength ~ |Q| / (pi j)^2, so
    16 extra blocks push the truncation error far below 1e-60.
    """
    return index // potential.dimension // 2 + 16 + 4 * potential.max_index


def precise_eigenvalues(potential: MatrixPotential, t: float, indices, guesses,
                        K: int, dps: int = 60, bracket: float = 1e-6) -> list:
    """Eigenvalues with 1-based ``indices`` to ``dps`` digits by bisection.

    ``guesses`` are double-precision estimates used to seed the brackets.
    Returns mpmath numbers.
    """
    with mpmath.workdps(dps):
        prec = mpmath.mp.prec
    mat = _BandedHermitian(potential, t, K, prec)
    out = []
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        for idx, g in zip(indices, guesses):
            width = gmpy2.mpfr(bracket) * max(1.0, abs(g))
            lo, hi = gmpy2.mpfr(g) - width, gmpy2.mpfr(g) + width
            while mat.count_below(lo) >= idx:
                lo -= width
                width *= 2
            while mat.count_below(hi) < idx:
                hi += width
                width *= 2
            stop = gmpy2.mpfr(10) ** (-(dps - 5)) * max(1, abs(g))
            while hi - lo > stop:
                mid = (lo + hi) / 2
                if mat.count_below(mid) >= idx:
                    hi = mid
                else:
                    lo = mid
            out.append((lo + hi) / 2)
    with mpmath.workdps(dps):
        # exact binary transfer: mantissa and exponent of the gmpy2 value
        return [mpmath.mpf((int(m), int(e))) for m, e in (v.as_mantissa_exp() for v in out)]
