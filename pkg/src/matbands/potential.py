"""Periodic Hermitian matrix potentials given by finite Fourier data.

A potential of period 1 is stored through its non-negative Fourier modes

    Q(x) = Q_0 + sum_{n>=1} (Q_n exp(2 pi i n x) + Q_n^H exp(-2 pi i n x)),

so Hermiticity of Q(x) at every x reduces to Hermiticity of Q_0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np


class PotentialError(ValueError):
    """Raised for malformed or invalid potential definitions."""


@dataclass(frozen=True)
class FourierMode:
    index: int
    coefficient: np.ndarray

    def __post_init__(self):
        coef = np.array(self.coefficient, dtype=complex)
        coef.setflags(write=False)
        object.__setattr__(self, "coefficient", coef)


@dataclass(frozen=True)
class MatrixPotential:
    dimension: int
    modes: tuple[FourierMode, ...]
    _table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = self.dimension
        if not isinstance(m, (int, np.integer)) or m < 1:
            raise PotentialError(f"dimension must be an integer >= 1, got {m!r}")
        table = {}
        for mode in self.modes:
            n = mode.index
            if not isinstance(n, (int, np.integer)) or n < 0:
                raise PotentialError(f"mode index must be an integer >= 0, got {n!r}")
            if n in table:
                raise PotentialError(f"duplicate mode index {n}")
            if mode.coefficient.shape != (m, m):
                raise PotentialError(
                    f"mode {n}: coefficient shape {mode.coefficient.shape} != ({m}, {m})")
            if n == 0 and not np.array_equal(mode.coefficient, mode.coefficient.conj().T):
                raise PotentialError("mode 0 is not Hermitian")
            table[int(n)] = mode.coefficient
        object.__setattr__(self, "modes", tuple(sorted(self.modes, key=lambda md: md.index)))
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_modes(cls, modes: Mapping[int, Any], dimension: int | None = None) -> "MatrixPotential":
        """Build a potential from ``{n: Q_n}`` with ``n >= 0``."""
        items = [(int(n), np.atleast_2d(np.asarray(c, dtype=complex))) for n, c in modes.items()]
        if dimension is None:
            if not items:
                raise PotentialError("dimension required for a potential without modes")
            dimension = items[0][1].shape[0]
        return cls(dimension, tuple(FourierMode(n, c) for n, c in items))

    @classmethod
    def free(cls, m: int) -> "MatrixPotential":
        return cls(m, ())

    @classmethod
    def constant(cls, C) -> "MatrixPotential":
        C = np.atleast_2d(np.asarray(C, dtype=complex))
        return cls.from_modes({0: C})

    @property
    def max_index(self) -> int:
        return max(self._table, default=0)

    def coefficient(self, n: int) -> np.ndarray:
        """Fourier coefficient for any integer ``n`` (negative modes by Hermiticity)."""
        m = self.dimension
        if n >= 0:
            c = self._table.get(int(n))
            return np.zeros((m, m), dtype=complex) if c is None else c
        c = self._table.get(int(-n))
        return np.zeros((m, m), dtype=complex) if c is None else c.conj().T

    def is_real(self) -> bool:
        return all(not np.any(c.imag) for c in self._table.values())


def evaluate(potential: MatrixPotential, x) -> np.ndarray:
    """Q(x); broadcasts over array ``x`` to shape ``x.shape + (m, m)``."""
    x = np.asarray(x, dtype=float)
    m = potential.dimension
    out = np.zeros(x.shape + (m, m), dtype=complex)
    for n, c in potential._table.items():
        if n == 0:
            out += c
            continue
        # reduce n*x mod 1 so large |x| keeps full phase accuracy
        phase = np.exp(2j * np.pi * np.mod(n * x, 1.0))[..., None, None]
        term = phase * c
        out += term + np.conj(np.swapaxes(term, -1, -2))
    return out


def mean_matrix(potential: MatrixPotential) -> np.ndarray:
    return potential.coefficient(0).copy()


def fourier_tail(potential: MatrixPotential, k: int) -> float:
    """Largest entry modulus over the modes 2k and 2k+1 (and their negatives)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return float(max(np.abs(potential.coefficient(2 * k)).max(),
                     np.abs(potential.coefficient(2 * k + 1)).max()))


@dataclass(frozen=True)
class MeanSpectrum:
    distinct_values: np.ndarray
    multiplicities: tuple[int, ...]
    eigenvectors: tuple[np.ndarray, ...]

    @property
    def p(self) -> int:
        return len(self.multiplicities)

    @property
    def m(self) -> int:
        return sum(self.multiplicities)

    def mu(self, j: int) -> float:
        """Distinct eigenvalue ``mu_j`` with 1-based ``j``."""
        if not 1 <= j <= self.p:
            raise IndexError(f"j={j} outside 1..{self.p}")
        return float(self.distinct_values[j - 1])

    @property
    def spread(self) -> float:
        return float(self.distinct_values[-1] - self.distinct_values[0])

    @classmethod
    def from_values(cls, values, multiplicities=None) -> "MeanSpectrum":
        """Synthetic spectrum (eigenvectors taken as coordinate vectors)."""
        mult = tuple(multiplicities) if multiplicities is not None else (1,) * len(values)
        if len(mult) != len(values):
            raise ValueError("one multiplicity per value required")
        pairs = sorted(zip(values, mult))
        values = np.array([v for v, _ in pairs], dtype=float)
        mult = tuple(int(k) for _, k in pairs)
        m = sum(mult)
        eye = np.eye(m, dtype=complex)
        offsets = np.cumsum((0,) + mult)
        vecs = tuple(eye[:, offsets[i]:offsets[i + 1]] for i in range(len(mult)))
        return cls(values, mult, vecs)


def mean_spectrum(C, cluster_tol: float | None = None) -> MeanSpectrum:
    """Distinct eigenvalues of the Hermitian matrix ``C`` with multiplicities.

    Sorted eigenvalues closer than ``cluster_tol`` (chained) are merged; the
    default is ``1e-9 * max(1, ||C||_2)``.
    """
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    if cluster_tol is None:
        cluster_tol = 1e-9 * max(1.0, np.linalg.norm(C, 2))
    if cluster_tol < 0:
        raise ValueError("cluster_tol must be non-negative")
    w, v = np.linalg.eigh(C)
    breaks = np.flatnonzero(np.diff(w) > cluster_tol) + 1
    groups = np.split(np.arange(len(w)), breaks)
    values, mult, vecs = [], [], []
    for g in groups:
        values.append(w[g].mean())
        mult.append(len(g))
        q, _ = np.linalg.qr(v[:, g])
        vecs.append(q)
    return MeanSpectrum(np.array(values), tuple(mult), tuple(vecs))


def _matrix_field(value, m: int, where: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise PotentialError(f"{where}: expected an {m}x{m} matrix of real numbers") from None
    if arr.shape != (m, m):
        raise PotentialError(f"{where}: expected shape ({m}, {m}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PotentialError(f"{where}: non-finite entry")
    return arr


def parse_potential(doc: Mapping[str, Any]) -> MatrixPotential:
    """Validate an already-decoded potential document."""
    if not isinstance(doc, Mapping):
        raise PotentialError("document root must be a map with keys 'm' and 'modes'")
    for key in ("m", "modes"):
        if key not in doc:
            raise PotentialError(f"missing key {key!r}")
    m = doc["m"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise PotentialError(f"m: expected an integer >= 1, got {m!r}")
    if not isinstance(doc["modes"], list):
        raise PotentialError("modes: expected a list")
    modes = []
    seen = set()
    for i, entry in enumerate(doc["modes"]):
        where = f"modes[{i}]"
        if not isinstance(entry, Mapping):
            raise PotentialError(f"{where}: expected a map with keys n, re, im")
        n = entry.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise PotentialError(f"{where}.n: expected an integer >= 0, got {n!r}")
        if n in seen:
            raise PotentialError(f"{where}.n: duplicate mode index {n}")
        seen.add(n)
        re = _matrix_field(entry.get("re"), m, f"{where}.re")
        im = _matrix_field(entry.get("im", np.zeros((m, m)).tolist()), m, f"{where}.im")
        if n == 0 and not (np.array_equal(re, re.T) and np.array_equal(im, -im.T)):
            raise PotentialError(f"{where}: non-Hermitian zero mode "
                                 "(re must be symmetric, im antisymmetric)")
        modes.append(FourierMode(n, re + 1j * im))
    return MatrixPotential(m, tuple(modes))


def load_potential(document: str | Mapping[str, Any]) -> MatrixPotential:
    """Parse a JSON potential document (text or decoded mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise PotentialError(f"malformed document: line {exc.lineno} column {exc.colno}: "
                                 f"{exc.msg}") from None
    return parse_potential(document)


def dump_potential(potential: MatrixPotential) -> dict:
    """Inverse of :func:`parse_potential`."""
    return {
        "m": potential.dimension,
        "modes": [{"n": md.index,
                   "re": md.coefficient.real.tolist(),
                   "im": md.coefficient.imag.tolist()} for md in potential.modes],
    }
