import math

import numpy as np
import pytest

from matbands import monodromy as mono
from matbands.bloch import SolverConfig, solve
from matbands.potential import MatrixPotential

PI = math.pi


def free_delta(lam, t):
    z = np.exp(1j * t)
    return -(z * z - 2 * np.cos(np.sqrt(complex(lam))) * z + 1)


def test_gauss_legendre_tableau():
    c, b, a = mono._gauss_legendre(4)
    assert b.sum() == pytest.approx(1.0)
    # collocation conditions: sum_j a_ij c_j^(q-1) = c_i^q / q
    for q in range(1, 5):
        assert np.allclose(a @ c ** (q - 1), c ** q / q, atol=1e-14)


def test_free_fundamental_solutions():
    d = mono.integrate(MatrixPotential.free(1), PI ** 2)
    assert d.Y2[0, 0] == pytest.approx(-1.0, abs=1e-12)
    assert d.Y1[0, 0] == pytest.approx(0.0, abs=1e-12)
    assert d.det_defect <= 1e-12


@pytest.mark.parametrize("lam", [-20.0, -1.0, 0.5, 9.0, 40.0, 250.0])
def test_scalar_free_determinant(lam):
    for t in np.linspace(-PI, PI, 7):
        assert abs(mono.delta(MatrixPotential.free(1), lam, t) - free_delta(lam, t)) <= 1e-9


def test_coefficients_are_polynomial_in_z():
    q = MatrixPotential.from_modes({0: [[0.5, 0.2], [0.2, -0.4]], 1: [[1, 0.5j], [0.2, 0.3]]})
    d = mono.integrate(q, 12.3)
    coef = mono.delta_coefficients(d)
    assert len(coef) == 5
    for t in (0.2, 1.7, -2.9):
        z = np.exp(1j * t)
        assert np.polyval(coef[::-1], z) == pytest.approx(mono.delta_from(d, t), abs=1e-10)
    # leading coefficient: det(-z I)^2 = z^{2m}
    assert coef[-1] == pytest.approx(1.0, abs=1e-10)


def test_delta_rejects_out_of_range_t():
    with pytest.raises(ValueError):
        mono.delta(MatrixPotential.free(1), 1.0, 4.0)
    with pytest.raises(ValueError):
        mono.integrate(MatrixPotential.free(1), 1.0, steps=8)


def test_refine_known_roots():
    assert mono.refine_eigenvalue(MatrixPotential.free(1), 0.5, 0.26, 0.1) == \
        pytest.approx(0.25, abs=1e-12)
    c = MatrixPotential.constant([[0, 1], [1, 0]])
    assert mono.refine_eigenvalue(c, 0.5, 1.2, 0.5) == pytest.approx(1.25, abs=1e-12)
    assert mono.refine_eigenvalue(c, 0.5, -0.8, 0.5) == pytest.approx(-0.75, abs=1e-12)


def test_refine_reports_missing_root():
    with pytest.raises(mono.OracleError):
        mono.refine_eigenvalue(MatrixPotential.free(1), 0.5, 3.0, 0.5)
    with pytest.raises(ValueError):
        mono.refine_eigenvalue(MatrixPotential.free(1), 0.5, 3.0, 0.0)


def test_multipliers_unimodular_inside_bands_only():
    q = MatrixPotential.from_modes({1: [[1.0]]})
    # inside the first band of the scalar cosine potential
    assert mono.covering_quasimomenta(q, 5.0).size == 2
    # inside the first gap (8.857, 10.857): real multipliers
    assert mono.covering_quasimomenta(q, 9.8).size == 0
    rho = mono.floquet_multipliers(q, 9.8)
    assert np.prod(rho).real == pytest.approx(1.0, abs=1e-9)


def test_multiplier_angle_is_quasimomentum():
    q = MatrixPotential.from_modes({0: [[0, 1], [1, 0]], 1: [[1, 0], [0, -0.5]]})
    w, _, _ = solve(q, [1.1], SolverConfig(n_bands=4))
    ts = mono.covering_quasimomenta(q, w[0, 2])
    assert np.any(np.abs(ts - 1.1) < 1e-6)


@pytest.mark.slow
def test_cross_check_small():
    q = MatrixPotential.from_modes({1: [[1.0]], 2: [[0.4]]})
    cmp = mono.cross_check(q, [0.3, 2.0], 4)
    assert cmp.max_deviation <= 1e-9
    assert cmp.max_det_defect <= 1e-10


def test_cross_check_separates_close_pair():
    # bands 6 and 7 sit 2.4e-4 apart at t = 0; each must refine to its own root
    q = MatrixPotential.from_modes({1: [[1.0]], 2: [[0.4 + 0.3j]], 3: [[0.2]]})
    cmp = mono.cross_check(q, [0.0], 8)
    assert cmp.galerkin[0, 6] - cmp.galerkin[0, 5] < 3e-4
    assert cmp.max_deviation <= 1e-7
