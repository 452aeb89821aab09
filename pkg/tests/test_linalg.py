import math

import numpy as np
import pytest

from invarstep import linalg
from invarstep.errors import NotSymmetric, SingularShift


class TestSymEigen:
    def test_identity(self):
        spec = linalg.sym_eigen(np.eye(2))
        assert np.allclose(spec.eigenvalues, [1.0, 1.0])

    def test_diagonal(self):
        spec = linalg.sym_eigen(np.diag([1.0, 1.0, -1.0]))
        assert np.allclose(spec.eigenvalues, [1.0, 1.0, -1.0])

    def test_hand_characteristic_polynomial(self):
        # lam^2 - 6 lam + 8 = 0  ->  lam = 4, 2
        spec = linalg.sym_eigen([[3.0, -1.0], [-1.0, 3.0]])
        assert np.allclose(spec.eigenvalues, [4.0, 2.0])

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            linalg.sym_eigen([[0.0, 1.0], [0.0, 0.0]])

    def test_reconstruction_property(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = rng.integers(2, 11)
            s = rng.standard_normal((n, n))
            s = s + s.T
            spec = linalg.sym_eigen(s)
            v, w = spec.eigenvectors, spec.eigenvalues
            resid = np.linalg.norm(s - v @ np.diag(w) @ v.T, 2)
            assert resid <= 1e-10 * max(1.0, np.linalg.norm(s, 2))


class TestGeneralSpectrum:
    def test_rotation_pair(self):
        # lam^2 + 1 = 0 by hand
        spec = linalg.general_spectrum([[0.0, -1.0], [1.0, 0.0]])
        assert sorted(np.round(spec.eigenvalues.imag, 12)) == [-1.0, 1.0]
        assert np.allclose(spec.eigenvalues.real, 0.0)

    def test_symmetric_case(self):
        spec = linalg.general_spectrum([[3.0, -1.0], [-1.0, 3.0]])
        assert np.allclose(sorted(spec.eigenvalues.real), [2.0, 4.0])
        assert np.allclose(spec.eigenvalues.imag, 0.0)

    def test_zero_matrix(self):
        spec = linalg.general_spectrum(np.zeros((3, 3)))
        assert np.allclose(spec.eigenvalues, 0.0)


class TestDefiniteness:
    def test_zero_matrix_is_both_psd_and_nsd(self):
        v = linalg.definiteness(np.zeros((2, 2)))
        assert v.is_nsd and v.is_psd

    def test_skew_lyapunov_combination_is_nsd(self):
        a = np.array([[0.0, -1.0], [1.0, 0.0]])
        q = np.eye(2)
        v = linalg.definiteness(a.T @ q + q @ a)
        assert v.is_nsd

    def test_indefinite(self):
        v = linalg.definiteness(np.diag([1.0, -1.0]))
        assert v.kind == linalg.Definiteness.INDEFINITE

    def test_pd_has_clean_inertia(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            n = rng.integers(2, 8)
            b = rng.standard_normal((n, n))
            s = b @ b.T + n * np.eye(n)
            v = linalg.definiteness(s)
            assert v.kind == linalg.Definiteness.PD
            inertia = linalg.inertia_of(s)
            assert inertia.n_minus == 0 and inertia.n_zero == 0


class TestInertia:
    @pytest.mark.parametrize("diag,expected", [
        ([1.0, 1.0, -1.0], (2, 0, 1)),
        ([1.0, 1.0, 1.0, 1.0], (4, 0, 0)),
        ([1.0, 0.0, -1.0], (1, 1, 1)),
    ])
    def test_diagonal_cases(self, diag, expected):
        assert tuple(linalg.inertia_of(np.diag(diag))) == expected


class TestSpectralNorm:
    def test_identity(self):
        assert linalg.spectral_norm(np.eye(3)) == pytest.approx(1.0)

    def test_symmetric_equals_max_abs_eigenvalue(self):
        assert linalg.spectral_norm([[3.0, -1.0], [-1.0, 3.0]]) == pytest.approx(4.0)

    def test_zero(self):
        assert linalg.spectral_norm(np.zeros((2, 2))) == 0.0


class TestMatExp:
    def test_zero_matrix(self):
        assert np.allclose(linalg.mat_exp(np.zeros((3, 3)), 2.5), np.eye(3))

    def test_quarter_turn(self):
        r = linalg.mat_exp([[0.0, -1.0], [1.0, 0.0]], math.pi / 2)
        assert np.allclose(r, [[0.0, -1.0], [1.0, 0.0]], atol=1e-12)

    def test_identity_generator(self):
        assert np.allclose(linalg.mat_exp(np.eye(2), 1.0), math.e * np.eye(2))

    def test_group_property(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            n = rng.integers(2, 6)
            a = rng.standard_normal((n, n))
            a *= 2.0 / max(1.0, np.linalg.norm(a, 2))
            s, t = rng.uniform(0, 2, size=2)
            whole = linalg.mat_exp(a, s + t)
            split = linalg.mat_exp(a, s) @ linalg.mat_exp(a, t)
            assert np.linalg.norm(whole - split, 2) <= 1e-9 * np.linalg.norm(whole, 2)


class TestSolveShifted:
    def test_zero_dt_is_identity(self):
        x = np.array([1.0, -2.0, 3.0])
        assert np.allclose(linalg.solve_shifted(np.eye(3), 0.0, x), x)

    def test_hand_solved_system(self):
        # (I - A) y = (1,0) with the rotation generator: [[1,1],[-1,1]] y = (1,0)
        y = linalg.solve_shifted([[0.0, -1.0], [1.0, 0.0]], 1.0, [1.0, 0.0])
        assert np.allclose(y, [0.5, 0.5], atol=1e-14)

    def test_singular_shift(self):
        with pytest.raises(SingularShift):
            linalg.solve_shifted(np.eye(2), 1.0, [1.0, 0.0])

    def test_residual_property(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = rng.integers(2, 11)
            a = rng.standard_normal((n, n))
            dt = rng.uniform(0, 0.3)
            x = rng.standard_normal(n)
            try:
                y = linalg.solve_shifted(a, dt, x)
            except SingularShift:
                continue
            resid = np.linalg.norm((np.eye(n) - dt * a) @ y - x)
            assert resid <= 1e-10 * max(1.0, np.linalg.norm(x))
