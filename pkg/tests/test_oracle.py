import numpy as np
import pytest

import lassodf as ld
from lassodf import oracle
from lassodf.path import kkt_check, objective

from conftest import orthonormal_design, random_design


def soft(z, thresh):
    return np.sign(z) * np.maximum(np.abs(z) - thresh, 0.0)


class TestIterative:
    def test_orthonormal_soft_threshold(self):
        rng = np.random.default_rng(0)
        Q = orthonormal_design(rng, 12, 4)
        y = rng.standard_normal(12) * 3
        z = Q.T @ y
        for lam in [0.0, 0.5, 1.5, 4.0]:
            sol = oracle.solve_iterative(Q, y, lam)
            np.testing.assert_allclose(sol.beta, soft(z, lam / 2), atol=1e-8)

    def test_lambda_zero_is_ols(self):
        rng = np.random.default_rng(1)
        X = random_design(rng, 15, 4)
        y = rng.standard_normal(15)
        sol = oracle.solve_iterative(X, y, 0.0)
        ols, *_ = np.linalg.lstsq(X, y, rcond=None)
        np.testing.assert_allclose(sol.beta, ols, atol=1e-7)

    def test_large_lambda_gives_null(self):
        rng = np.random.default_rng(2)
        X = random_design(rng, 15, 4)
        y = rng.standard_normal(15)
        lam0 = float(np.abs(2 * X.T @ y).max())
        sol = oracle.solve_iterative(X, y, 2 * lam0)
        np.testing.assert_array_equal(sol.beta, 0.0)
        assert sol.iterations == 1

    def test_negative_lambda_rejected(self):
        with pytest.raises(ValueError):
            oracle.solve_iterative(np.eye(2), np.ones(2), -1.0)

    def test_kkt_certified(self):
        rng = np.random.default_rng(3)
        X = random_design(rng, 20, 6)
        y = rng.standard_normal(20)
        sol = oracle.solve_iterative(X, y, 1.3)
        assert sol.max_kkt_violation <= 1e-8


class TestSignPattern:
    def test_p1_soft_threshold(self):
        X = np.array([[1.0], [0.0]])
        y = np.array([2.0, 5.0])
        beta = oracle.solve_signpattern(X, y, 1.0)
        assert beta[0] == pytest.approx(1.5, abs=1e-12)

    def test_matches_iterative(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            X = random_design(rng, 14, 4)
            y = rng.standard_normal(14)
            lam = float(rng.uniform(0.05, 1.5))
            b_sp = oracle.solve_signpattern(X, y, lam)
            b_cd = oracle.solve_iterative(X, y, lam).beta
            np.testing.assert_allclose(b_sp, b_cd, atol=1e-7)

    def test_p_cap(self):
        with pytest.raises(ValueError, match="p <= 6"):
            oracle.solve_signpattern(np.ones((3, 7)), np.ones(3), 1.0)

    def test_dominates_perturbations(self):
        rng = np.random.default_rng(5)
        X = random_design(rng, 12, 3)
        y = rng.standard_normal(12)
        lam = 0.8
        beta = oracle.solve_signpattern(X, y, lam)
        base = objective(X, y, beta, lam)
        for _ in range(50):
            trial = beta + rng.standard_normal(3) * 0.1
            assert objective(X, y, trial, lam) >= base - 1e-12


def test_compare_path_oracle_small_gap():
    rng = np.random.default_rng(6)
    X = random_design(rng, 15, 5)
    y = rng.standard_normal(15)
    path = ld.compute_path(X, y)
    grid = np.linspace(0, path.lambda_max, 7)
    assert oracle.compare_path_oracle(path, grid) <= 1e-6


def test_path_certified_by_both_oracles():
    rng = np.random.default_rng(7)
    for _ in range(5):
        X = random_design(rng, 12, 4)
        y = rng.standard_normal(12)
        path = ld.compute_path(X, y)
        for lam in rng.uniform(0, path.lambda_max, size=3):
            fit = ld.fit_at(path, float(lam))
            rep = kkt_check(X, y, fit.beta, float(lam))
            assert max(rep.active_violation, rep.inactive_violation) <= 1e-8 * (1 + lam)
            b_sp = oracle.solve_signpattern(X, y, float(lam), tol=1e-8)
            np.testing.assert_allclose(fit.beta, b_sp, atol=1e-7)
