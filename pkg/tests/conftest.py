import numpy as np
import pytest

import lassodf as ld


def random_design(rng, n, p):
    """Centered, unit-norm random Gaussian design."""
    X = rng.standard_normal((n, p))
    X -= X.mean(axis=0)
    X /= np.linalg.norm(X, axis=0)
    return X


def orthonormal_design(rng, n, p):
    """Centered design with exactly orthonormal columns (needs n > p)."""
    M = rng.standard_normal((n, p))
    M -= M.mean(axis=0)
    Q, _ = np.linalg.qr(M)
    return Q


@pytest.fixture(scope="session")
def diabetes_raw():
    return ld.load_diabetes()


@pytest.fixture(scope="session")
def diabetes10(diabetes_raw):
    return ld.standardize(diabetes_raw)


@pytest.fixture(scope="session")
def diabetes64(diabetes_raw):
    return ld.expand_standardized(diabetes_raw)


@pytest.fixture(scope="session")
def diabetes10_path(diabetes10):
    return ld.compute_path(diabetes10.X, diabetes10.y)


@pytest.fixture(scope="session")
def diabetes64_path(diabetes64):
    return ld.compute_path(diabetes64.X, diabetes64.y)
