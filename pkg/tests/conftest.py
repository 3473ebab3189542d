"""
Pytest configuration and fixtures for the polar-svd tests.
"""

import numpy as np
import pytest
from rest_framework.test import APIClient


@pytest.fixture(autouse=True)
def polar_settings(settings, tmp_path):
    """Pin the worker budget and keep reports out of the source tree."""
    settings.POLAR_SVD_WORKERS = 4
    settings.POLAR_SVD_BLOCK_SIZE = 32
    settings.POLAR_SVD_PIN_BLAS = True
    settings.POLAR_SVD_STRUCTURED_QR = True
    settings.POLAR_SVD_REPORTS_DIR = tmp_path / "reports"
    settings.REST_FRAMEWORK = {
        **settings.REST_FRAMEWORK,
        "DEFAULT_THROTTLE_CLASSES": [],
    }


@pytest.fixture
def api_client():
    """Return an unauthenticated API client."""
    return APIClient()


@pytest.fixture
def rng():
    """Return a seeded random generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def orthogonal(rng):
    """Return a factory of random orthogonal matrices."""

    def make(n):
        q, r = np.linalg.qr(rng.standard_normal((n, n)))
        return q * np.sign(np.diag(r))

    return make


@pytest.fixture
def diagonal_spectrum():
    """Return a factory of diag(logspace(-log10 kappa, 0, n)) test matrices."""

    def make(kappa, n=100):
        return np.diag(np.logspace(-np.log10(kappa), 0.0, n))

    return make


@pytest.fixture
def matrix_market_file(tmp_path):
    """Return a factory writing Matrix Market text to a temporary file."""

    def write(text, name="matrix.mtx"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def bench_run(db):
    """Create and return a stored benchmark run."""
    from tests.factories import BenchRunFactory

    return BenchRunFactory()
