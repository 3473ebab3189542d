"""
Bounds on the extreme singular values used to scale the polar iterations.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from apps.core.exceptions import SingularMatrixError
from apps.core.utils import as_dense

logger = logging.getLogger(__name__)

INVERSE_ITERATIONS = 50
SAFETY_FACTOR = 0.9
SINGULAR_THRESHOLD = 1e-290
SEED = 0


class Bounds(NamedTuple):
    alpha: float
    beta: float

    @property
    def kappa(self) -> float:
        return self.alpha / self.beta


def estimate_bounds(a) -> Bounds:
    """
    Upper bound on sigma_max and (likely) lower bound on sigma_min.

    alpha is the Frobenius norm. beta comes from inverse iteration on A^T A
    with LU-backed solves, finished with a Rayleigh quotient and shrunk by
    a 0.9 safety factor.

    Args:
        a: m x n matrix

    Returns:
        Bounds(alpha, beta)
    """
    a = as_dense(a, "A")
    m, n = a.shape
    alpha = float(np.linalg.norm(a, "fro"))
    if alpha == 0.0:
        raise SingularMatrixError("Matrix is identically zero.")

    # sigma(A) = sigma(R) for A = QR, so work with a square factor.
    square = a if m == n else scipy.linalg.qr(a if m > n else a.T, mode="r")[0][: min(m, n)]
    with np.errstate(all="ignore"):
        lu, piv = scipy.linalg.lu_factor(square, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if not np.all(pivots > SINGULAR_THRESHOLD * alpha):
        raise SingularMatrixError("LU factorization met a zero pivot.")

    rng = np.random.default_rng(SEED)
    x = rng.standard_normal(square.shape[1])
    x /= np.linalg.norm(x)
    for _ in range(INVERSE_ITERATIONS):
        y = scipy.linalg.lu_solve((lu, piv), x, trans=1, check_finite=False)
        y = scipy.linalg.lu_solve((lu, piv), y, check_finite=False)
        norm = float(np.linalg.norm(y))
        if not np.isfinite(norm) or norm == 0.0:
            raise SingularMatrixError("Inverse iteration diverged.")
        x = y / norm

    sigma_min = float(np.linalg.norm(square @ x))
    if sigma_min < SINGULAR_THRESHOLD:
        raise SingularMatrixError(f"Estimated sigma_min {sigma_min:.3e} is below {SINGULAR_THRESHOLD:g}.")
    beta = SAFETY_FACTOR * sigma_min
    logger.debug("estimate_bounds: alpha=%.6e beta=%.6e", alpha, beta)
    return Bounds(alpha, beta)
