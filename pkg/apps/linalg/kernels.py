"""
Matrix multiply and norm plumbing.
"""

from typing import Optional

import numpy as np

from apps.core.exceptions import ShapeError
from apps.core.utils import DenseMatrix, as_dense

from .flops import FlopCounter

POWER_ITERATIONS = 100
POWER_RTOL = 1e-12
POWER_SEED = 0


def gemm(a, b, counter: Optional[FlopCounter] = None) -> DenseMatrix:
    """Matrix product a @ b with optional flop accounting."""
    a = as_dense(a, "A")
    b = as_dense(b, "B")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"Cannot multiply {a.shape} by {b.shape}.")
    if counter is not None:
        counter.matmul(a.shape[0], a.shape[1], b.shape[1])
    return np.asfortranarray(a @ b)


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_dense(a, "A"), "fro"))


def two_norm_estimate(a, max_iter: int = POWER_ITERATIONS, rtol: float = POWER_RTOL) -> float:
    """
    Largest singular value by power iteration on A^T A.

    Args:
        a: Matrix
        max_iter: Iteration cap
        rtol: Stop once successive estimates agree to this relative tolerance

    Returns:
        Estimate of ||A||_2, exact zero for a zero matrix
    """
    a = as_dense(a, "A")
    rng = np.random.default_rng(POWER_SEED)
    x = rng.standard_normal(a.shape[1])
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(max_iter):
        y = a @ x
        sigma = float(np.linalg.norm(y))
        if sigma == 0.0:
            return 0.0
        z = a.T @ y
        x = z / np.linalg.norm(z)
        if abs(sigma - estimate) <= rtol * sigma:
            return sigma
        estimate = sigma
    return max(estimate, float(np.linalg.norm(a @ x)))
