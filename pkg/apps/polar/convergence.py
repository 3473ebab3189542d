"""
Stopping test and Hermitian-factor assembly shared by QDWH and Zolo-PD.
"""

import numpy as np

from apps.core.exceptions import DomainError, ShapeError
from apps.core.utils import DenseMatrix, as_dense, relative_change


def convergence_threshold(r: int, tol: float) -> float:
    """tol ** (1 / (2r + 1)); r = 1 gives the QDWH cube root."""
    if not 0.0 < tol < 1.0:
        raise DomainError(f"Tolerance must lie in (0, 1), got {tol!r}.")
    return tol ** (1.0 / (2 * r + 1))


def check_convergence(x_prev, x_next, r: int, tol: float) -> bool:
    """
    True iff ||x_next - x_prev||_F / ||x_next||_F <= tol^(1/(2r+1)).
    """
    return relative_change(as_dense(x_prev, "x_prev"), as_dense(x_next, "x_next")) <= (
        convergence_threshold(r, tol)
    )


def assemble_h(q_p, a) -> DenseMatrix:
    """
    Symmetric factor H = (Q_p^T A + (Q_p^T A)^T) / 2.
    """
    q_p = as_dense(q_p, "q_p")
    a = as_dense(a, "A")
    if q_p.shape != a.shape:
        raise ShapeError(f"q_p {q_p.shape} and A {a.shape} must share a shape.")
    product = q_p.T @ a
    return np.asfortranarray(0.5 * (product + product.T))
