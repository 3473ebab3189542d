"""
Utility functions shared by the numerical apps.
"""

from typing import Optional

import numpy as np
import numpy.typing as npt

from .exceptions import DomainError, ShapeError

DenseMatrix = npt.NDArray[np.float64]

EPS = float(np.finfo(np.float64).eps)


def as_dense(matrix, name: str = "matrix") -> DenseMatrix:
    """
    Validate and convert an operand into a column-major float64 matrix.

    Args:
        matrix: Anything numpy can turn into a 2-D real array
        name: Operand name used in error messages

    Returns:
        A Fortran-ordered float64 array (a copy only when conversion is needed)
    """
    array = np.asarray(matrix)
    if np.iscomplexobj(array):
        raise DomainError(f"{name} must be real, got complex entries.")
    array = np.asfortranarray(array, dtype=np.float64)
    if array.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got ndim={array.ndim}.")
    if array.shape[0] < 1 or array.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and column, got {array.shape}.")
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} has non-finite entries.")
    return array


def require_same_shape(a: DenseMatrix, b: DenseMatrix, what: str = "operands") -> None:
    """Raise ShapeError unless two arrays share a shape."""
    if a.shape != b.shape:
        raise ShapeError(f"{what} differ in shape: {a.shape} vs {b.shape}.")


def relative_change(previous: DenseMatrix, current: DenseMatrix) -> float:
    """
    Relative Frobenius change between consecutive iterates.

    Args:
        previous: Iterate X_k
        current: Iterate X_{k+1}

    Returns:
        ||current - previous||_F / ||current||_F, with 0 for two zero matrices
    """
    require_same_shape(previous, current, "iterates")
    numerator = float(np.linalg.norm(current - previous))
    denominator = float(np.linalg.norm(current))
    if denominator == 0.0:
        return 0.0 if numerator == 0.0 else float("inf")
    return numerator / denominator


def orthogonality_defect(q: DenseMatrix, scale: Optional[int] = None) -> float:
    """
    Normalized distance of the columns of q from orthonormality.

    Args:
        q: Matrix with (nominally) orthonormal columns
        scale: Divisor, defaults to the number of columns

    Returns:
        ||I - q^T q||_F / scale
    """
    n = q.shape[1]
    gram = q.T @ q
    gram[np.diag_indices(n)] -= 1.0
    return float(np.linalg.norm(gram)) / float(scale or n)


def chebyshev_points(lower: float, upper: float, count: int) -> np.ndarray:
    """Chebyshev-Lobatto points on [lower, upper], both endpoints included."""
    theta = np.linspace(0.0, np.pi, count)
    points = 0.5 * (lower + upper) - 0.5 * (upper - lower) * np.cos(theta)
    # The affine map rounds the endpoints when lower is tiny.
    points[0], points[-1] = lower, upper
    return np.clip(points, lower, upper)
