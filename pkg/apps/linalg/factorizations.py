"""
Cholesky factorization and the symmetric eigensolver, both on LAPACK via scipy.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from apps.core.exceptions import NotPositiveDefiniteError, ShapeError, SymmetryError
from apps.core.utils import DenseMatrix, as_dense

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-12


class EigResult(NamedTuple):
    v: DenseMatrix
    eigenvalues: np.ndarray


def _check_symmetric(matrix: DenseMatrix, name: str) -> None:
    if matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"{name} must be square, got {matrix.shape}.")
    scale = float(np.linalg.norm(matrix))
    if float(np.linalg.norm(matrix - matrix.T)) > SYMMETRY_RTOL * scale:
        raise SymmetryError(f"{name} is not symmetric to relative {SYMMETRY_RTOL:g}.")


def cholesky(z) -> DenseMatrix:
    """
    Lower-triangular Cholesky factor L with L L^T = Z.

    Raises NotPositiveDefiniteError on a non-positive pivot.
    """
    z = as_dense(z, "Z")
    _check_symmetric(z, "Z")
    try:
        factor = scipy.linalg.cholesky(z, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc
    return np.asfortranarray(factor)


def solve_gram(x: DenseMatrix, factor: DenseMatrix) -> DenseMatrix:
    """
    X (L L^T)^{-1} for a lower Cholesky factor L, via two triangular solves.
    """
    y = scipy.linalg.solve_triangular(factor, x.T, lower=True, check_finite=False)
    y = scipy.linalg.solve_triangular(factor, y, lower=True, trans="T", check_finite=False)
    return np.asfortranarray(y.T)


def sym_eig(h) -> EigResult:
    """
    Eigendecomposition of a symmetric matrix, eigenvalues ascending.
    """
    h = as_dense(h, "H")
    _check_symmetric(h, "H")
    eigenvalues, vectors = scipy.linalg.eigh(h, check_finite=False)
    return EigResult(np.asfortranarray(vectors), eigenvalues)
