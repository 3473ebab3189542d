"""
The independent terms of a Zolotarev pass.

Writing Z(X) = m_hat * (X + sum_j T_j), each T_j only needs X, the pole
c_{2j-1} and the weight a_j, so the r terms can be formed by separate workers.
"""

import math

import numpy as np

from apps.core.utils import DenseMatrix
from apps.linalg.factorizations import cholesky, solve_gram
from apps.linalg.qr import householder_qr, stacked_matrix, structured_qr


def qr_term(x: DenseMatrix, c: float, weight: float, nb: int, structured: bool = True) -> DenseMatrix:
    """
    (a_j / sqrt(c)) Q1 Q2^T from the QR factorization [X; sqrt(c) I] = [Q1; Q2] R.
    """
    m = x.shape[0]
    if structured:
        factors = structured_qr(x, c, nb)
        q1, q2 = factors.q1, factors.q2
    else:
        q, _ = householder_qr(stacked_matrix(x, c), nb)
        q1, q2 = q[:m], q[m:]
    return np.asfortranarray((weight / math.sqrt(c)) * (q1 @ q2.T))


def cholesky_term(x: DenseMatrix, gram: DenseMatrix, c: float, weight: float) -> DenseMatrix:
    """
    a_j X (X^T X + c I)^{-1} through the Cholesky factor of the shifted Gram matrix.

    Raises NotPositiveDefiniteError when the shifted Gram matrix is too
    ill-conditioned to factor.
    """
    shifted = gram + c * np.eye(gram.shape[0])
    factor = cholesky(shifted)
    return np.asfortranarray(weight * solve_gram(x, factor))


def gram_matrix(x: DenseMatrix) -> DenseMatrix:
    """X^T X, symmetrized so the Cholesky symmetry check sees exact symmetry."""
    product = x.T @ x
    return np.asfortranarray(0.5 * (product + product.T))
