"""
QDWH: the dynamically weighted Halley iteration for the polar decomposition.
"""

import logging
import math
from time import perf_counter
from typing import NamedTuple, Optional

import numpy as np
from django.conf import settings

from apps.core.exceptions import DomainError, NonConvergenceError, NotPositiveDefiniteError, ShapeError
from apps.core.utils import DenseMatrix, as_dense, relative_change
from apps.linalg.factorizations import cholesky, solve_gram
from apps.linalg.qr import DEFAULT_BLOCK_SIZE, householder_qr, stacked_matrix, structured_qr

from .convergence import assemble_h, convergence_threshold
from .types import CHOLESKY, QDWH, QR, IterationRecord, PolarResult

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-15
MAX_ITERATIONS = 12
# Above this weight the Cholesky form loses accuracy.
QR_SWITCH = 100.0


class QdwhWeights(NamedTuple):
    a: float
    b: float
    c: float


def qdwh_weights(ell: float) -> QdwhWeights:
    """
    Dynamical weights of one QDWH step for the lower edge ell in (0, 1].
    """
    ell = float(ell)
    if not math.isfinite(ell) or not 0.0 < ell <= 1.0:
        raise DomainError(f"Interval edge ell must lie in (0, 1], got {ell!r}.")
    ell2 = ell * ell
    gamma = (4.0 * (1.0 - ell2) / (ell2 * ell2)) ** (1.0 / 3.0)
    root = math.sqrt(1.0 + gamma)
    a = root + 0.5 * math.sqrt(8.0 - 4.0 * gamma + 8.0 * (2.0 - ell2) / (ell2 * root))
    b = (a - 1.0) ** 2 / 4.0
    return QdwhWeights(a, b, a + b - 1.0)


def next_ell(ell: float, weights: QdwhWeights) -> float:
    """Image of ell under one weighted Halley step, capped at 1."""
    a, b, c = weights
    ell2 = ell * ell
    return min(ell * (a + b * ell2) / (1.0 + c * ell2), 1.0)


def qdwh_step(
    x: DenseMatrix,
    weights: QdwhWeights,
    branch: str,
    *,
    nb: int = DEFAULT_BLOCK_SIZE,
    structured: bool = True,
) -> DenseMatrix:
    """
    One QDWH update.

    The QR branch factors [sqrt(c) X; I], which shares its Q with the
    structured [X; (1/sqrt(c)) I]. The Cholesky branch solves with
    I + c X^T X and raises NotPositiveDefiniteError when that fails.
    """
    a, b, c = weights
    m = x.shape[0]
    if branch == QR:
        if structured:
            factors = structured_qr(x, 1.0 / c, nb)
            q1, q2 = factors.q1, factors.q2
        else:
            q, _ = householder_qr(stacked_matrix(math.sqrt(c) * x, 1.0), nb)
            q1, q2 = q[:m], q[m:]
        update = (1.0 / math.sqrt(c)) * (a - b / c) * (q1 @ q2.T)
    elif branch == CHOLESKY:
        n = x.shape[1]
        gram = x.T @ x
        z = np.eye(n) + c * 0.5 * (gram + gram.T)
        update = (a - b / c) * solve_gram(x, cholesky(z))
    else:
        raise DomainError(f"Unknown QDWH branch {branch!r}.")
    return np.asfortranarray((b / c) * x + update)


def _check_scalars(alpha: float, beta: float) -> None:
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not math.isfinite(value) or value <= 0.0:
            raise DomainError(f"{name} must be positive and finite, got {value!r}.")
    if beta > alpha:
        raise DomainError(f"beta={beta!r} exceeds alpha={alpha!r}.")


def qdwh_pd(
    a,
    alpha: float,
    beta: float,
    tol: Optional[float] = None,
    *,
    nb: Optional[int] = None,
    structured: Optional[bool] = None,
    max_iter: int = MAX_ITERATIONS,
) -> PolarResult:
    """
    Polar decomposition A = Q_p H by QDWH.

    Args:
        a: m x n matrix with m >= n and full column rank
        alpha: Upper bound on sigma_max(A)
        beta: Lower bound on sigma_min(A), at most alpha
        tol: Target accuracy, POLAR_SVD_QDWH_TOL by default
        nb: Panel width of the QR kernel
        structured: Use the structured QR, POLAR_SVD_STRUCTURED_QR by default
        max_iter: Hard iteration cap

    Returns:
        PolarResult with one IterationRecord per step
    """
    a = as_dense(a, "A")
    m, n = a.shape
    if m < n:
        raise ShapeError(f"qdwh_pd needs m >= n, got {a.shape}.")
    alpha, beta = float(alpha), float(beta)
    _check_scalars(alpha, beta)
    tol = getattr(settings, "POLAR_SVD_QDWH_TOL", DEFAULT_TOL) if tol is None else float(tol)
    nb = getattr(settings, "POLAR_SVD_BLOCK_SIZE", DEFAULT_BLOCK_SIZE) if nb is None else nb
    structured = getattr(settings, "POLAR_SVD_STRUCTURED_QR", True) if structured is None else structured
    threshold = convergence_threshold(1, tol)

    x = np.asfortranarray(a / alpha)
    ell = beta / alpha
    log = []
    for index in range(1, max_iter + 1):
        start = perf_counter()
        weights = qdwh_weights(ell)
        branch = QR if weights.c > QR_SWITCH else CHOLESKY
        fallback = ()
        try:
            x_next = qdwh_step(x, weights, branch, nb=nb, structured=structured)
        except NotPositiveDefiniteError:
            logger.warning("qdwh step %d: Cholesky failed (c=%.3e), retrying with QR", index, weights.c)
            branch, fallback = QR, (0,)
            x_next = qdwh_step(x, weights, QR, nb=nb, structured=structured)

        ell_next = max(ell, next_ell(ell, weights))
        delta = relative_change(x, x_next)
        record = IterationRecord(
            index=index,
            branch=branch,
            ell_before=ell,
            ell_after=ell_next,
            step_delta=delta,
            seconds=perf_counter() - start,
            fallback_groups=fallback,
        )
        log.append(record)
        logger.debug(
            "qdwh step %d: branch=%s c=%.3e ell=%.3e delta=%.3e", index, branch, weights.c, ell_next, delta
        )
        x, ell = x_next, ell_next
        if delta <= threshold:
            break
    else:
        raise NonConvergenceError(f"QDWH did not converge in {max_iter} iterations.", log=log)

    return PolarResult(
        q_p=x, h=assemble_h(x, a), iters=len(log), log=tuple(log), method=QDWH, r=1
    )
