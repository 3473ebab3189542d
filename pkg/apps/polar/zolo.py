"""
Zolo-PD: polar decomposition by composing scaled Zolotarev functions.

Each pass applies one type (2r+1, 2r) Zolotarev function to the iterate.
Its r partial-fraction terms are independent and are formed by the worker
groups of an ExecutionPlan. For kappa up to 1e16, r = 8 converges in two
passes.
"""

import logging
import math
from time import perf_counter
from typing import Optional

import numpy as np
import scipy.linalg
from django.conf import settings

from apps.core.exceptions import DomainError, NonConvergenceError, ShapeError
from apps.core.utils import DenseMatrix, as_dense, relative_change
from apps.elliptic.zolotarev import (
    CONVERGED_EDGE,
    ZolotarevParams,
    check_order,
    clamp_ell,
    ell_update,
    zolotarev_coeffs,
)
from apps.parallel.executor import run_zolo_pass
from apps.parallel.plan import ExecutionPlan, default_plan

from .convergence import assemble_h, convergence_threshold
from .types import CHOLESKY, QR, ZOLO, IterationRecord, PolarResult

logger = logging.getLogger(__name__)

DEFAULT_TOL = 2.0**-52
MAX_PASSES = 8
# The first pass uses the QR form once kappa reaches this value.
QR_KAPPA = 2.0


def zolotarev_apply_inverse(x, p: ZolotarevParams) -> DenseMatrix:
    """
    Z(X) by explicit dense solves with each X^T X + c_{2j-1} I.

    A direct evaluation of the matrix Zolotarev function, with none of the
    QR or Cholesky structure of a pass. Useful as an oracle on small,
    well-conditioned matrices.
    """
    x = as_dense(x, "X")
    n = x.shape[1]
    gram = x.T @ x
    gram = 0.5 * (gram + gram.T)
    total = np.array(x, order="F", copy=True)
    for c, weight in zip(p.odd, p.a):
        solved = scipy.linalg.solve(gram + c * np.eye(n), x.T, assume_a="pos")
        total += weight * solved.T
    return np.asfortranarray(p.m_hat * total)


def zolo_pd(
    a,
    alpha: float,
    beta: float,
    r: int,
    tol: Optional[float] = None,
    *,
    plan: Optional[ExecutionPlan] = None,
    nb: Optional[int] = None,
    structured: Optional[bool] = None,
    max_passes: int = MAX_PASSES,
) -> PolarResult:
    """
    Polar decomposition A = Q_p H by Zolo-PD of order r.

    The first pass uses the QR form when beta/alpha < 1/2, the Cholesky
    form otherwise; every later pass uses Cholesky. A restart keeps the
    iterate as is, with the interval edge moved to Z(ell). Passes stop once
    the step change passes the tol^(1/(2r+1)) test or the edge reaches
    1 - 1e-15.

    Args:
        a: m x n matrix with m >= n and full column rank
        alpha: Upper bound on sigma_max(A)
        beta: Lower bound on sigma_min(A), at most alpha
        r: Zolotarev order, 1..8
        tol: Target accuracy, POLAR_SVD_ZOLO_TOL by default
        plan: Worker groups, default_plan(r) by default
        nb: Panel width of the QR kernel
        structured: Use the structured QR, POLAR_SVD_STRUCTURED_QR by default
        max_passes: Hard pass cap

    Returns:
        PolarResult with one IterationRecord per pass
    """
    a = as_dense(a, "A")
    m, n = a.shape
    if m < n:
        raise ShapeError(f"zolo_pd needs m >= n, got {a.shape}.")
    r = check_order(r)
    alpha, beta = float(alpha), float(beta)
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not math.isfinite(value) or value <= 0.0:
            raise DomainError(f"{name} must be positive and finite, got {value!r}.")
    if beta > alpha:
        raise DomainError(f"beta={beta!r} exceeds alpha={alpha!r}.")
    plan = default_plan(r) if plan is None else plan
    if plan.r != r:
        raise DomainError(f"Plan has {plan.r} groups, order r={r} needs {r}.")
    tol = getattr(settings, "POLAR_SVD_ZOLO_TOL", DEFAULT_TOL) if tol is None else float(tol)
    threshold = convergence_threshold(r, tol)

    x = np.asfortranarray(a / alpha)
    stage = QR if alpha / beta >= QR_KAPPA else CHOLESKY
    ell = clamp_ell(beta / alpha)
    log = []
    for index in range(1, max_passes + 1):
        start = perf_counter()
        p = zolotarev_coeffs(r, ell)
        outcome = run_zolo_pass(x, p, plan, stage, nb=nb, structured=structured)
        ell_next = max(ell, ell_update(p))
        delta = relative_change(x, outcome.x)
        record = IterationRecord(
            index=index,
            branch=stage,
            ell_before=ell,
            ell_after=ell_next,
            step_delta=delta,
            seconds=perf_counter() - start,
            term_seconds=outcome.term_seconds,
            combine_seconds=outcome.combine_seconds,
            fallback_groups=outcome.fallback_groups,
        )
        log.append(record)
        logger.debug(
            "zolo pass %d: r=%d stage=%s ell=%.3e delta=%.3e load_balance=%s",
            index, r, stage, ell_next, delta, record.load_balance,
        )
        x = outcome.x
        if delta <= threshold or ell_next >= CONVERGED_EDGE:
            break
        ell = clamp_ell(ell_next)
        stage = CHOLESKY
    else:
        raise NonConvergenceError(f"Zolo-PD did not converge in {max_passes} passes.", log=log)

    return PolarResult(
        q_p=x, h=assemble_h(x, a), iters=len(log), log=tuple(log), method=ZOLO, r=r
    )
