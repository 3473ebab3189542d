"""
Concurrent evaluation of the r terms of one Zolotarev pass.

Each group forms its own term from a read-only view of X. The terms are
then summed in plan.reduction_order, so the result does not depend on the
order in which the groups finish. BLAS threads are capped for the whole
pass, including the serial reference path, which makes both paths produce
bitwise-identical output for the same plan.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from time import perf_counter
from typing import Optional, Sequence, Tuple

import numpy as np
from django.conf import settings
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits

from apps.core.exceptions import DomainError, NotPositiveDefiniteError, PolarSVDError
from apps.core.utils import DenseMatrix, as_dense
from apps.elliptic.zolotarev import ZolotarevParams
from apps.linalg.qr import DEFAULT_BLOCK_SIZE
from apps.polar.terms import cholesky_term, gram_matrix, qr_term
from apps.polar.types import BRANCHES, CHOLESKY

from .plan import ExecutionPlan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PassOutcome:
    x: DenseMatrix
    term_seconds: Tuple[float, ...]
    combine_seconds: float
    fallback_groups: Tuple[int, ...]


@contextmanager
def blas_limits(plan: ExecutionPlan):
    """Cap BLAS threads at one per group, or at the largest group size when unpinned."""
    pin = getattr(settings, "POLAR_SVD_PIN_BLAS", True)
    limit = 1 if pin else max(plan.group_sizes)
    with threadpool_limits(limits=limit, user_api="blas"):
        yield


def _evaluate_term(
    j: int,
    x: DenseMatrix,
    gram: Optional[DenseMatrix],
    p: ZolotarevParams,
    stage: str,
    nb: int,
    structured: bool,
):
    start = perf_counter()
    c = float(p.odd[j])
    weight = float(p.a[j])
    fell_back = False
    try:
        if stage == CHOLESKY:
            try:
                term = cholesky_term(x, gram, c, weight)
            except NotPositiveDefiniteError:
                logger.warning("Cholesky failed for group %d (c=%.3e), using the QR form", j, c)
                term = qr_term(x, c, weight, nb, structured)
                fell_back = True
        else:
            term = qr_term(x, c, weight, nb, structured)
    except PolarSVDError as exc:
        exc.group = j
        exc.add_note(f"raised while forming the term of group {j}")
        raise
    return term, perf_counter() - start, fell_back


def combine_terms(
    x: DenseMatrix, terms: Sequence[DenseMatrix], p: ZolotarevParams, order: Sequence[int]
) -> DenseMatrix:
    """m_hat * (X + sum_j T_j) with the sum taken in the given order."""
    total = np.array(x, order="F", copy=True)
    for j in order:
        total += terms[j]
    return np.asfortranarray(p.m_hat * total)


def run_zolo_pass(
    x,
    p: ZolotarevParams,
    plan: ExecutionPlan,
    stage: str,
    *,
    nb: Optional[int] = None,
    structured: Optional[bool] = None,
    parallel: bool = True,
) -> PassOutcome:
    """
    One Zolotarev pass X -> Z(X) with per-group timings.

    Args:
        x: Current iterate
        p: Coefficients of the pass
        plan: Worker groups, plan.r must equal p.r
        stage: QR or CHOLESKY form for every term
        nb: Panel width of the QR kernel
        structured: Use the structured QR of [X; sqrt(c) I]
        parallel: False evaluates the terms one after the other

    Returns:
        PassOutcome with the new iterate
    """
    x = as_dense(x, "X")
    if plan.r != p.r:
        raise DomainError(f"Plan has {plan.r} groups but the pass needs {p.r} terms.")
    if stage not in BRANCHES:
        raise DomainError(f"Unknown stage {stage!r}, expected one of {BRANCHES}.")
    nb = getattr(settings, "POLAR_SVD_BLOCK_SIZE", DEFAULT_BLOCK_SIZE) if nb is None else nb
    structured = getattr(settings, "POLAR_SVD_STRUCTURED_QR", True) if structured is None else structured

    with blas_limits(plan):
        gram = gram_matrix(x) if stage == CHOLESKY else None
        jobs = [delayed(_evaluate_term)(j, x, gram, p, stage, nb, structured) for j in range(plan.r)]
        if parallel and plan.r > 1:
            results = Parallel(n_jobs=plan.r, backend="threading")(jobs)
        else:
            results = [func(*args, **kwargs) for func, args, kwargs in jobs]

        start = perf_counter()
        x_next = combine_terms(x, [term for term, _, _ in results], p, plan.reduction_order)
        combine_seconds = perf_counter() - start

    fallback_groups = tuple(j for j, (_, _, fell_back) in enumerate(results) if fell_back)
    return PassOutcome(
        x=x_next,
        term_seconds=tuple(seconds for _, seconds, _ in results),
        combine_seconds=combine_seconds,
        fallback_groups=fallback_groups,
    )


def parallel_zolo_pass(x, p: ZolotarevParams, plan: ExecutionPlan, stage: str, **options) -> DenseMatrix:
    """Z(X) with the r terms formed concurrently, one group each."""
    return run_zolo_pass(x, p, plan, stage, parallel=True, **options).x


def serial_zolo_pass(x, p: ZolotarevParams, plan: ExecutionPlan, stage: str, **options) -> DenseMatrix:
    """Reference Z(X) with the terms formed one after the other."""
    return run_zolo_pass(x, p, plan, stage, parallel=False, **options).x
