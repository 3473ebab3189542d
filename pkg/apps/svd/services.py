"""
SVD through the polar decomposition: A = Q_p H, H = V diag(sigma) V^T, U = Q_p V.
"""

import logging
from dataclasses import dataclass, field, replace
from time import perf_counter
from typing import Optional

import numpy as np
from django.conf import settings

from apps.core.exceptions import DomainError, NonConvergenceError, UsageError
from apps.core.utils import DenseMatrix, as_dense
from apps.elliptic.zolotarev import DEFAULT_R_MAX, RPolicy, choose_r
from apps.linalg.bounds import Bounds, estimate_bounds
from apps.linalg.factorizations import sym_eig
from apps.parallel.plan import ExecutionPlan, default_plan
from apps.polar.qdwh import qdwh_pd
from apps.polar.types import CHOLESKY, METHODS, QR, ZOLO, PolarResult
from apps.polar.zolo import zolo_pd

from .metrics import SvdMetrics, metrics

logger = logging.getLogger(__name__)

BOUNDS_ESTIMATED = "estimated"
BOUNDS_OVERRIDE = "override"


@dataclass(frozen=True)
class SvdOptions:
    """
    Knobs of polar_svd. None means "use the configured default".
    """

    r_policy: RPolicy = field(default_factory=RPolicy.table)
    r_max: Optional[int] = None
    tol: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    plan: Optional[ExecutionPlan] = None
    workers: Optional[int] = None
    nb: Optional[int] = None
    structured: Optional[bool] = None

    def __post_init__(self):
        if (self.alpha is None) != (self.beta is None):
            raise UsageError("Bounds override needs both alpha and beta.")


@dataclass(frozen=True, eq=False)
class SvdResult:
    u: DenseMatrix
    sigma: np.ndarray
    v: DenseMatrix
    metrics: SvdMetrics
    method: str
    pd_iters: int
    r: int
    bounds: Bounds
    bounds_source: str
    polar: PolarResult = field(repr=False)
    timings: dict = field(default_factory=dict)


def resolve_bounds(a: DenseMatrix, opts: SvdOptions):
    if opts.alpha is not None:
        alpha, beta = float(opts.alpha), float(opts.beta)
        if beta > alpha:
            logger.warning("beta=%.3e exceeds alpha=%.3e, clamping beta to alpha", beta, alpha)
            beta = alpha
        return Bounds(alpha, beta), BOUNDS_OVERRIDE
    return estimate_bounds(a), BOUNDS_ESTIMATED


def polar_svd(a, method: str = ZOLO, opts: Optional[SvdOptions] = None) -> SvdResult:
    """
    Full thin SVD of A by polar decomposition and a symmetric eigensolve.

    Singular values are the eigenvalues of H clamped at zero, sorted
    descending with ties kept in eigensolver order. For m < n the
    factorization runs on A^T and the factors are swapped.

    Args:
        a: m x n matrix
        method: "zolo" or "qdwh"
        opts: SvdOptions

    Returns:
        SvdResult with metrics attached
    """
    if method not in METHODS:
        raise DomainError(f"Unknown method {method!r}, expected one of {METHODS}.")
    opts = opts or SvdOptions()
    a = as_dense(a, "A")
    transposed = a.shape[0] < a.shape[1]
    work = np.asfortranarray(a.T) if transposed else a
    started = perf_counter()

    bounds, source = resolve_bounds(work, opts)
    bounds_seconds = perf_counter() - started

    start = perf_counter()
    r = 1
    try:
        if method == ZOLO:
            r_max = opts.r_max or getattr(settings, "POLAR_SVD_R_MAX", DEFAULT_R_MAX)
            r = choose_r(bounds.kappa, r_max, opts.r_policy).r
            plan = opts.plan or default_plan(r, opts.workers)
            if plan.r != r:
                plan = default_plan(r, plan.total_workers)
            pd = zolo_pd(
                work, bounds.alpha, bounds.beta, r, opts.tol,
                plan=plan, nb=opts.nb, structured=opts.structured,
            )
        else:
            pd = qdwh_pd(work, bounds.alpha, bounds.beta, opts.tol, nb=opts.nb, structured=opts.structured)
    except NonConvergenceError as exc:
        exc.r, exc.kappa = r, bounds.kappa
        exc.add_note(f"method={method} bounds={source} kappa~{bounds.kappa:.3e}")
        raise
    pd_seconds = perf_counter() - start

    start = perf_counter()
    eig = sym_eig(pd.h)
    order = np.argsort(-eig.eigenvalues, kind="stable")
    min_eigenvalue = float(eig.eigenvalues.min())
    sigma = np.maximum(eig.eigenvalues[order], 0.0)
    v = np.asfortranarray(eig.v[:, order])
    u = np.asfortranarray(pd.q_p @ v)
    eig_seconds = perf_counter() - start
    if transposed:
        u, v = v, u

    result_metrics = replace(metrics(a, u, sigma, v), min_eigenvalue=min_eigenvalue)
    timings = {
        "bounds_seconds": bounds_seconds,
        "pd_seconds": pd_seconds,
        "qr_seconds": pd.stage_seconds(QR),
        "chol_seconds": pd.stage_seconds(CHOLESKY),
        "combine_seconds": pd.combine_seconds,
        "eig_seconds": eig_seconds,
        "total_seconds": perf_counter() - started,
    }
    logger.info(
        "polar_svd %s: shape=%s r=%d iters=%d res=%.2e orth=(%.2e, %.2e)",
        method, a.shape, pd.r, pd.iters, result_metrics.res, result_metrics.orth_l, result_metrics.orth_r,
    )
    return SvdResult(
        u=u,
        sigma=sigma,
        v=v,
        metrics=result_metrics,
        method=method,
        pd_iters=pd.iters,
        r=pd.r,
        bounds=bounds,
        bounds_source=source,
        polar=pd,
        timings=timings,
    )
