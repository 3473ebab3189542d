"""
Benchmark suites: single pd/svd runs, the iteration grid, the structured
QR comparison and the accuracy suite.
"""

import logging
from time import perf_counter
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import NonConvergenceError
from apps.core.utils import DenseMatrix, as_dense, orthogonality_defect
from apps.elliptic.zolotarev import (
    DEFAULT_R_MAX,
    KAPPA_GRID,
    MAX_ORDER,
    RPolicy,
    choose_r,
    predict_iterations,
)
from apps.linalg.flops import FlopCounter
from apps.linalg.kernels import two_norm_estimate
from apps.linalg.qr import DEFAULT_BLOCK_SIZE, householder_qr, stacked_matrix, structured_qr
from apps.parallel.plan import default_plan, resolve_workers
from apps.polar.qdwh import qdwh_pd
from apps.polar.types import CHOLESKY, QDWH, QR, ZOLO, PolarResult
from apps.polar.zolo import zolo_pd
from apps.svd.services import SvdOptions, polar_svd, resolve_bounds

from .matrices import SYNTHETIC, MatrixSource
from .reports import STATUS_NON_CONVERGENCE, BenchRecord

logger = logging.getLogger(__name__)

PD = "pd"
SVD = "svd"
ITERATIONS = "iterations"
STRUCTURED_QR = "structured-qr"
ACCURACY = "accuracy"
SUITES = (PD, SVD, ITERATIONS, STRUCTURED_QR, ACCURACY)

BOUNDS_EXACT = "exact"

STRUCTURED_QR_SHAPES = ((256, 256), (512, 512), (1024, 512))
ACCURACY_KAPPAS = (1e2, 1e5, 1e8, 3.46e11)
ACCURACY_SIZES = (100, 300, 1000)
ITERATION_KAPPAS = (1.29, 14.0, 9.06e3)
ITERATION_SIZE = 200


def _fallback_count(pd: PolarResult) -> int:
    return sum(len(record.fallback_groups) for record in pd.log)


def _load_balance(pd: PolarResult) -> Optional[float]:
    ratios = [record.load_balance for record in pd.log if record.load_balance is not None]
    return max(ratios) if ratios else None


def _resolve_r(kappa: float, method: str, opts: SvdOptions) -> Tuple[int, Optional[int]]:
    if method != ZOLO:
        return 1, None
    r_max = opts.r_max or getattr(settings, "POLAR_SVD_R_MAX", DEFAULT_R_MAX)
    choice = choose_r(kappa, r_max, opts.r_policy)
    return choice.r, choice.predicted_iters


def _nb(opts: SvdOptions) -> int:
    return opts.nb or getattr(settings, "POLAR_SVD_BLOCK_SIZE", DEFAULT_BLOCK_SIZE)


def non_convergence_record(
    suite: str,
    matrix_id: str,
    a: DenseMatrix,
    method: str,
    r: int,
    exc: NonConvergenceError,
    kappa: Optional[float] = None,
) -> BenchRecord:
    """Partial record for a run that hit its iteration cap."""
    m, n = a.shape
    return BenchRecord(
        suite=suite,
        matrix_id=matrix_id,
        m=m,
        n=n,
        kappa=kappa,
        method=method,
        r=r,
        passes=len(exc.log),
        fallback_count=sum(len(record.fallback_groups) for record in exc.log),
        status=STATUS_NON_CONVERGENCE,
    )


def run_pd(
    a, matrix_id: str, method: str = ZOLO, opts: Optional[SvdOptions] = None, suite: str = PD
) -> Tuple[BenchRecord, PolarResult]:
    """
    Polar decomposition of A with res = ||A - Q_p H||_F / ||A||_2.
    """
    opts = opts or SvdOptions()
    a = as_dense(a, "A")
    work = a if a.shape[0] >= a.shape[1] else np.asfortranarray(a.T)
    start = perf_counter()
    bounds, source = resolve_bounds(work, opts)
    r, predicted = _resolve_r(bounds.kappa, method, opts)
    workers = None
    try:
        if method == ZOLO:
            plan = opts.plan if opts.plan is not None and opts.plan.r == r else default_plan(r, opts.workers)
            workers = plan.total_workers
            pd = zolo_pd(
                work, bounds.alpha, bounds.beta, r, opts.tol,
                plan=plan, nb=opts.nb, structured=opts.structured,
            )
        else:
            pd = qdwh_pd(work, bounds.alpha, bounds.beta, opts.tol, nb=opts.nb, structured=opts.structured)
    except NonConvergenceError as exc:
        exc.record = non_convergence_record(suite, matrix_id, work, method, r, exc, bounds.kappa)
        raise
    total = perf_counter() - start

    norm = two_norm_estimate(work)
    res = float(np.linalg.norm(work - pd.q_p @ pd.h)) / norm
    m, n = a.shape
    record = BenchRecord(
        suite=suite,
        matrix_id=matrix_id,
        m=m,
        n=n,
        kappa=bounds.kappa,
        method=method,
        r=r,
        nb=_nb(opts),
        workers=workers,
        passes=pd.iters,
        predicted_passes=predicted,
        bounds_source=source,
        res=res,
        orth_l=orthogonality_defect(pd.q_p),
        fallback_count=_fallback_count(pd),
        qr_seconds=pd.stage_seconds(QR),
        chol_seconds=pd.stage_seconds(CHOLESKY),
        combine_seconds=pd.combine_seconds,
        total_seconds=total,
        load_balance=_load_balance(pd),
    )
    return record, pd


def run_svd(
    a, matrix_id: str, method: str = ZOLO, opts: Optional[SvdOptions] = None, suite: str = SVD
) -> BenchRecord:
    opts = opts or SvdOptions()
    a = as_dense(a, "A")
    try:
        result = polar_svd(a, method, opts)
    except NonConvergenceError as exc:
        exc.record = non_convergence_record(
            suite, matrix_id, a, method, getattr(exc, "r", 1), exc, getattr(exc, "kappa", None)
        )
        raise
    predicted = predict_iterations(result.bounds.kappa, result.r) if method == ZOLO else None
    workers = None
    if method == ZOLO:
        workers = opts.plan.total_workers if opts.plan is not None else max(resolve_workers(opts.workers), result.r)
    m, n = a.shape
    return BenchRecord(
        suite=suite,
        matrix_id=matrix_id,
        m=m,
        n=n,
        kappa=result.bounds.kappa,
        method=method,
        r=result.r,
        nb=_nb(opts),
        workers=workers,
        passes=result.pd_iters,
        predicted_passes=predicted,
        bounds_source=result.bounds_source,
        res=result.metrics.res,
        orth_l=result.metrics.orth_l,
        orth_r=result.metrics.orth_r,
        min_eigenvalue=result.metrics.min_eigenvalue,
        fallback_count=_fallback_count(result.polar),
        qr_seconds=result.timings["qr_seconds"],
        chol_seconds=result.timings["chol_seconds"],
        combine_seconds=result.timings["combine_seconds"],
        eig_seconds=result.timings["eig_seconds"],
        total_seconds=result.timings["total_seconds"],
        load_balance=_load_balance(result.polar),
    )


def predicted_grid(kappas: Iterable[float] = KAPPA_GRID, r_max: int = MAX_ORDER) -> List[BenchRecord]:
    """The predictor table as records, one per (r, kappa)."""
    records = []
    for r in range(1, r_max + 1):
        for kappa in kappas:
            records.append(
                BenchRecord(
                    suite=ITERATIONS,
                    matrix_id="predicted",
                    m=1,
                    n=1,
                    kappa=kappa,
                    method=ZOLO,
                    r=r,
                    predicted_passes=predict_iterations(kappa, r),
                    bounds_source=BOUNDS_EXACT,
                )
            )
    return records


def iteration_grid(
    kappas: Sequence[float] = ITERATION_KAPPAS,
    orders: Sequence[int] = (2, 3, 4),
    n: int = ITERATION_SIZE,
    seed: int = 1,
    exact_bounds: bool = True,
    include_qdwh: bool = True,
    opts: Optional[SvdOptions] = None,
) -> List[BenchRecord]:
    """
    Measured pass counts on synthetic matrices next to the predicted ones.

    With exact_bounds the synthetic spectrum gives alpha = 1 and
    beta = 1/kappa directly.
    """
    opts = opts or SvdOptions()
    records = []
    for kappa in kappas:
        source = MatrixSource(SYNTHETIC, n=n, kappa=kappa, seed=seed)
        a, matrix_id = source.load(), source.matrix_id
        overrides = {"alpha": 1.0, "beta": 1.0 / kappa} if exact_bounds else {"alpha": None, "beta": None}
        runs = [(QDWH, RPolicy.table())] if include_qdwh else []
        runs += [(ZOLO, RPolicy.fixed(r)) for r in orders]
        for method, policy in runs:
            run_opts = SvdOptions(
                r_policy=policy, tol=opts.tol, plan=None, workers=opts.workers,
                nb=opts.nb, structured=opts.structured, **overrides,
            )
            record, _ = run_pd(a, matrix_id, method, run_opts, suite=ITERATIONS)
            if exact_bounds:
                record.bounds_source = BOUNDS_EXACT
                record.kappa = kappa
            records.append(record)
            logger.info(
                "iterations kappa=%g method=%s r=%d passes=%s predicted=%s",
                kappa, method, record.r, record.passes, record.predicted_passes,
            )
    return records


def structured_qr_comparison(
    shapes: Sequence[Tuple[int, int]] = STRUCTURED_QR_SHAPES,
    nb: int = DEFAULT_BLOCK_SIZE,
    c: float = 1.0,
    seed: int = 0,
) -> List[BenchRecord]:
    """
    Structured against dense QR of [X; sqrt(c) I]: multiply counts, time and
    the largest difference between the two Q1 Q2^T products.
    """
    rng = np.random.default_rng(seed)
    records = []
    for m, n in shapes:
        x = np.asfortranarray(rng.standard_normal((m, n)))
        structured_count, dense_count = FlopCounter(), FlopCounter()

        start = perf_counter()
        factors = structured_qr(x, c, nb, counter=structured_count)
        structured_seconds = perf_counter() - start
        start = perf_counter()
        q, _ = householder_qr(stacked_matrix(x, c), nb, counter=dense_count)
        dense_seconds = perf_counter() - start

        difference = factors.q1 @ factors.q2.T - q[:m] @ q[m:].T
        records.append(
            BenchRecord(
                suite=STRUCTURED_QR,
                matrix_id=f"gaussian-{m}x{n}-s{seed}",
                m=m,
                n=n,
                kappa=1.0,
                method="structured_qr",
                nb=nb,
                flops_mults=structured_count.mults,
                flops_adds=structured_count.adds,
                flops_reference=dense_count.mults,
                equivalence_error=float(np.abs(difference).max()),
                qr_seconds=structured_seconds,
                total_seconds=structured_seconds,
                reference_seconds=dense_seconds,
            )
        )
        logger.info(
            "structured qr %dx%d nb=%d: mults %d vs %d", m, n, nb, structured_count.mults, dense_count.mults
        )
    return records


def accuracy_suite(
    kappas: Sequence[float] = ACCURACY_KAPPAS,
    sizes: Sequence[int] = ACCURACY_SIZES,
    methods: Sequence[str] = (ZOLO, QDWH),
    seed: int = 1,
    opts: Optional[SvdOptions] = None,
) -> List[BenchRecord]:
    """Backward error and orthogonality of both SVD paths over a kappa x n grid."""
    opts = opts or SvdOptions()
    records = []
    for n in sizes:
        for kappa in kappas:
            source = MatrixSource(SYNTHETIC, n=n, kappa=kappa, seed=seed)
            a = source.load()
            for method in methods:
                records.append(run_svd(a, source.matrix_id, method, opts, suite=ACCURACY))
    return records
