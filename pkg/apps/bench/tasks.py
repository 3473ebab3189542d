"""
Celery tasks for the bench app.
"""

import logging

from celery import shared_task

from apps.core.exceptions import NonConvergenceError, UsageError

logger = logging.getLogger(__name__)


def run_suite(suite: str, **options):
    """
    Run a named benchmark suite and return its records.
    """
    from .runners import ACCURACY, ITERATIONS, STRUCTURED_QR, accuracy_suite, iteration_grid, structured_qr_comparison

    if suite == ITERATIONS:
        return iteration_grid(**options)
    if suite == STRUCTURED_QR:
        if "shapes" in options:
            # JSON delivers shapes as lists.
            options["shapes"] = [tuple(shape) for shape in options["shapes"]]
        return structured_qr_comparison(**options)
    if suite == ACCURACY:
        return accuracy_suite(**options)
    raise UsageError(f"Unknown suite {suite!r}, expected one of {(ITERATIONS, STRUCTURED_QR, ACCURACY)}.")


def save_records(records):
    """Persist records as BenchRun rows."""
    from .models import BenchRun

    return BenchRun.objects.bulk_create(BenchRun.from_record(record) for record in records)


@shared_task
def run_bench_suite(suite: str, options: dict = None):
    """
    Run a benchmark suite in the background and store its records.
    """
    options = dict(options or {})
    try:
        records = run_suite(suite, **options)
    except NonConvergenceError as exc:
        logger.exception("Suite %s did not converge", suite)
        record = getattr(exc, "record", None)
        if record is not None:
            save_records([record])
        return {"suite": suite, "status": "non_convergence", "records": 1 if record else 0}

    runs = save_records(records)
    logger.info("Suite %s stored %d runs", suite, len(runs))
    return {"suite": suite, "status": "ok", "records": len(runs), "ids": [run.pk for run in runs]}
