"""
Shared plumbing for the polar-svd management commands.

Every command maps PolarSVDError.exit_code onto CommandError.returncode:
0 success, 2 domain or parse errors, 3 non-convergence, 64 usage errors.
"""

import logging
from pathlib import Path
from typing import Callable, List

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import DomainError, NonConvergenceError, PolarSVDError, UsageError
from apps.elliptic.zolotarev import RPolicy
from apps.polar.types import METHODS, ZOLO
from apps.svd.services import SvdOptions

from ..matrices import CORPUS, DISTRIBUTIONS, LOG_SPACED, MatrixSource
from ..reports import CSV, REPORT_FORMATS, BenchReport

logger = logging.getLogger(__name__)


def parse_floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"Expected a comma-separated list of numbers, got {text!r}.")


def parse_r_policy(text: str) -> RPolicy:
    try:
        return RPolicy.parse(text)
    except DomainError as exc:
        raise UsageError(f"--r: {exc.detail}") from exc


def parse_ints(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"Expected a comma-separated list of integers, got {text!r}.")


class PolarSVDCommand(BaseCommand):
    """
    Base class translating library errors into exit codes.
    """

    requires_system_checks = []
    requires_migrations_checks = False
    suite = None

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except PolarSVDError as exc:
            logger.error("%s failed: %s", self.suite or "command", exc)
            raise CommandError(f"[{exc.code}] {exc.detail}", returncode=exc.exit_code) from exc

    # Arguments

    def add_matrix_arguments(self, parser):
        group = parser.add_argument_group("matrix")
        group.add_argument("--input", help="Matrix Market file")
        group.add_argument("--synthetic", help="n,kappa,seed or a corpus name")
        group.add_argument("--corpus", help=f"Comma-separated corpus names or 'all' ({', '.join(CORPUS)})")
        group.add_argument("--distribution", choices=DISTRIBUTIONS, default=LOG_SPACED)

    def add_solver_arguments(self, parser):
        group = parser.add_argument_group("solver")
        group.add_argument("--method", choices=METHODS, default=ZOLO)
        group.add_argument("--r", default="table", help="r policy: table | fixed:K")
        group.add_argument("--r-max", type=int, default=None)
        group.add_argument("--tol", type=float, default=None)
        group.add_argument("--nb", type=int, default=None)
        group.add_argument("--workers", type=int, default=None)
        group.add_argument("--alpha", type=float, default=None)
        group.add_argument("--beta", type=float, default=None)
        group.add_argument("--dense-qr", action="store_true", help="Use the dense QR of the stacked matrix")

    def add_report_arguments(self, parser):
        group = parser.add_argument_group("report")
        group.add_argument("--format", choices=REPORT_FORMATS, default=CSV)
        group.add_argument("--out", help="Report path, defaults to POLAR_SVD_REPORTS_DIR/<suite>.<format>")
        group.add_argument("--save", action="store_true", help="Also store the records as BenchRun rows")

    # Option handling

    def matrix_sources(self, options) -> List[MatrixSource]:
        given = [name for name in ("input", "synthetic", "corpus") if options.get(name)]
        if len(given) > 1:
            raise UsageError(f"--{given[0]} and --{given[1]} are mutually exclusive.")
        if not given:
            raise UsageError("One of --input, --synthetic or --corpus is required.")
        distribution = options["distribution"]
        if options.get("input"):
            return [MatrixSource.from_file(options["input"])]
        if options.get("synthetic"):
            return [MatrixSource.parse_synthetic(options["synthetic"], distribution)]
        names = list(CORPUS) if options["corpus"] == "all" else [name.strip() for name in options["corpus"].split(",")]
        return [MatrixSource.from_corpus(name, distribution=distribution) for name in names]

    def svd_options(self, options) -> SvdOptions:
        if (options.get("alpha") is None) != (options.get("beta") is None):
            raise UsageError("--alpha and --beta must be given together.")
        return SvdOptions(
            r_policy=parse_r_policy(options["r"]),
            r_max=options.get("r_max"),
            tol=options.get("tol"),
            alpha=options.get("alpha"),
            beta=options.get("beta"),
            workers=options.get("workers"),
            nb=options.get("nb"),
            structured=False if options.get("dense_qr") else None,
        )

    # Reports

    def report_path(self, options) -> Path:
        if options.get("out"):
            return Path(options["out"])
        reports_dir = Path(getattr(settings, "POLAR_SVD_REPORTS_DIR", "reports"))
        return reports_dir / f"{self.suite}.{options['format']}"

    def finish(self, report: BenchReport, options) -> None:
        written = report.write(self.report_path(options), options["format"])
        if options.get("save"):
            from ..tasks import save_records

            save_records(report.records)
        for path in written:
            self.stdout.write(self.style.SUCCESS(f"Report written to {path}"))

    def collect(self, report: BenchReport, options, run: Callable[[], object]) -> None:
        """
        Add the records of one run; on non-convergence the partial report
        is still written before the error propagates.
        """
        try:
            produced = run()
        except NonConvergenceError as exc:
            record = getattr(exc, "record", None)
            if record is not None:
                report.add(record)
            self.finish(report, options)
            raise
        report.extend(produced if isinstance(produced, list) else [produced])

    def print_record(self, record) -> None:
        fields = [f"{record.matrix_id}", f"{record.method}", f"r={record.r}", f"passes={record.passes}"]
        if record.res is not None:
            fields.append(f"res={record.res:.2e}")
        if record.orth_l is not None:
            fields.append(f"orth_l={record.orth_l:.2e}")
        if record.orth_r is not None:
            fields.append(f"orth_r={record.orth_r:.2e}")
        self.stdout.write("  ".join(fields))
