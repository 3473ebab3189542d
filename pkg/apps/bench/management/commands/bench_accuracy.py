"""
Backward error and orthogonality of both SVD paths over a kappa x n grid.
"""

from apps.bench.management.base import PolarSVDCommand, parse_floats, parse_ints
from apps.bench.reports import BenchReport
from apps.bench.runners import ACCURACY, ACCURACY_KAPPAS, ACCURACY_SIZES, accuracy_suite
from apps.core.exceptions import UsageError
from apps.polar.types import METHODS


class Command(PolarSVDCommand):
    help = "Run polar_svd with both methods over the accuracy grid"
    suite = ACCURACY

    def add_arguments(self, parser):
        parser.add_argument("--kappas", default=",".join(repr(k) for k in ACCURACY_KAPPAS))
        parser.add_argument("--sizes", default=",".join(str(n) for n in ACCURACY_SIZES))
        parser.add_argument("--methods", default=",".join(METHODS))
        parser.add_argument("--seed", type=int, default=1)
        parser.add_argument("--tol", type=float, default=None)
        parser.add_argument("--nb", type=int, default=None)
        parser.add_argument("--workers", type=int, default=None)
        parser.add_argument("--r", default="table", help="r policy: table | fixed:K")
        parser.add_argument("--r-max", type=int, default=None)
        parser.add_argument("--dense-qr", action="store_true")
        self.add_report_arguments(parser)

    def handle(self, *args, **options):
        methods = [method.strip() for method in options["methods"].split(",")]
        unknown = sorted(set(methods) - set(METHODS))
        if unknown:
            raise UsageError(f"Unknown methods {unknown}, expected {METHODS}.")
        report = BenchReport(self.suite)
        svd_options = self.svd_options({**options, "alpha": None, "beta": None})
        self.collect(
            report,
            options,
            lambda: accuracy_suite(
                kappas=parse_floats(options["kappas"]),
                sizes=parse_ints(options["sizes"]),
                methods=methods,
                seed=options["seed"],
                opts=svd_options,
            ),
        )
        for record in report.records:
            self.print_record(record)
        self.finish(report, options)
