"""
Measured against predicted pass counts on synthetic matrices.
"""

from apps.bench.management.base import PolarSVDCommand, parse_floats, parse_ints
from apps.bench.reports import BenchReport
from apps.bench.runners import ITERATION_KAPPAS, ITERATION_SIZE, ITERATIONS, iteration_grid, predicted_grid
from apps.elliptic.zolotarev import KAPPA_GRID, MAX_ORDER


class Command(PolarSVDCommand):
    help = "Run QDWH and Zolo-PD over a kappa grid and report pass counts"
    suite = ITERATIONS

    def add_arguments(self, parser):
        parser.add_argument("--kappas", default=",".join(repr(k) for k in ITERATION_KAPPAS))
        parser.add_argument("--orders", default="2,3,4", help="Zolotarev orders to measure")
        parser.add_argument("--n", type=int, default=ITERATION_SIZE)
        parser.add_argument("--seed", type=int, default=1)
        parser.add_argument("--estimated-bounds", action="store_true", help="Use estimate_bounds instead of exact bounds")
        parser.add_argument("--no-qdwh", action="store_true")
        parser.add_argument("--predicted-only", action="store_true", help="Only the predictor over the full kappa grid")
        parser.add_argument("--tol", type=float, default=None)
        parser.add_argument("--nb", type=int, default=None)
        parser.add_argument("--workers", type=int, default=None)
        parser.add_argument("--dense-qr", action="store_true")
        self.add_report_arguments(parser)

    def handle(self, *args, **options):
        report = BenchReport(self.suite)
        if options["predicted_only"]:
            report.extend(predicted_grid(KAPPA_GRID, MAX_ORDER))
        else:
            svd_options = self.svd_options({**options, "r": "table", "alpha": None, "beta": None})
            self.collect(
                report,
                options,
                lambda: iteration_grid(
                    kappas=parse_floats(options["kappas"]),
                    orders=parse_ints(options["orders"]),
                    n=options["n"],
                    seed=options["seed"],
                    exact_bounds=not options["estimated_bounds"],
                    include_qdwh=not options["no_qdwh"],
                    opts=svd_options,
                ),
            )
            for record in report.records:
                self.stdout.write(
                    f"kappa={record.kappa:g}  {record.method}  r={record.r}  "
                    f"passes={record.passes}  predicted={record.predicted_passes}"
                )
        self.finish(report, options)
