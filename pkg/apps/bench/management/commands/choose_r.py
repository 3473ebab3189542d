"""
Predicted Zolo-PD pass counts and the chosen order.
"""

from django.conf import settings

from apps.bench.management.base import PolarSVDCommand, parse_r_policy
from apps.bench.reports import BenchReport
from apps.bench.runners import ITERATIONS, predicted_grid
from apps.core.exceptions import UsageError
from apps.elliptic.zolotarev import DEFAULT_R_MAX, KAPPA_GRID, check_order, choose_r, predict_iterations


class Command(PolarSVDCommand):
    help = "Print predicted pass counts for a condition number and the chosen r"
    suite = "choose-r"

    def add_arguments(self, parser):
        parser.add_argument("--kappa", type=float, default=None)
        parser.add_argument("--r-max", type=int, default=None)
        parser.add_argument("--r", default="table", help="r policy: table | fixed:K")
        parser.add_argument("--full-table", action="store_true", help="Print the whole r x kappa table")
        parser.add_argument("--out", help="Also write the table as a report")
        parser.add_argument("--format", choices=("csv", "json"), default="csv")

    def handle(self, *args, **options):
        r_max = check_order(options["r_max"] or getattr(settings, "POLAR_SVD_R_MAX", DEFAULT_R_MAX))
        if options["full_table"]:
            self.print_table(r_max)
            if options["out"]:
                report = BenchReport(ITERATIONS)
                report.extend(predicted_grid(KAPPA_GRID, r_max))
                report.write(options["out"], options["format"])
            return
        if options["kappa"] is None:
            raise UsageError("--kappa is required unless --full-table is given.")

        kappa = options["kappa"]
        row = [f"r={r}:{predict_iterations(kappa, r)}" for r in range(1, r_max + 1)]
        choice = choose_r(kappa, r_max, parse_r_policy(options["r"]))
        self.stdout.write(f"kappa={kappa:g}  " + "  ".join(row))
        self.stdout.write(self.style.SUCCESS(f"(r={choice.r}, k={choice.predicted_iters})"))

    def print_table(self, r_max: int) -> None:
        header = "r\\kappa " + " ".join(f"{kappa:>7g}" for kappa in KAPPA_GRID)
        self.stdout.write(header)
        for r in range(1, r_max + 1):
            counts = " ".join(f"{predict_iterations(kappa, r):>7d}" for kappa in KAPPA_GRID)
            self.stdout.write(f"{r:<7d} {counts}")
