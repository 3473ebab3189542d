"""
Structured against dense QR of [X; sqrt(c) I].
"""

from apps.bench.management.base import PolarSVDCommand
from apps.bench.reports import BenchReport
from apps.bench.runners import STRUCTURED_QR, STRUCTURED_QR_SHAPES, structured_qr_comparison
from apps.core.exceptions import UsageError
from apps.linalg.qr import DEFAULT_BLOCK_SIZE


def parse_shapes(text: str):
    shapes = []
    for item in text.split(","):
        rows, _, cols = item.strip().lower().partition("x")
        if not rows.isdigit() or not cols.isdigit():
            raise UsageError(f"Shapes look like 512x512, got {item!r}.")
        shapes.append((int(rows), int(cols)))
    return shapes


class Command(PolarSVDCommand):
    help = "Compare multiply counts and results of the structured and dense QR"
    suite = STRUCTURED_QR

    def add_arguments(self, parser):
        parser.add_argument("--shapes", default=",".join(f"{m}x{n}" for m, n in STRUCTURED_QR_SHAPES))
        parser.add_argument("--nb", type=int, default=DEFAULT_BLOCK_SIZE)
        parser.add_argument("--c", type=float, default=1.0)
        parser.add_argument("--seed", type=int, default=0)
        self.add_report_arguments(parser)

    def handle(self, *args, **options):
        report = BenchReport(self.suite)
        report.extend(
            structured_qr_comparison(parse_shapes(options["shapes"]), options["nb"], options["c"], options["seed"])
        )
        for record in report.records:
            saving = 1.0 - record.flops_mults / record.flops_reference
            self.stdout.write(
                f"{record.m}x{record.n} nb={record.nb}  mults {record.flops_mults} vs {record.flops_reference} "
                f"({saving:.0%} fewer)  max diff {record.equivalence_error:.2e}"
            )
        self.finish(report, options)
