"""
Polar decomposition of one or more matrices.
"""

from apps.bench.management.base import PolarSVDCommand
from apps.bench.reports import BenchReport
from apps.bench.runners import PD, run_pd


class Command(PolarSVDCommand):
    help = "Compute A = Q_p H by QDWH or Zolo-PD and write a report"
    suite = PD

    def add_arguments(self, parser):
        self.add_matrix_arguments(parser)
        self.add_solver_arguments(parser)
        self.add_report_arguments(parser)

    def handle(self, *args, **options):
        sources = self.matrix_sources(options)
        svd_options = self.svd_options(options)
        report = BenchReport(self.suite)
        for source in sources:
            a = source.load()
            self.collect(
                report,
                options,
                lambda: run_pd(a, source.matrix_id, options["method"], svd_options)[0],
            )
            self.print_record(report.records[-1])
        self.finish(report, options)
