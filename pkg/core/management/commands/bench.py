"""
Django management command to decompose and score every series of a corpus
"""

from django.core.management.base import BaseCommand
from core.cli_options import (
    default_iterate, default_threads, io_error, parse_lambda, parse_positive, parse_windows, validation_error,
)
from core.evaluate import POOLED, MEAN, BenchmarkRunner
from core.mstl import MstlParams
from core.run_tracker import RunTracker
from core.series_io import atomic_write_text, manifest_path


def component_label(name):
    if name.startswith('seasonal_'):
        return f"Seasonal {name.split('_', 1)[1]}"
    return name.capitalize()


class Command(BaseCommand):
    help = 'Decompose and score every series of a corpus manifest'

    def add_arguments(self, parser):
        parser.add_argument('--corpus', required=True, help='Corpus directory or manifest.jsonl')
        parser.add_argument('--iterate', type=int, default=None, help='MSTL refinement passes (default: 2)')
        parser.add_argument('--swin', default=None, help="Comma-separated seasonal windows (odd, or 'periodic')")
        parser.add_argument('--lambda', dest='boxcox_lambda', type=float, default=None,
                            help='Box-Cox lambda applied before decomposing each series')
        parser.add_argument('--robust', action='store_true', help='Use robust STL fits')
        parser.add_argument(
            '--threads',
            type=int,
            default=None,
            help='Worker threads (default: MSTLKIT_THREADS, else 1)',
        )
        parser.add_argument('--report', default=None, help='Write the JSON report here')
        parser.add_argument('--csv', default=None, help='Write the report flattened to CSV here')

    def handle(self, *args, **options):
        threads = parse_positive(
            options['threads'] if options['threads'] is not None else default_threads(), '--threads'
        )
        iterate = parse_positive(
            options['iterate'] if options['iterate'] is not None else default_iterate(), '--iterate'
        )
        try:
            params = MstlParams(
                iterate=iterate,
                boxcox_lambda=parse_lambda(options['boxcox_lambda']),
                s_windows=parse_windows(options['swin']),
                robust=options['robust'],
            )
        except ValueError as e:
            raise validation_error(str(e))

        try:
            report = BenchmarkRunner(params, threads=threads).run(options['corpus'])
        except OSError as e:
            raise io_error(f"Cannot read corpus {options['corpus']}: {e}")

        report_dict = report.to_dict()
        try:
            if options['report']:
                atomic_write_text(options['report'], report.to_json() + '\n')
            if options['csv']:
                report.write_csv(options['csv'])
        except OSError as e:
            raise io_error(f"Cannot write report: {e}")

        RunTracker().record_benchmark(manifest_path(options['corpus']), report_dict, threads)
        self.output_table(report)

        if not report.scores:
            raise io_error(f"No series scored ({len(report.errors)} failed)")

    def output_table(self, report):
        """Aggregate RMSE per component, pooled and mean-of-series"""
        pooled = report.aggregate(POOLED)
        mean = report.aggregate(MEAN)
        self.stdout.write(self.style.SUCCESS(
            f"\n=== Benchmark: {len(report.scores)} scored, {len(report.errors)} failed ==="
        ))
        self.stdout.write(f"{'Component':<16}{'Pooled RMSE':>14}{'Mean RMSE':>14}")
        for name in report.component_names():
            self.stdout.write(f"{component_label(name):<16}{pooled[name]:>14.4f}{mean[name]:>14.4f}")
        for error in report.errors:
            self.stdout.write(self.style.WARNING(f"  failed {error['series_id']}: {error['message']}"))
        self.stdout.write(
            f"Total wall-clock: {report.total_seconds:.3f}s "
            f"(slowest series {report.max_series_seconds:.3f}s, {report.config['threads']} threads)"
        )
