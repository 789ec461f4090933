"""
Django management command to decompose a series file into trend, seasonal
components and remainder
"""

from django.core.management.base import BaseCommand
from core.cli_options import (
    default_iterate, io_error, parse_lambda, parse_periods, parse_positive, parse_windows, validation_error,
)
from core.decomposition_manager import DecompositionManager
from core.mstl import MstlParams, MultiSeasonalSeries, seasonal_adjust
from core.preprocess import inv_boxcox
from core.series_io import SeriesFileError, atomic_write_text, decomposition_frame, frame_to_csv_text, read_series_csv


def header_lines(decomposition):
    """Comment lines recording what the output was decomposed with"""
    windows = ','.join(str(w) for w in decomposition.s_windows) or 'none'
    periods = ','.join(str(p) for p in decomposition.retained_periods) or 'none'
    lam = 'none' if decomposition.lambda_applied is None else repr(decomposition.lambda_applied)
    return [
        f"periods: {periods}",
        f"s_windows: {windows}",
        f"iterate: {decomposition.iterate}",
        f"lambda: {lam}",
    ]


class Command(BaseCommand):
    help = 'Decompose a CSV series into trend, one seasonal component per period, and remainder'

    def add_arguments(self, parser):
        parser.add_argument('input', help='Series file (header row; optional time column)')
        parser.add_argument(
            '--periods',
            default='',
            help='Comma-separated seasonal periods, e.g. 24,168 (default: none)',
        )
        parser.add_argument(
            '--iterate',
            type=int,
            default=None,
            help='Refinement passes over the seasonal periods (default: 2)',
        )
        parser.add_argument(
            '--lambda',
            dest='boxcox_lambda',
            type=float,
            default=None,
            help='Box-Cox lambda in [0, 1]; 0 is the log transform',
        )
        parser.add_argument(
            '--swin',
            default=None,
            help="Comma-separated seasonal windows (odd, or 'periodic'); missing entries use the defaults",
        )
        parser.add_argument(
            '--robust',
            action='store_true',
            help='Use robust STL fits (1 inner, 15 outer iterations)',
        )
        parser.add_argument(
            '--column',
            default=None,
            help='Value column when the file has several',
        )
        parser.add_argument(
            '--out',
            default=None,
            help='Output CSV path (default: standard output)',
        )
        parser.add_argument(
            '--original-scale',
            action='store_true',
            help='Also write the seasonally adjusted series back-transformed to the original scale',
        )

    def handle(self, *args, **options):
        periods = parse_periods(options['periods'])
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
            series_file = read_series_csv(options['input'], column=options['column'])
        except (OSError, SeriesFileError) as e:
            raise io_error(f"Cannot read {options['input']}: {e}")

        try:
            series = MultiSeasonalSeries(series_file.values, periods, origin=str(series_file.path))
        except ValueError as e:
            raise validation_error(str(e))

        result = DecompositionManager(source='cli').decompose(series, params, label=str(series_file.path))
        if not result['success']:
            raise validation_error(result['message'])
        decomposition = result['decomposition']

        frame = decomposition_frame(decomposition, time=series_file.time)
        if options['original_scale'] and decomposition.lambda_applied is not None:
            try:
                frame['adjusted_original'] = inv_boxcox(seasonal_adjust(decomposition), decomposition.lambda_applied)
            except ValueError as e:
                raise validation_error(f"--original-scale: {e}")
        elif options['original_scale']:
            self.stderr.write(self.style.WARNING('--original-scale has no effect without --lambda'))

        text = frame_to_csv_text(frame, header_lines(decomposition))
        if options['out']:
            try:
                atomic_write_text(options['out'], text)
            except OSError as e:
                raise io_error(f"Cannot write {options['out']}: {e}")
            self.stderr.write(self.style.SUCCESS(
                f"Wrote {len(frame)} rows with periods {decomposition.retained_periods} to {options['out']}"
            ))
        else:
            self.stdout.write(text, ending='')
