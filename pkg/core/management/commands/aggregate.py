"""
Django management command to aggregate a series to a coarser time step
(e.g. half-hourly to hourly)
"""

import logging

import numpy as np
import pandas as pd
from django.core.management.base import BaseCommand
from core.cli_options import io_error, parse_step, validation_error
from core.series_io import SeriesFileError, atomic_write_text, frame_to_csv_text, read_series_csv

logger = logging.getLogger(__name__)

SUM = 'sum'
MEAN = 'mean'


def aggregate_values(values: np.ndarray, ratio: int, mode: str) -> np.ndarray:
    """Reduce consecutive groups of ``ratio`` values; a trailing partial group is dropped"""
    groups = values.shape[0] // ratio
    blocks = values[:groups * ratio].reshape(groups, ratio)
    return blocks.sum(axis=1) if mode == SUM else blocks.mean(axis=1)


class Command(BaseCommand):
    help = 'Aggregate consecutive observations of a series to a coarser step'

    def add_arguments(self, parser):
        parser.add_argument('input', help='Series file (header row; optional time column)')
        parser.add_argument('--from-step', required=True, help="Input step: minutes, or e.g. '30min'")
        parser.add_argument('--to-step', required=True, help="Output step: minutes, or e.g. '1h'")
        parser.add_argument(
            '--mode',
            choices=(SUM, MEAN),
            default=SUM,
            help='sum for energy-like quantities (default), mean for levels',
        )
        parser.add_argument('--column', default=None, help='Value column when the file has several')
        parser.add_argument('--out', default=None, help='Output CSV path (default: standard output)')

    def handle(self, *args, **options):
        from_step = parse_step(options['from_step'], '--from-step')
        to_step = parse_step(options['to_step'], '--to-step')
        if to_step < from_step or to_step % from_step != pd.Timedelta(0):
            raise validation_error(
                f"--to-step {to_step} is not a whole multiple of --from-step {from_step}"
            )
        ratio = int(to_step / from_step)

        try:
            series_file = read_series_csv(options['input'], column=options['column'], min_rows=1)
        except (OSError, SeriesFileError) as e:
            raise io_error(f"Cannot read {options['input']}: {e}")

        n = len(series_file)
        if series_file.has_timestamps:
            steps = series_file.time.diff().dropna()
            if len(steps) and (steps != from_step).any():
                raise validation_error(
                    f"--from-step {from_step} does not match the file's spacing (median {steps.median()})"
                )
            first = series_file.time.iloc[0]
            if first != first.normalize():
                self.stderr.write(self.style.WARNING(
                    f"Series starts at {first}, not at midnight: the first day is partial"
                ))
                logger.warning(f"Partial leading day in {series_file.path} (starts {first})")

        dropped = n % ratio
        if dropped:
            self.stderr.write(self.style.WARNING(
                f"Dropping {dropped} trailing observations that do not fill a {to_step} step"
            ))
        if n < ratio:
            raise validation_error(f"series of {n} rows is shorter than one {to_step} step")

        values = aggregate_values(series_file.values, ratio, options['mode'])
        if series_file.time_column is not None:
            time = series_file.time.iloc[:values.shape[0] * ratio:ratio].reset_index(drop=True)
        else:
            time = pd.Series(np.arange(1, values.shape[0] + 1))
        frame = pd.DataFrame({
            series_file.time_column or 't': time,
            series_file.value_column: values,
        })

        text = frame_to_csv_text(frame)
        if options['out']:
            try:
                atomic_write_text(options['out'], text)
            except OSError as e:
                raise io_error(f"Cannot write {options['out']}: {e}")
            self.stderr.write(self.style.SUCCESS(
                f"Aggregated {n} rows to {len(frame)} ({options['mode']}, ratio {ratio}) into {options['out']}"
            ))
        else:
            self.stdout.write(text, ending='')
