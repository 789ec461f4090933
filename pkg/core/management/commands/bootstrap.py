"""
Django management command to build a moving-block-bootstrap corpus from a
real series, using its decomposition as ground truth
"""

import argparse
import logging

import numpy as np
import pandas as pd
from django.core.management.base import BaseCommand
from core.bootstrap import MbbConfig, default_block_length, mbb_resample, perturb_series
from core.cli_options import (
    default_iterate, io_error, parse_lambda, parse_periods, parse_positive, parse_seed, parse_windows,
    validation_error,
)
from core.decomposition_manager import DecompositionManager
from core.mstl import MstlParams, MultiSeasonalSeries
from core.series_io import CorpusEntry, SeriesFileError, read_series_csv, write_frame_csv, write_manifest

logger = logging.getLogger(__name__)


def identity_resample(remainder, cfg, rng):
    return np.array(remainder, dtype=np.float64)


class Command(BaseCommand):
    help = 'Decompose a series and write bootstrap replicates with their true components'

    def add_arguments(self, parser):
        parser.add_argument('input', help='Series file (header row; optional time column)')
        parser.add_argument('--periods', default='', help='Comma-separated seasonal periods, e.g. 24,168')
        parser.add_argument('--replicates', type=int, default=100, help='Number of replicates (default: 100)')
        parser.add_argument(
            '--block-length',
            type=int,
            default=None,
            help='Bootstrap block length (default: twice the longest period, at most half the series)',
        )
        parser.add_argument('--seed', type=int, default=0, help='Seed of the block draws (default: 0)')
        parser.add_argument('--outdir', required=True, help='Corpus directory')
        parser.add_argument('--column', default=None, help='Value column when the file has several')
        parser.add_argument('--iterate', type=int, default=None, help='MSTL refinement passes (default: 2)')
        parser.add_argument('--lambda', dest='boxcox_lambda', type=float, default=None,
                            help='Box-Cox lambda; replicates are written on the transformed scale')
        parser.add_argument('--swin', default=None, help='Comma-separated seasonal windows')
        parser.add_argument('--robust', action='store_true', help='Use robust STL fits')
        parser.add_argument('--identity-resample', action='store_true', help=argparse.SUPPRESS)

    def handle(self, *args, **options):
        periods = parse_periods(options['periods'])
        replicates = parse_positive(options['replicates'], '--replicates')
        seed = parse_seed(options['seed'])
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
        n = len(decomposition)

        block_length = options['block_length']
        if block_length is None:
            block_length = default_block_length(decomposition.retained_periods, n)
        if block_length < 1 or block_length > n:
            raise validation_error(f"--block-length: must lie in [1, {n}], got {block_length}")
        cfg = MbbConfig(block_length=block_length, replicates=replicates, seed=seed)

        resample = identity_resample if options['identity_resample'] else mbb_resample
        replicas = perturb_series(decomposition.data, decomposition, cfg, resample=resample)

        structure = decomposition.trend + decomposition.seasonal_sum
        seasonal_columns = {p: f"seasonal_{p}" for p in decomposition.retained_periods}
        entries = []
        try:
            for r, replica in enumerate(replicas):
                series_id = f"replicate_{r:04d}"
                columns = {'t': series_file.time, 'composite': replica, 'trend': decomposition.trend}
                for p, seasonal in decomposition.seasonals.items():
                    columns[seasonal_columns[p]] = seasonal
                columns['remainder'] = replica - structure
                write_frame_csv(pd.DataFrame(columns), f"{options['outdir']}/{series_id}.csv")
                entries.append(CorpusEntry(
                    series_id=series_id,
                    path=f"{series_id}.csv",
                    periods=list(decomposition.retained_periods),
                    seasonal_columns=seasonal_columns,
                    config={
                        'source': str(series_file.path),
                        'replicate': r,
                        'block_length': block_length,
                        'seed': seed,
                        'lambda': decomposition.lambda_applied,
                        's_windows': decomposition.s_windows,
                        'iterate': decomposition.iterate,
                    },
                ))
            write_manifest(options['outdir'], entries)
        except OSError as e:
            raise io_error(f"Cannot write corpus to {options['outdir']}: {e}")

        logger.info(f"Bootstrap corpus of {replicates} replicates written to {options['outdir']}")
        self.stdout.write(self.style.SUCCESS(
            f"Wrote {replicates} replicates of {n} points (block length {block_length}) to {options['outdir']}"
        ))
