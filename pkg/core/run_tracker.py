import logging
from typing import Dict, Optional, Sequence

from django.conf import settings
from django.db import DatabaseError
from django.utils import timezone

from .models import BenchmarkRun, DecompositionRun

logger = logging.getLogger(__name__)


class RunTracker:
    """
    Best-effort persistence of decomposition and benchmark runs.

    Tracking never fails the run it describes: when tracking is disabled or
    the database is unavailable the record methods return None.
    """

    def __init__(self, enabled: Optional[bool] = None):
        if enabled is None:
            enabled = getattr(settings, 'MSTLKIT', {}).get('TRACK_RUNS', True)
        self.enabled = bool(enabled)

    def record_decomposition(self, source: str, label: str, series_length: int, periods: Sequence[int],
                             params: Dict, result: Dict, duration_seconds: float,
                             retained_periods: Sequence[int] = (), boxcox_lambda: Optional[float] = None
                             ) -> Optional[DecompositionRun]:
        """
        Args:
            result: the {'success', 'message'} outcome of the decomposition
        """
        if not self.enabled:
            return None
        try:
            return DecompositionRun.objects.create(
                source=source,
                label=str(label)[:500],
                series_length=series_length,
                periods=[int(p) for p in periods],
                retained_periods=[int(p) for p in retained_periods],
                params=params,
                boxcox_lambda=boxcox_lambda,
                success=result['success'],
                message=result.get('message', ''),
                completed_at=timezone.now(),
                duration_seconds=duration_seconds,
            )
        except DatabaseError as e:
            logger.warning(f"Run tracking unavailable, decomposition of '{label}' not recorded: {e}")
            return None

    def record_benchmark(self, corpus_path: str, report_dict: Dict, threads: int) -> Optional[BenchmarkRun]:
        if not self.enabled:
            return None
        try:
            return BenchmarkRun.objects.create(
                corpus_path=str(corpus_path)[:500],
                series_count=report_dict['series_count'],
                failed_count=report_dict['failed_count'],
                threads=threads,
                aggregate=report_dict['aggregate']['pooled'],
                report=report_dict,
                total_seconds=report_dict['total_seconds'],
            )
        except DatabaseError as e:
            logger.warning(f"Run tracking unavailable, benchmark of '{corpus_path}' not recorded: {e}")
            return None

    def recent_decompositions(self, limit: int = 20):
        return DecompositionRun.objects.all()[:limit]
