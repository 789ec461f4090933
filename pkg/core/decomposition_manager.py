import logging
import time
from typing import Dict, Optional

from .mstl import MstlParams, MultiSeasonalSeries, mstl_decompose
from .run_tracker import RunTracker

logger = logging.getLogger(__name__)


class DecompositionManager:
    """Runs decompositions for the commands and the API and records each one"""

    def __init__(self, source: str = 'cli', tracker: Optional[RunTracker] = None):
        self.source = source
        self.tracker = tracker or RunTracker()

    def decompose(self, series: MultiSeasonalSeries, params: MstlParams, label: str = '') -> Dict:
        """
        Decompose ``series`` and record the run.

        Returns:
            Dict with success, message and, on success, the decomposition
        """
        logger.info(f"Decomposing '{label or series.origin}' (n={len(series)}, periods={series.periods})")
        started = time.perf_counter()
        decomposition = None
        try:
            decomposition = mstl_decompose(series, params)
            result = {
                'success': True,
                'message': f"Decomposed {len(series)} observations with periods {decomposition.retained_periods}",
                'decomposition': decomposition,
            }
        except ValueError as e:
            logger.warning(f"Decomposition of '{label}' rejected: {e}")
            result = {'success': False, 'message': str(e)}
        duration = time.perf_counter() - started

        self.tracker.record_decomposition(
            source=self.source,
            label=label or series.origin,
            series_length=len(series),
            periods=series.periods,
            params=params.to_dict(),
            result=result,
            duration_seconds=duration,
            retained_periods=decomposition.retained_periods if decomposition else (),
            boxcox_lambda=params.boxcox_lambda,
        )
        result['duration_seconds'] = duration
        return result
