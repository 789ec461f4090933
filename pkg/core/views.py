from django.http import JsonResponse
from rest_framework import status
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import IsAuthenticated
from rest_framework.response import Response
from .decomposition_manager import DecompositionManager
from .run_tracker import RunTracker
from .mstl import MstlParams, MultiSeasonalSeries
from .simulate import SimulationConfig, simulate_series
import logging

logger = logging.getLogger(__name__)

MAX_RUNS = 100


def health_check(request):
    return JsonResponse({'status': 'healthy'})


def _array(values):
    return [float(v) for v in values]


@api_view(['POST'])
@permission_classes([IsAuthenticated])
def decompose(request):
    """Decompose a posted series; null entries mark missing values"""
    try:
        values = request.data.get('values')
        periods = request.data.get('periods', [])
        if not isinstance(values, list) or not values:
            return Response({
                'success': False,
                'message': 'values must be a non-empty list'
            }, status=status.HTTP_400_BAD_REQUEST)
        if not isinstance(periods, list):
            return Response({
                'success': False,
                'message': 'periods must be a list of integers'
            }, status=status.HTTP_400_BAD_REQUEST)

        try:
            series = MultiSeasonalSeries(values, periods, origin=str(request.data.get('label', 'api')))
            params = MstlParams(
                iterate=request.data.get('iterate', 2),
                boxcox_lambda=request.data.get('lambda'),
                s_windows=request.data.get('s_windows'),
                robust=bool(request.data.get('robust', False)),
            )
        except (TypeError, ValueError) as e:
            return Response({'success': False, 'message': str(e)}, status=status.HTTP_400_BAD_REQUEST)

        result = DecompositionManager(source='api').decompose(series, params, label=series.origin)
        if not result['success']:
            return Response({'success': False, 'message': result['message']}, status=status.HTTP_400_BAD_REQUEST)

        d = result['decomposition']
        return Response({
            'success': True,
            'message': result['message'],
            'decomposition': {
                'data': _array(d.data),
                'trend': _array(d.trend),
                'seasonals': {str(p): _array(s) for p, s in d.seasonals.items()},
                'remainder': _array(d.remainder),
                'retained_periods': d.retained_periods,
                's_windows': d.s_windows,
                'lambda_applied': d.lambda_applied,
            }
        })

    except Exception as e:
        logger.error(f"Decomposition request failed: {e}")
        return Response({
            'success': False,
            'message': f'Decomposition failed: {str(e)}'
        }, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


@api_view(['POST'])
@permission_classes([IsAuthenticated])
def simulate(request):
    """Generate one synthetic series with its true components"""
    try:
        try:
            fields = {k: request.data[k] for k in SimulationConfig.__dataclass_fields__ if k in request.data}
            cfg = SimulationConfig(**fields)
        except (TypeError, ValueError) as e:
            return Response({'success': False, 'message': str(e)}, status=status.HTTP_400_BAD_REQUEST)

        truth = simulate_series(cfg)
        return Response({
            'success': True,
            'config': cfg.to_dict(),
            'periods': list(cfg.periods),
            'composite': _array(truth.composite),
            'trend': _array(truth.trend),
            'seasonal_short': _array(truth.seasonal_short),
            'seasonal_long': _array(truth.seasonal_long),
            'remainder': _array(truth.remainder),
        })

    except Exception as e:
        logger.error(f"Simulation request failed: {e}")
        return Response({
            'success': False,
            'message': f'Simulation failed: {str(e)}'
        }, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


@api_view(['GET'])
@permission_classes([IsAuthenticated])
def run_list(request):
    """Most recent decomposition runs"""
    try:
        limit = min(int(request.GET.get('limit', 20)), MAX_RUNS)
    except ValueError:
        return Response({'success': False, 'message': 'limit must be an integer'},
                        status=status.HTTP_400_BAD_REQUEST)
    runs = RunTracker().recent_decompositions(max(limit, 1))
    return Response({
        'success': True,
        'runs': [run.get_summary() for run in runs],
        'count': len(runs)
    })
