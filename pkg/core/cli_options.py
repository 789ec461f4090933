"""
Flag parsing shared by the management commands.

Parsers raise ``CommandError`` with returncode 2 so every command reports
validation problems the same way.
"""

import logging
from typing import List, Optional

import pandas as pd
from django.conf import settings
from django.core.management.base import CommandError

from .stl import PERIODIC

logger = logging.getLogger(__name__)

VALIDATION_ERROR = 2
IO_ERROR = 1


def validation_error(message: str) -> CommandError:
    return CommandError(message, returncode=VALIDATION_ERROR)


def io_error(message: str) -> CommandError:
    return CommandError(message, returncode=IO_ERROR)


def parse_int_list(text: Optional[str], flag: str) -> List[int]:
    if text is None or not text.strip():
        return []
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise validation_error(f"{flag}: expected comma-separated integers, got '{text}'")
    if any(not v.is_integer() for v in values):
        raise validation_error(f"{flag}: non-integer value in '{text}'")
    return [int(v) for v in values]


def parse_periods(text: Optional[str]) -> List[int]:
    periods = parse_int_list(text, '--periods')
    if any(p < 1 for p in periods):
        raise validation_error(f"--periods: periods must be positive, got '{text}'")
    return periods


def parse_windows(text: Optional[str], flag: str = '--swin') -> Optional[list]:
    """Comma-separated odd windows; 'periodic' allowed per entry"""
    if text is None or not text.strip():
        return None
    windows = []
    for part in text.split(','):
        part = part.strip()
        if part.lower() == PERIODIC:
            windows.append(PERIODIC)
            continue
        try:
            w = int(part)
        except ValueError:
            raise validation_error(f"{flag}: '{part}' is neither an integer nor '{PERIODIC}'")
        if w < 1 or w % 2 == 0:
            raise validation_error(f"{flag}: windows must be positive odd integers, got {w}")
        windows.append(w)
    return windows


def parse_lambda(value: Optional[float]) -> Optional[float]:
    if value is None:
        return None
    if not (0.0 <= value <= 1.0):
        raise validation_error(f"--lambda: must lie in [0, 1], got {value}")
    return value


def parse_positive(value: int, flag: str) -> int:
    if value is None or value < 1:
        raise validation_error(f"{flag}: must be a positive integer, got {value}")
    return value


def parse_seed(value: int) -> int:
    if value < 0 or value >= 2 ** 64:
        raise validation_error(f"--seed: must lie in [0, 2**64), got {value}")
    return value


def parse_step(text: str, flag: str) -> pd.Timedelta:
    """Plain integers are minutes, anything else a pandas timedelta string ('30min', '1h')"""
    try:
        step = pd.Timedelta(minutes=int(text)) if text.strip().lstrip('-').isdigit() else pd.Timedelta(text)
    except ValueError:
        raise validation_error(f"{flag}: cannot parse step '{text}'")
    if step <= pd.Timedelta(0):
        raise validation_error(f"{flag}: step must be positive, got '{text}'")
    return step


def default_threads() -> int:
    return int(getattr(settings, 'MSTLKIT', {}).get('THREADS', 1))


def default_iterate() -> int:
    return int(getattr(settings, 'MSTLKIT', {}).get('DEFAULT_ITERATE', 2))
