"""
CSV series files, corpus directories and their JSON-lines manifests.

Every file is written to a temporary sibling first and moved into place, so
an interrupted run never leaves a half-written CSV or manifest behind.
"""

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.jsonl'
FLOAT_FORMAT = '%.17g'
COMMENT = '#'

# header names recognised as the time column of a series file
TIME_COLUMNS = ('t', 'time', 'timestamp', 'date', 'datetime', 'index')

PathLike = Union[str, Path]


class SeriesFileError(ValueError):
    """A series file or manifest is malformed"""


def atomic_write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, 'w', newline='') as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def frame_to_csv_text(frame: pd.DataFrame, header_lines: Sequence[str] = ()) -> str:
    comments = ''.join(f"{COMMENT} {line}\n" for line in header_lines)
    return comments + frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def write_frame_csv(frame: pd.DataFrame, path: PathLike, header_lines: Sequence[str] = ()) -> Path:
    return atomic_write_text(path, frame_to_csv_text(frame, header_lines))


@dataclass
class SeriesFile:
    """A parsed series file: time labels (or 1..n) and one value column (NaN where empty)"""

    path: Path
    time: pd.Series
    values: np.ndarray
    value_column: str
    time_column: Optional[str] = None

    def __len__(self):
        return self.values.shape[0]

    @property
    def has_timestamps(self) -> bool:
        return self.time_column is not None and pd.api.types.is_datetime64_any_dtype(self.time)


def _parse_time(column: pd.Series) -> pd.Series:
    numeric = pd.to_numeric(column, errors='coerce')
    if numeric.notna().all():
        return numeric
    parsed = pd.to_datetime(column, errors='coerce')
    if parsed.isna().any():
        bad = int(np.flatnonzero(parsed.isna().to_numpy())[0])
        raise SeriesFileError(f"unparseable time value '{column.iloc[bad]}' at row {bad + 1}")
    return parsed


def _looks_like_time(column: pd.Series) -> bool:
    """Datetimes, or integers rising by a constant step"""
    numeric = pd.to_numeric(column, errors='coerce')
    if numeric.notna().all():
        values = numeric.to_numpy(dtype=np.float64)
        steps = np.diff(values)
        return bool(np.all(values == np.round(values)) and steps.size > 0
                    and steps[0] > 0 and np.all(steps == steps[0]))
    if numeric.notna().any():
        return False
    return bool(pd.to_datetime(column, errors='coerce').notna().all())


def _sniff_delimiter(path: Path) -> str:
    """Comma unless the header line only splits on semicolons or tabs"""
    with open(path, 'r') as handle:
        for line in handle:
            if line.strip() and not line.startswith(COMMENT):
                if ',' not in line:
                    for delimiter in (';', '\t'):
                        if delimiter in line:
                            return delimiter
                break
    return ','


def read_series_csv(path: PathLike, column: Optional[str] = None, min_rows: int = 3) -> SeriesFile:
    """
    Read a delimiter-separated series file with a header row.

    The first column is the time column when its name is a known time label,
    or when the file has exactly two columns and the first holds datetimes or
    an evenly stepped integer index. The remaining column is the value column
    unless ``column`` selects one of several.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, sep=_sniff_delimiter(path), comment=COMMENT, skip_blank_lines=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise SeriesFileError(f"cannot parse {path}: {e}") from e

    columns = [str(c).strip() for c in frame.columns]
    frame.columns = columns
    if not columns:
        raise SeriesFileError(f"{path} has no columns")

    time_column = None
    if columns[0].lower() in TIME_COLUMNS:
        time_column = columns[0]
    elif len(columns) == 2 and column != columns[0] and _looks_like_time(frame[columns[0]]):
        time_column = columns[0]
    candidates = [c for c in columns if c != time_column]

    if column is not None:
        if column not in columns:
            raise SeriesFileError(f"column '{column}' not found in {path} (columns: {', '.join(columns)})")
        value_column = column
    elif len(candidates) == 1:
        value_column = candidates[0]
    else:
        raise SeriesFileError(
            f"{path} has {len(candidates)} value columns ({', '.join(candidates)}); select one with --column"
        )

    if len(frame) < min_rows:
        raise SeriesFileError(f"{path} has {len(frame)} data rows, at least {min_rows} required")

    raw = frame[value_column]
    values = pd.to_numeric(raw, errors='coerce')
    garbage = values.isna() & raw.notna() & (raw.astype(str).str.strip() != '')
    if garbage.any():
        bad = int(np.flatnonzero(garbage.to_numpy())[0])
        raise SeriesFileError(f"non-numeric value '{raw.iloc[bad]}' in column '{value_column}' at row {bad + 1}")

    if time_column is not None:
        time = _parse_time(frame[time_column])
    else:
        time = pd.Series(np.arange(1, len(frame) + 1), name='t')

    return SeriesFile(
        path=path,
        time=time.reset_index(drop=True),
        values=values.to_numpy(dtype=np.float64),
        value_column=value_column,
        time_column=time_column,
    )


@dataclass
class CorpusEntry:
    """One manifest line: a series file plus how to score against its columns"""

    series_id: str
    path: str
    periods: List[int]
    seasonal_columns: Dict[int, str]
    weights: Dict[str, float] = field(default_factory=dict)
    value_column: str = 'composite'
    config: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'series_id': self.series_id,
            'path': self.path,
            'periods': list(self.periods),
            'seasonal_columns': {str(p): c for p, c in self.seasonal_columns.items()},
            'weights': dict(self.weights),
            'value_column': self.value_column,
            'config': self.config,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'CorpusEntry':
        try:
            return cls(
                series_id=str(data['series_id']),
                path=str(data['path']),
                periods=[int(p) for p in data.get('periods', [])],
                seasonal_columns={int(p): str(c) for p, c in data.get('seasonal_columns', {}).items()},
                weights={str(k): float(v) for k, v in data.get('weights', {}).items()},
                value_column=str(data.get('value_column', 'composite')),
                config=data.get('config', {}),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SeriesFileError(f"malformed manifest entry: {e}") from e


@dataclass
class CorpusSeries:
    """A loaded corpus series: observed values and its scaled truth components"""

    entry: CorpusEntry
    values: np.ndarray
    trend: np.ndarray
    seasonals: Dict[int, np.ndarray]
    remainder: np.ndarray


def manifest_path(location: PathLike) -> Path:
    location = Path(location)
    return location / MANIFEST_NAME if location.is_dir() else location


def write_manifest(outdir: PathLike, entries: Iterable[CorpusEntry]) -> Path:
    lines = [json.dumps(entry.to_dict(), sort_keys=True) for entry in entries]
    text = ''.join(line + '\n' for line in lines)
    return atomic_write_text(Path(outdir) / MANIFEST_NAME, text)


def read_manifest(location: PathLike) -> Tuple[Path, List[Tuple[int, Union[CorpusEntry, SeriesFileError]]]]:
    """
    Parse a manifest (or the manifest inside a corpus directory).

    Malformed lines come back as ``SeriesFileError`` items so that a
    benchmark can record them and keep going.

    Raises:
        OSError: the manifest cannot be read
    """
    path = manifest_path(location)
    items = []
    with open(path, 'r') as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                items.append((number, CorpusEntry.from_dict(json.loads(line))))
            except json.JSONDecodeError as e:
                items.append((number, SeriesFileError(f"line {number}: invalid JSON ({e.msg})")))
            except SeriesFileError as e:
                items.append((number, SeriesFileError(f"line {number}: {e}")))
    return path, items


def load_corpus_series(entry: CorpusEntry, base_dir: PathLike) -> CorpusSeries:
    path = Path(entry.path)
    if not path.is_absolute():
        path = Path(base_dir) / path
    try:
        frame = pd.read_csv(path, comment=COMMENT)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SeriesFileError(f"cannot parse {path}: {e}") from e

    needed = [entry.value_column, 'trend', 'remainder', *entry.seasonal_columns.values()]
    missing = [c for c in needed if c not in frame.columns]
    if missing:
        raise SeriesFileError(f"{path} lacks columns: {', '.join(missing)}")

    def column(name):
        return frame[name].to_numpy(dtype=np.float64) * entry.weights.get(name, 1.0)

    return CorpusSeries(
        entry=entry,
        values=frame[entry.value_column].to_numpy(dtype=np.float64),
        trend=column('trend'),
        seasonals={p: column(c) for p, c in sorted(entry.seasonal_columns.items())},
        remainder=column('remainder'),
    )


def ground_truth_frame(truth) -> pd.DataFrame:
    """CSV layout of a simulated series"""
    return pd.DataFrame({
        't': np.arange(1, truth.composite.shape[0] + 1),
        'composite': truth.composite,
        'trend': truth.trend,
        'seasonal_short': truth.seasonal_short,
        'seasonal_long': truth.seasonal_long,
        'remainder': truth.remainder,
    })


def decomposition_frame(decomposition, time: Optional[Sequence] = None, value_name: str = 'data') -> pd.DataFrame:
    """Columns t, <value_name>, trend, seasonal_<p> per retained period, remainder"""
    n = len(decomposition)
    columns = {
        't': np.arange(1, n + 1) if time is None else list(time),
        value_name: decomposition.data,
        'trend': decomposition.trend,
    }
    for period, seasonal in decomposition.seasonals.items():
        columns[f"seasonal_{period}"] = seasonal
    columns['remainder'] = decomposition.remainder
    return pd.DataFrame(columns)
