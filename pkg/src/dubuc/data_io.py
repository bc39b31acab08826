"""UCR text format reading/writing and z-score standardization.

One record per line, no header: the class label followed by the
observations in time order, separated by a tab (default) or a comma.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import LabeledDataset

log = logging.getLogger(__name__)

DELIMITERS = {"tab": "\t", "comma": ","}


class FormatError(ValueError):
    """A dataset file does not follow the UCR text layout."""


def _delim(delimiter: str) -> str:
    try:
        return DELIMITERS[delimiter]
    except KeyError:
        raise ValueError(f"delimiter must be one of {sorted(DELIMITERS)}, got {delimiter!r}") from None


def _parse_label(field: str, row: int) -> int:
    try:
        return int(field)
    except ValueError:
        pass
    try:
        value = float(field)
    except ValueError:
        raise FormatError(f"row {row}, field 1: label {field!r} is not numeric") from None
    if not math.isfinite(value):
        raise FormatError(f"row {row}, field 1: label {field!r} is not finite")
    log.warning("row %d: float label %r truncated to %d", row, field, int(value))
    return int(value)


def load_ucr(path, delimiter: str = "tab") -> LabeledDataset:
    path = Path(path)
    sep = _delim(delimiter)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty file")
    width = None
    labels, rows = [], []
    for r, line in enumerate(lines, start=1):
        fields = line.strip().split(sep)
        if width is None:
            width = len(fields)
            if width < 2:
                raise FormatError(f"row {r}: expected a label and at least one observation")
        elif len(fields) != width:
            raise FormatError(f"row {r}: {len(fields)} fields, expected {width}")
        labels.append(_parse_label(fields[0], r))
        values = []
        for c, f in enumerate(fields[1:], start=2):
            try:
                values.append(float(f))
            except ValueError:
                raise FormatError(f"row {r}, field {c}: {f!r} is not numeric") from None
        rows.append(values)
    return LabeledDataset(np.array(rows), np.array(labels, dtype=np.int64), path.stem)


def save_ucr(data: LabeledDataset, path, delimiter: str = "tab") -> None:
    """Write ``data`` with 17 significant digits so that loading it back is lossless."""
    path = Path(path)
    sep = _delim(delimiter)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for label, row in zip(data.labels, data.series):
            fh.write(sep.join([str(int(label))] + [format(float(v), ".17g") for v in row]))
            fh.write("\n")


def read_series(source: str) -> np.ndarray:
    """A single series from a file or an inline comma-separated list.

    Files may hold values separated by commas, tabs, or whitespace on one or
    more lines.
    """
    p = Path(source)
    text = p.read_text(encoding="utf-8") if p.is_file() else source
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise FormatError(f"no values in {source!r}")
    try:
        return np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise FormatError(f"{source!r}: {exc}") from None


@dataclass(frozen=True)
class StandardizationStats:
    mean: float
    stddev: float
    source: str = ""

    def __post_init__(self):
        if not self.stddev > 0:
            raise ValueError(f"stddev must be positive, got {self.stddev}")


def zscore_fit(train: LabeledDataset) -> StandardizationStats:
    """Pooled mean and population standard deviation over every training observation."""
    values = np.asarray(train.series, dtype=np.float64)
    mean = float(values.mean())
    std = float(values.std())
    if std == 0:
        raise ValueError("zero variance")
    return StandardizationStats(mean, std, train.name)


def zscore_apply(data: LabeledDataset, stats: StandardizationStats) -> LabeledDataset:
    return LabeledDataset((data.series - stats.mean) / stats.stddev, data.labels, data.name, dict(data.meta))
