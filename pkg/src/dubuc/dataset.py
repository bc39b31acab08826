from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class LabeledDataset:
    """Equal-length univariate series with integer class labels.

    ``series`` is stored as an ``(n, d)`` float64 array and ``labels`` as an
    ``(n,)`` int64 array. Both are made read-only on construction.
    """

    series: np.ndarray
    labels: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        series = np.array(self.series, dtype=np.float64)
        labels = np.array(self.labels)
        if series.ndim != 2:
            raise ValueError(f"series must be a 2-D array (n, d), got shape {series.shape}")
        if series.shape[0] == 0 or series.shape[1] == 0:
            raise ValueError("dataset is empty")
        if labels.shape != (series.shape[0],):
            raise ValueError(
                f"{labels.shape[0] if labels.ndim else 0} labels for {series.shape[0]} series"
            )
        if not np.isfinite(series).all():
            raise ValueError("dataset contains non-finite values")
        if labels.dtype.kind == "f":
            if not np.all(labels == np.trunc(labels)):
                raise ValueError("labels must be integer-valued")
        labels = labels.astype(np.int64)
        series.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.series.shape[0]

    @property
    def length(self) -> int:
        return self.series.shape[1]

    @property
    def classes(self) -> list[int]:
        return sorted(int(c) for c in np.unique(self.labels))

    def subset(self, index) -> "LabeledDataset":
        index = np.asarray(index)
        return LabeledDataset(self.series[index], self.labels[index], self.name, dict(self.meta))

    def of_class(self, label: int) -> np.ndarray:
        return self.series[self.labels == label]

    def equals(self, other: "LabeledDataset") -> bool:
        """Bitwise equality of values and labels."""
        return (
            self.series.shape == other.series.shape
            and np.array_equal(self.series, other.series)
            and np.array_equal(self.labels, other.labels)
        )
