"""1-nearest-neighbour classification and leave-one-out parameter tuning."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels as K
from .dataset import LabeledDataset
from .metrics import (
    DELTA_NORMALIZATIONS,
    DTW_COSTS,
    EPSILON_CONVENTIONS,
    DtwConfig,
    aggregate_ratios,
    as_series,
    check_scales,
    dtw,
    effective_radius,
    eud,
    mdd,
)

log = logging.getLogger(__name__)

MEASURES = ("eud", "dtw", "mdd")
DEFAULT_ETA = 0.3


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    window: int | None = None
    epsilons: tuple[int, ...] | None = None
    epsilon_convention: str = "inclusive"
    delta_normalization: str = "unit"
    dtw_cost: str = "squared"

    def __post_init__(self):
        if self.kind not in MEASURES:
            raise ValueError(f"unknown measure {self.kind!r}; expected one of {MEASURES}")
        if self.kind == "dtw":
            if self.window is None:
                raise ValueError("dtw measure requires a window")
            if self.window < 0:
                raise ValueError(f"window must be non-negative, got {self.window}")
        elif self.window is not None:
            raise ValueError(f"window is only meaningful for dtw, not {self.kind}")
        if self.kind == "mdd":
            if self.epsilons is None:
                raise ValueError("mdd measure requires an epsilon set")
            object.__setattr__(self, "epsilons", check_scales(self.epsilons))
        elif self.epsilons is not None:
            raise ValueError(f"epsilons are only meaningful for mdd, not {self.kind}")
        if self.epsilon_convention not in EPSILON_CONVENTIONS:
            raise ValueError(f"unknown epsilon convention {self.epsilon_convention!r}")
        if self.delta_normalization not in DELTA_NORMALIZATIONS:
            raise ValueError(f"unknown delta normalization {self.delta_normalization!r}")
        if self.dtw_cost not in DTW_COSTS:
            raise ValueError(f"unknown DTW cost {self.dtw_cost!r}")

    def distance(self, x, y) -> float:
        if self.kind == "eud":
            return eud(x, y)
        if self.kind == "dtw":
            return dtw(x, y, DtwConfig(self.window, self.dtw_cost))
        return mdd(x, y, self.epsilons, self.epsilon_convention, self.delta_normalization)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "dtw":
            out["window"] = self.window
            out["dtw_cost"] = self.dtw_cost
        if self.kind == "mdd":
            out["epsilons"] = list(self.epsilons)
            out["epsilon_convention"] = self.epsilon_convention
            out["delta_normalization"] = self.delta_normalization
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "MeasureSpec":
        d = dict(d)
        if d.get("epsilons") is not None:
            d["epsilons"] = tuple(d["epsilons"])
        return cls(**d)


@dataclass
class TuningResult:
    best: MeasureSpec
    expected_accuracy: float
    log: list[tuple[MeasureSpec, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best": self.best.to_dict(),
            "expected_accuracy": self.expected_accuracy,
            "candidates": len(self.log),
            "log": [{"params": m.to_dict(), "accuracy": a} for m, a in self.log],
        }


def _stack(data) -> np.ndarray:
    if isinstance(data, LabeledDataset):
        return np.ascontiguousarray(data.series)
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = as_series(arr)[None, :]
    return arr


def _envelopes(rows: np.ndarray, scales, convention) -> tuple[np.ndarray, np.ndarray]:
    """Per-series envelope stacks, shaped ``(n, k, d)``. Each depends on one series only."""
    radii = np.array([effective_radius(e, convention) for e in scales], dtype=np.int64)
    n, d = rows.shape
    upper = np.empty((n, len(radii), d))
    lower = np.empty((n, len(radii), d))
    for i in range(n):
        upper[i], lower[i] = K.envelope_stack(rows[i], radii)
    return upper, lower


def ratio_matrices(a, b, scales, convention="inclusive", symmetric=False) -> np.ndarray:
    """Intersection ratio matrices, one per scale: shape ``(k, len(a), len(b))``."""
    a = _stack(a)
    b = a if symmetric else _stack(b)
    scales = check_scales(scales)
    ua, la = _envelopes(a, scales, convention)
    ub, lb = (ua, la) if symmetric else _envelopes(b, scales, convention)
    out = np.empty((len(scales), a.shape[0], b.shape[0]))
    for k in range(len(scales)):
        out[k] = K.ratio_matrix(
            np.ascontiguousarray(ua[:, k]),
            np.ascontiguousarray(la[:, k]),
            np.ascontiguousarray(ub[:, k]),
            np.ascontiguousarray(lb[:, k]),
            symmetric,
        )
    return out


def distance_matrix(a, b, measure: MeasureSpec, symmetric: bool = False) -> np.ndarray:
    """All-pairs distances between the rows of ``a`` and ``b``.

    With ``symmetric=True`` ``b`` is ignored and the self-distance matrix of
    ``a`` is filled from its upper triangle.
    """
    a = _stack(a)
    b = a if symmetric else _stack(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"unequal lengths: {a.shape[1]} != {b.shape[1]}")
    if measure.kind == "eud":
        return K.eud_matrix(a, b, symmetric)
    if measure.kind == "dtw":
        if measure.window > a.shape[1]:
            raise ValueError(f"window {measure.window} exceeds series length {a.shape[1]}")
        return K.dtw_matrix(a, b, measure.window, measure.dtw_cost == "squared", symmetric)
    ratios = ratio_matrices(a, b, measure.epsilons, measure.epsilon_convention, symmetric)
    return 1.0 - aggregate_ratios(ratios, measure.delta_normalization)


def nearest_labels(dist: np.ndarray, labels: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, so ties go to the lowest training index
    return np.asarray(labels)[np.argmin(dist, axis=1)]


def loocv_from_matrix(dist: np.ndarray, labels: np.ndarray) -> float:
    dist = np.array(dist, dtype=np.float64)
    np.fill_diagonal(dist, np.inf)
    pred = nearest_labels(dist, labels)
    return float(np.mean(pred == labels))


def _check_train(train: LabeledDataset):
    if len(train) == 0:
        raise ValueError("empty training set")


def predict(train: LabeledDataset, queries, measure: MeasureSpec) -> np.ndarray:
    _check_train(train)
    dist = distance_matrix(queries, train, measure)
    return nearest_labels(dist, train.labels)


def knn_classify(train: LabeledDataset, query, measure: MeasureSpec) -> int:
    """Label of the nearest training series (lowest index on ties)."""
    _check_train(train)
    query = as_series(query, "query")
    if query.shape[0] != train.length:
        raise ValueError(f"unequal lengths: query {query.shape[0]} != train {train.length}")
    return int(predict(train, query[None, :], measure)[0])


def loocv_accuracy(data: LabeledDataset, measure: MeasureSpec) -> float:
    """Leave-one-out 1NN accuracy on ``data`` (the expected accuracy)."""
    if len(data) < 2:
        raise ValueError("leave-one-out needs at least 2 instances")
    dist = distance_matrix(data, None, measure, symmetric=True)
    return loocv_from_matrix(dist, data.labels)


def test_accuracy(train: LabeledDataset, test: LabeledDataset, measure: MeasureSpec) -> float:
    """1NN accuracy of ``test`` against the whole of ``train`` (the actual accuracy)."""
    if train.length != test.length:
        raise ValueError(f"unequal lengths: train {train.length} != test {test.length}")
    pred = predict(train, test, measure)
    return float(np.mean(pred == test.labels))


test_accuracy.__test__ = False  # not a pytest test despite the name


def epsilon_search_space(d: int, eta: float = DEFAULT_ETA) -> list[int]:
    """Powers of two not exceeding ``eta * d``, ascending."""
    if d < 1:
        raise ValueError(f"length must be positive, got {d}")
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    limit = eta * d
    out = []
    p = 1
    while p <= limit:
        out.append(p)
        p *= 2
    if not out:
        raise ValueError(f"eta too small: eta*d = {limit} < 1")
    return out


def epsilon_subsets(space: Sequence[int]) -> list[tuple[int, ...]]:
    """Every non-empty subset of ``space``, each in ascending order."""
    space = sorted(space)
    return [c for r in range(1, len(space) + 1) for c in itertools.combinations(space, r)]


def _mdd_preference(item):
    eps, acc = item
    # max accuracy, then larger set, then lexicographically smallest
    return (-acc, -len(eps), eps)


def tune_mdd(
    train: LabeledDataset,
    eta: float = DEFAULT_ETA,
    epsilon_convention: str = "inclusive",
    delta_normalization: str = "unit",
) -> TuningResult:
    """Exhaustive search over every non-empty subset of the power-of-two scales."""
    if len(train) < 2:
        raise ValueError("leave-one-out needs at least 2 instances")
    space = epsilon_search_space(train.length, eta)
    ratios = ratio_matrices(train, None, space, epsilon_convention, symmetric=True)
    pos = {e: i for i, e in enumerate(space)}
    scored = []
    for eps in epsilon_subsets(space):
        sim = aggregate_ratios(ratios[[pos[e] for e in eps]], delta_normalization)
        scored.append((eps, loocv_from_matrix(1.0 - sim, train.labels)))
    best_eps, best_acc = min(scored, key=_mdd_preference)

    def spec(eps):
        return MeasureSpec(
            "mdd",
            epsilons=eps,
            epsilon_convention=epsilon_convention,
            delta_normalization=delta_normalization,
        )

    log.debug("tune_mdd %s: best %s acc=%.4f over %d subsets", train.name, best_eps, best_acc, len(scored))
    return TuningResult(spec(best_eps), best_acc, [(spec(e), a) for e, a in scored])


def tune_dtw(train: LabeledDataset, max_window: int, dtw_cost: str = "squared") -> TuningResult:
    """Leave-one-out accuracy for every window 0..max_window; ties favour the smaller window."""
    if len(train) < 2:
        raise ValueError("leave-one-out needs at least 2 instances")
    if not 0 <= max_window <= train.length:
        raise ValueError(f"max_window must lie in [0, {train.length}], got {max_window}")
    entries = []
    for w in range(max_window + 1):
        m = MeasureSpec("dtw", window=w, dtw_cost=dtw_cost)
        entries.append((m, loocv_accuracy(train, m)))
    best, best_acc = entries[0]
    for m, acc in entries[1:]:
        if acc > best_acc:
            best, best_acc = m, acc
    return TuningResult(best, best_acc, entries)
