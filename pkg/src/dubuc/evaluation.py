"""Classification scores, Sharpshooter gain analysis, and win significance."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .metrics import eud

log = logging.getLogger(__name__)

REGIONS = ("TP", "FP", "FN", "TN")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for k in ("tp", "fp", "fn", "tn"):
            if getattr(self, k) < 0:
                raise ValueError(f"{k} must be non-negative")

    @property
    def p(self) -> int:
        return self.tp + self.fn

    @property
    def n(self) -> int:
        return self.fp + self.tn


def confusion_one_vs_rest(predicted, actual, positive_class) -> ConfusionCounts:
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise ValueError(f"length mismatch: {predicted.shape[0]} predictions, {actual.shape[0]} labels")
    pp = predicted == positive_class
    ap = actual == positive_class
    return ConfusionCounts(
        tp=int(np.sum(pp & ap)),
        fp=int(np.sum(pp & ~ap)),
        fn=int(np.sum(~pp & ap)),
        tn=int(np.sum(~pp & ~ap)),
    )


def _safe_div(num: float, den: float, what: str) -> float:
    if den == 0:
        log.debug("degenerate %s: zero denominator, reporting 0", what)
        return 0.0
    return num / den


def prf1(counts: ConfusionCounts) -> tuple[float, float, float]:
    """Precision, recall, and F1; any zero denominator yields 0."""
    precision = _safe_div(counts.tp, counts.tp + counts.fp, "precision")
    recall = _safe_div(counts.tp, counts.tp + counts.fn, "recall")
    f1 = _safe_div(2 * precision * recall, precision + recall, "f1")
    return precision, recall, f1


def tss(counts: ConfusionCounts) -> float:
    """True skill statistic: true-positive rate minus false-positive rate."""
    if counts.p == 0 or counts.n == 0:
        raise ValueError("undefined skill score: need both positive and negative instances")
    return counts.tp / counts.p - counts.fp / counts.n


def accuracy_gain(acc_mu1: float, acc_mu2: float) -> float:
    if acc_mu2 <= 0:
        raise ValueError("accuracy gain undefined for a zero reference accuracy")
    return acc_mu1 / acc_mu2


def region(expected_gain: float, actual_gain: float) -> str:
    # a gain of exactly 1 counts as no win
    if expected_gain > 1:
        return "TP" if actual_gain > 1 else "FP"
    return "FN" if actual_gain > 1 else "TN"


@dataclass(frozen=True)
class SharpshooterPoint:
    dataset: str
    expected_gain: float
    actual_gain: float
    region: str


@dataclass(frozen=True)
class AccuracyRow:
    dataset: str
    acc_expected_mu1: float
    acc_expected_mu2: float
    acc_actual_mu1: float
    acc_actual_mu2: float

    def swapped(self) -> "AccuracyRow":
        return AccuracyRow(
            self.dataset,
            self.acc_expected_mu2,
            self.acc_expected_mu1,
            self.acc_actual_mu2,
            self.acc_actual_mu1,
        )


def sharpshooter(rows: Iterable) -> list[SharpshooterPoint]:
    """Expected/actual gains of measure 1 over measure 2 and their plot region.

    Each row is an :class:`AccuracyRow` or a tuple
    ``(name, expected_mu1, expected_mu2, actual_mu1, actual_mu2)``.
    """
    points = []
    for row in rows:
        if not isinstance(row, AccuracyRow):
            row = AccuracyRow(*row)
        accs = (row.acc_expected_mu1, row.acc_expected_mu2, row.acc_actual_mu1, row.acc_actual_mu2)
        if min(accs) <= 0:
            raise ValueError(f"{row.dataset}: accuracies must be positive, got {accs}")
        g_hat = accuracy_gain(row.acc_expected_mu1, row.acc_expected_mu2)
        g = accuracy_gain(row.acc_actual_mu1, row.acc_actual_mu2)
        points.append(SharpshooterPoint(row.dataset, g_hat, g, region(g_hat, g)))
    return points


@dataclass(frozen=True)
class WinSignificance:
    total: float
    mean: float
    stddev: float
    count: int


def win_significance(points: Sequence[SharpshooterPoint]) -> WinSignificance:
    """Sum, mean, and population stddev of each winning point's distance from (1, 1).

    Only points with both gains at least 1 contribute.
    """
    dists = [
        math.hypot(p.actual_gain - 1.0, p.expected_gain - 1.0)
        for p in points
        if p.actual_gain >= 1.0 and p.expected_gain >= 1.0
    ]
    if not dists:
        raise ValueError("no points with both gains >= 1")
    arr = np.array(dists)
    return WinSignificance(float(arr.sum()), float(arr.mean()), float(arr.std()), len(dists))


def region_summary(points: Sequence[SharpshooterPoint]) -> dict:
    """Region counts and fractions, over all points and with actual-gain ties removed."""
    total = len(points)
    counts = {r: sum(p.region == r for p in points) for r in REGIONS}
    untied = [p for p in points if p.actual_gain != 1.0]
    counts_untied = {r: sum(p.region == r for p in untied) for r in REGIONS}
    wins = sum(p.actual_gain > 1 for p in points)
    losses = sum(p.actual_gain < 1 for p in points)

    def frac(k, n):
        return k / n if n else None

    return {
        "datasets": total,
        "ties": total - len(untied),
        "wins_mu1": wins,
        "wins_mu2": losses,
        "win_fraction_mu1": frac(wins, total),
        "win_fraction_mu1_excluding_ties": frac(wins, len(untied)),
        "region_counts": counts,
        "region_fractions": {r: frac(c, total) for r, c in counts.items()},
        "region_counts_excluding_ties": counts_untied,
        "region_fractions_excluding_ties": {r: frac(c, len(untied)) for r, c in counts_untied.items()},
    }


def within_class_variability(class_series, return_matrix: bool = False):
    """Mean pairwise Euclidean distance among the series of one class.

    With ``return_matrix=True`` the full pairwise distance matrix is returned
    as well, as ``(mean, matrix)``.
    """
    rows = [np.asarray(s, dtype=np.float64) for s in class_series]
    n = len(rows)
    if n < 2:
        raise ValueError("within-class variability needs at least 2 series")
    mat = np.zeros((n, n))
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            mat[i, j] = mat[j, i] = eud(rows[i], rows[j])
            total += mat[i, j]
    mean = 2.0 * total / (n * (n - 1))
    return (mean, mat) if return_matrix else mean


@dataclass
class ClassScores:
    label: int
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    accuracy: float
    labels: list[int]
    confusion_matrix: list[list[int]]
    per_class: list[ClassScores]
    measure: dict = field(default_factory=dict)
    tss: float | None = None
    positive_label: int | None = None

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "labels": self.labels,
            "confusion_matrix": self.confusion_matrix,
            "per_class": [vars(c) for c in self.per_class],
            "tss": self.tss,
            "positive_label": self.positive_label,
            "measure": self.measure,
        }


def confusion_matrix(predicted, actual, labels: Sequence[int]) -> list[list[int]]:
    """Rows are actual classes, columns predicted, both in ``labels`` order."""
    index = {lab: i for i, lab in enumerate(labels)}
    mat = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for p, a in zip(predicted, actual):
        mat[index[int(a)], index[int(p)]] += 1
    return mat.tolist()


def evaluate_predictions(predicted, actual, measure: dict | None = None, positive_label=None) -> EvalReport:
    """Accuracy, confusion matrix, and one-vs-rest scores per class.

    TSS is included for two-class problems, scored with ``positive_label``
    (default: the larger label) as the positive class.
    """
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise ValueError("length mismatch between predictions and labels")
    labels = sorted({int(v) for v in actual} | {int(v) for v in predicted})
    per_class = []
    for lab in labels:
        c = confusion_one_vs_rest(predicted, actual, lab)
        per_class.append(ClassScores(lab, c.tp, c.fp, c.fn, c.tn, *prf1(c)))
    report = EvalReport(
        accuracy=float(np.mean(predicted == actual)),
        labels=labels,
        confusion_matrix=confusion_matrix(predicted, actual, labels),
        per_class=per_class,
        measure=dict(measure or {}),
    )
    if len(labels) == 2:
        pos = labels[-1] if positive_label is None else int(positive_label)
        counts = confusion_one_vs_rest(predicted, actual, pos)
        if counts.p and counts.n:
            report.tss = tss(counts)
            report.positive_label = pos
    return report
