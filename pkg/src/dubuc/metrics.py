"""Distance measures: Multiscale Dubuc distance, Euclidean, and banded DTW.

All functions take plain sequences or 1-D numpy arrays and return floats.
Indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K

EPSILON_CONVENTIONS = ("inclusive", "strict")
DELTA_NORMALIZATIONS = ("unit", "paper-literal")
DTW_COSTS = ("squared", "absolute")

BRUTEFORCE_MAX_LENGTH = 10


def as_series(x, name: str = "series") -> np.ndarray:
    """Validate and convert ``x`` to a contiguous float64 vector."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty input")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"unequal lengths: {x.shape[0]} != {y.shape[0]}")
    return x, y


def effective_radius(epsilon: int, convention: str = "inclusive") -> int:
    """Map a scale to the neighbourhood radius actually used.

    ``inclusive`` uses ``|t - s| <= epsilon``; ``strict`` uses
    ``|t - s| < epsilon`` so that epsilon 1 leaves the series unchanged.
    """
    if epsilon < 0 or int(epsilon) != epsilon:
        raise ValueError(f"epsilon must be a non-negative integer, got {epsilon!r}")
    if convention == "inclusive":
        return int(epsilon)
    if convention == "strict":
        return max(int(epsilon) - 1, 0)
    raise ValueError(f"unknown epsilon convention {convention!r}")


def check_scales(scales: Iterable[int]) -> tuple[int, ...]:
    """Validate an epsilon set: non-empty, strictly increasing, non-negative integers."""
    out = tuple(int(e) for e in scales)
    if not out:
        raise ValueError("epsilon set is empty")
    if any(e < 0 for e in out):
        raise ValueError(f"epsilon values must be non-negative: {out}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError(f"epsilon set must be strictly increasing: {out}")
    return out


@dataclass(frozen=True)
class Envelope:
    upper: np.ndarray
    lower: np.ndarray
    epsilon: int


@dataclass(frozen=True)
class DtwConfig:
    window: int = 0
    cost: str = "squared"

    def __post_init__(self):
        if self.window < 0:
            raise ValueError(f"window must be non-negative, got {self.window}")
        if self.cost not in DTW_COSTS:
            raise ValueError(f"unknown DTW cost {self.cost!r}")


def envelope_bounds(x, epsilon: int, convention: str = "inclusive") -> Envelope:
    """Upper and lower bounds of ``x`` over a neighbourhood of radius ``epsilon``.

    Neighbourhoods are clipped at both ends of the series.
    """
    x = as_series(x, "x")
    r = effective_radius(epsilon, convention)
    if r == 0:
        return Envelope(x.copy(), x.copy(), int(epsilon))
    return Envelope(K.sliding_max(x, r), K.sliding_min(x, r), int(epsilon))


def envelope_stack(
    x, scales: Sequence[int], convention: str = "inclusive"
) -> tuple[np.ndarray, np.ndarray]:
    """Envelopes of ``x`` at every scale as two ``(len(scales), d)`` arrays."""
    x = as_series(x, "x")
    scales = check_scales(scales)
    radii = np.array([effective_radius(e, convention) for e in scales], dtype=np.int64)
    return K.envelope_stack(x, radii)


def intersection_union(x, y, epsilon: int, convention: str = "inclusive") -> tuple[float, float]:
    x, y = _pair(x, y)
    ex = envelope_bounds(x, epsilon, convention)
    ey = envelope_bounds(y, epsilon, convention)
    inter, union = K.overlap(ex.upper, ex.lower, ey.upper, ey.lower)
    return float(inter), float(union)


def intersection_ratio(x, y, epsilon: int, convention: str = "inclusive") -> float:
    """Envelope intersection over envelope union; 1.0 when the union is empty."""
    inter, union = intersection_union(x, y, epsilon, convention)
    return float(K.ratio(inter, union))


def aggregate_ratios(ratios, normalization: str = "unit"):
    """Trapezoidal pseudo-area over per-scale ratios (first axis = scale).

    Works on a 1-D vector of ratios or on a stack of ratio matrices. With
    ``unit`` normalization the width of each trapezoid is ``1/(k-1)`` so a
    perfect match scores exactly 1; ``paper-literal`` uses ``1/k``. A single
    scale returns its ratio unchanged.
    """
    if normalization not in DELTA_NORMALIZATIONS:
        raise ValueError(f"unknown delta normalization {normalization!r}")
    ratios = np.asarray(ratios, dtype=np.float64)
    k = ratios.shape[0]
    if k == 0:
        raise ValueError("epsilon set is empty")
    if k == 1:
        return ratios[0].copy() if ratios.ndim > 1 else float(ratios[0])
    total = (ratios[0] + ratios[1]) / 2.0
    for i in range(2, k):
        total = total + (ratios[i - 1] + ratios[i]) / 2.0
    width = k - 1 if normalization == "unit" else k
    out = total / width
    return out if ratios.ndim > 1 else float(out)


def scale_ratios(x, y, scales: Sequence[int], convention: str = "inclusive") -> np.ndarray:
    x, y = _pair(x, y)
    ux, lx = envelope_stack(x, scales, convention)
    uy, ly = envelope_stack(y, scales, convention)
    out = np.empty(ux.shape[0])
    for i in range(ux.shape[0]):
        out[i] = K.ratio(*K.overlap(ux[i], lx[i], uy[i], ly[i]))
    return out


def mds(
    x,
    y,
    scales: Sequence[int],
    convention: str = "inclusive",
    normalization: str = "unit",
) -> float:
    """Multiscale Dubuc similarity in [0, 1]."""
    return aggregate_ratios(scale_ratios(x, y, scales, convention), normalization)


def mdd(
    x,
    y,
    scales: Sequence[int],
    convention: str = "inclusive",
    normalization: str = "unit",
) -> float:
    """Multiscale Dubuc distance, ``1 - mds``."""
    return 1.0 - mds(x, y, scales, convention, normalization)


def eud(x, y) -> float:
    x, y = _pair(x, y)
    return math.sqrt(K.sq_euclidean(x, y))


def dtw(x, y, config: DtwConfig | None = None) -> float:
    """DTW distance restricted to a Sakoe-Chiba band.

    In ``squared`` mode the square root of the accumulated squared
    differences is returned, so window 0 reproduces :func:`eud` exactly.
    """
    config = config or DtwConfig()
    x, y = _pair(x, y)
    if config.window > x.shape[0]:
        raise ValueError(f"window {config.window} exceeds series length {x.shape[0]}")
    squared = config.cost == "squared"
    acc = K.dtw_banded(x, y, config.window, squared)
    return math.sqrt(acc) if squared else float(acc)


def dtw_bruteforce(x, y, config: DtwConfig | None = None) -> float:
    """Minimum warping cost by enumerating every monotone path in the band.

    Exponential in the length; only meant as a test oracle for short series.
    """
    config = config or DtwConfig()
    x, y = _pair(x, y)
    d = x.shape[0]
    if d > BRUTEFORCE_MAX_LENGTH:
        raise ValueError(f"series too long for enumeration: {d} > {BRUTEFORCE_MAX_LENGTH}")
    if config.window > d:
        raise ValueError(f"window {config.window} exceeds series length {d}")
    squared = config.cost == "squared"
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    w = config.window

    def cost(i, j):
        diff = xs[i] - ys[j]
        return diff * diff if squared else abs(diff)

    best = math.inf
    # explicit stack of (i, j, accumulated cost along the path so far);
    # diagonal steps are pushed last so they are explored first
    stack = [(0, 0, cost(0, 0))]
    while stack:
        i, j, acc = stack.pop()
        if acc >= best:
            # costs are non-negative, so no extension of this prefix can win
            continue
        if i == d - 1 and j == d - 1:
            best = acc
            continue
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            ni, nj = i + di, j + dj
            if ni < d and nj < d and abs(ni - nj) <= w:
                stack.append((ni, nj, acc + cost(ni, nj)))
    return math.sqrt(best) if squared else best
