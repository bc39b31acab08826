"""Multiscale Dubuc distance and baseline measures for time-series 1NN classification."""

__version__ = "0.1.0"

from .classify import (
    MeasureSpec,
    TuningResult,
    epsilon_search_space,
    knn_classify,
    loocv_accuracy,
    test_accuracy,
    tune_dtw,
    tune_mdd,
)
from .dataset import LabeledDataset
from .metrics import (
    DtwConfig,
    Envelope,
    dtw,
    dtw_bruteforce,
    envelope_bounds,
    eud,
    intersection_ratio,
    intersection_union,
    mdd,
    mds,
)
