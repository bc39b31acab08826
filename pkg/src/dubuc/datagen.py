"""Seeded sine/cosine datasets with class-specific phase shift and noise.

Random draws use numpy's PCG64 bit generator seeded with the integer seed.
For each wave spec the per-instance shifts are drawn first (uniform mode
only), then the ``count x length`` noise matrix, row-major. Specs are drawn
in order from a single generator, so a seed fully determines a dataset.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dataset import LabeledDataset

BASES = {"sine": np.sin, "cosine": np.cos}
SHIFT_MODES = ("fixed", "uniform")

DEFAULT_COUNT = 100
DEFAULT_LENGTH = 100
DEFAULT_PERIODS = 2.0
DEFAULT_TRAIN_FRACTION = 0.2


@dataclass(frozen=True)
class WaveSpec:
    base: str
    shift: float = 0.0
    shift_mode: str = "fixed"
    sigma: float = 0.0
    mu: float = 0.0
    amplitude: float = 1.0
    length: int = DEFAULT_LENGTH
    count: int = DEFAULT_COUNT
    label: int = 1
    periods: float = DEFAULT_PERIODS

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"base must be one of {sorted(BASES)}, got {self.base!r}")
        if self.shift_mode not in SHIFT_MODES:
            raise ValueError(f"shift_mode must be one of {SHIFT_MODES}, got {self.shift_mode!r}")
        if self.length < 2:
            raise ValueError(f"length must be at least 2, got {self.length}")
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        if self.amplitude <= 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if self.periods <= 0:
            raise ValueError(f"periods must be positive, got {self.periods}")

    def phase_grid(self) -> np.ndarray:
        # endpoint excluded so the grid covers whole periods exactly
        return 2.0 * math.pi * self.periods * np.arange(self.length) / self.length


@dataclass
class SimulatedDataset:
    train: LabeledDataset
    test: LabeledDataset
    seed: int
    specs: list[WaveSpec]
    train_fraction: float = DEFAULT_TRAIN_FRACTION

    def metadata(self) -> dict:
        return {
            "seed": self.seed,
            "rng": "numpy.random.PCG64",
            "train_fraction": self.train_fraction,
            "specs": [asdict(s) for s in self.specs],
        }


def noiseless_wave(spec: WaveSpec, shifts: np.ndarray | None = None) -> np.ndarray:
    """Clean waves, one row per instance. ``shifts`` defaults to the fixed shift."""
    if shifts is None:
        shifts = np.full(spec.count, float(spec.shift))
    grid = spec.phase_grid()
    return spec.amplitude * BASES[spec.base](grid[None, :] + shifts[:, None])


def draw_wave(spec: WaveSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw one spec's series from ``rng``; returns ``(series, shifts)``."""
    if spec.shift_mode == "uniform":
        shifts = rng.uniform(0.0, spec.shift, size=spec.count)
    else:
        shifts = np.full(spec.count, float(spec.shift))
    clean = noiseless_wave(spec, shifts)
    noise = rng.normal(spec.mu, spec.sigma, size=(spec.count, spec.length))
    return clean + noise, shifts


def generate_wave(spec: WaveSpec, seed: int) -> np.ndarray:
    """``spec.count`` noisy waves of ``spec.length`` samples, deterministic in ``seed``."""
    series, _ = draw_wave(spec, np.random.Generator(np.random.PCG64(seed)))
    return series


def split_counts(count: int, train_fraction: float) -> int:
    n_train = count * train_fraction
    if abs(n_train - round(n_train)) > 1e-9:
        raise ValueError(f"{count} instances cannot be split at fraction {train_fraction} exactly")
    n_train = int(round(n_train))
    if not 0 < n_train < count:
        raise ValueError(f"train fraction {train_fraction} leaves an empty partition")
    return n_train


def simulate(
    specs: list[WaveSpec],
    seed: int,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    name: str = "simulated",
) -> SimulatedDataset:
    """Draw every spec and split each class by ``train_fraction`` (first rows to train)."""
    if len({s.length for s in specs}) != 1:
        raise ValueError("all specs must share one length")
    rng = np.random.Generator(np.random.PCG64(seed))
    tr_x, tr_y, te_x, te_y = [], [], [], []
    for spec in specs:
        series, _ = draw_wave(spec, rng)
        k = split_counts(spec.count, train_fraction)
        tr_x.append(series[:k])
        te_x.append(series[k:])
        tr_y.append(np.full(k, spec.label))
        te_y.append(np.full(spec.count - k, spec.label))
    sim = SimulatedDataset(
        train=LabeledDataset(np.vstack(tr_x), np.concatenate(tr_y), f"{name}_TRAIN"),
        test=LabeledDataset(np.vstack(te_x), np.concatenate(te_y), f"{name}_TEST"),
        seed=seed,
        specs=list(specs),
        train_fraction=train_fraction,
    )
    sim.train.meta.update(sim.metadata())
    sim.test.meta.update(sim.metadata())
    return sim


def simulation_one_specs(
    count: int = DEFAULT_COUNT,
    length: int = DEFAULT_LENGTH,
    periods: float = DEFAULT_PERIODS,
    shift_mode: str = "uniform",
) -> list[WaveSpec]:
    # with a fixed shift the two classes are separable by plain Euclidean 1NN;
    # per-instance shifts give each class the phase variance the experiment needs
    common = dict(length=length, count=count, periods=periods, shift_mode=shift_mode, mu=0.0)
    return [
        WaveSpec("sine", shift=math.pi, sigma=0.1, label=1, **common),
        WaveSpec("cosine", shift=math.pi / 3, sigma=0.2, label=2, **common),
    ]


def simulation_two_specs(
    count: int = DEFAULT_COUNT,
    length: int = DEFAULT_LENGTH,
    periods: float = DEFAULT_PERIODS,
    shift_mode: str = "uniform",
) -> list[WaveSpec]:
    common = dict(length=length, count=count, periods=periods, shift_mode=shift_mode, mu=0.0)
    return [
        WaveSpec("sine", shift=2 * math.pi / 3, sigma=0.2, amplitude=0.6, label=1, **common),
        WaveSpec("cosine", shift=math.pi, sigma=0.4, amplitude=0.8, label=2, **common),
    ]


def simulation_one(
    seed: int,
    count: int = DEFAULT_COUNT,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    length: int = DEFAULT_LENGTH,
    periods: float = DEFAULT_PERIODS,
    shift_mode: str = "uniform",
) -> SimulatedDataset:
    """Sine shifted by up to pi (sigma 0.1) against cosine shifted by up to pi/3 (sigma 0.2).

    ``shift_mode="fixed"`` applies the full shift to every instance instead.
    """
    specs = simulation_one_specs(count, length, periods, shift_mode)
    return simulate(specs, seed, train_fraction, "simulation_one")


def simulation_two(
    seed: int,
    count: int = DEFAULT_COUNT,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    length: int = DEFAULT_LENGTH,
    periods: float = DEFAULT_PERIODS,
    shift_mode: str = "uniform",
) -> SimulatedDataset:
    """Randomly shifted, amplitude-scaled sine (low noise) against cosine (high noise)."""
    specs = simulation_two_specs(count, length, periods, shift_mode)
    return simulate(specs, seed, train_fraction, "simulation_two")
