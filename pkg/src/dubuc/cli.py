"""Command-line entry point: ``dubuc compute|classify|tune|eval|simulate``."""

from __future__ import annotations

import csv
import functools
import hashlib
import json
import logging
from pathlib import Path

import click

from . import __version__
from .classify import (
    DEFAULT_ETA,
    MeasureSpec,
    loocv_accuracy,
    predict,
    tune_dtw,
    tune_mdd,
)
from .data_io import (
    DELIMITERS,
    load_ucr,
    read_series,
    save_ucr,
    zscore_apply,
    zscore_fit,
)
from .datagen import (
    DEFAULT_COUNT,
    DEFAULT_LENGTH,
    DEFAULT_PERIODS,
    DEFAULT_TRAIN_FRACTION,
    SHIFT_MODES,
    simulation_one,
    simulation_two,
)
from .evaluation import (
    AccuracyRow,
    evaluate_predictions,
    region_summary,
    sharpshooter,
    win_significance,
)
from .metrics import DELTA_NORMALIZATIONS, DTW_COSTS, EPSILON_CONVENTIONS

SCHEMA_VERSION = 1
DEFAULT_EPSILONS = "1,2,4"
TABLE_COLUMNS = ("dataset", "acc_expected_mu1", "acc_expected_mu2", "acc_actual_mu1", "acc_actual_mu2")
SHARPSHOOTER_COLUMNS = TABLE_COLUMNS + ("gain_expected", "gain_actual", "region")
PREDICTION_COLUMNS = ("index", "actual", "predicted")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(command: str, params: dict, inputs=(), outputs=()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "dubuc",
        "version": __version__,
        "command": command,
        "params": params,
        "inputs": {str(p): sha256_file(p) for p in inputs if Path(p).is_file()},
        "outputs": {str(p): sha256_file(p) for p in outputs},
    }


def write_json(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        click.echo(text, nl=False)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")


def render_number(v: float) -> str:
    return repr(float(v))


def format_distance(v: float) -> str:
    s = format(float(v), ".12g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def parse_epsilons(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def reported(fn):
    """Turn validation and I/O failures into a diagnostic and exit status 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, OSError, KeyError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def measure_options(fn):
    opts = [
        click.option("--measure", type=click.Choice(["eud", "dtw", "mdd"]), default="mdd", show_default=True),
        click.option("--window", type=int, default=None, help="Sakoe-Chiba half-width for dtw."),
        click.option("--epsilons", default=None, help=f"Scales for mdd, e.g. {DEFAULT_EPSILONS}."),
        click.option("--epsilon-convention", type=click.Choice(EPSILON_CONVENTIONS), default="inclusive",
                     show_default=True),
        click.option("--delta-normalization", type=click.Choice(DELTA_NORMALIZATIONS), default="unit",
                     show_default=True),
        click.option("--dtw-cost", type=click.Choice(DTW_COSTS), default="squared", show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def make_measure(measure, window, epsilons, epsilon_convention, delta_normalization, dtw_cost) -> MeasureSpec:
    if measure == "dtw" and window is None:
        raise click.UsageError("--measure dtw needs --window")
    if measure == "mdd" and epsilons is None:
        epsilons = DEFAULT_EPSILONS
    return MeasureSpec(
        measure,
        window=window if measure == "dtw" else None,
        epsilons=parse_epsilons(epsilons) if measure == "mdd" else None,
        epsilon_convention=epsilon_convention,
        delta_normalization=delta_normalization,
        dtw_cost=dtw_cost,
    )


def load_pair(train_path, test_path, delimiter, zscore):
    train = load_ucr(train_path, delimiter)
    test = load_ucr(test_path, delimiter) if test_path is not None else None
    stats = None
    if zscore:
        stats = zscore_fit(train)
        train = zscore_apply(train, stats)
        test = zscore_apply(test, stats) if test is not None else None
    return train, test, stats


@click.group()
@click.version_option(__version__)
@click.option("-v", "--verbose", count=True, help="Increase log verbosity.")
def main(verbose):
    """Multiscale Dubuc distance, DTW, and Euclidean 1NN toolkit."""
    logging.basicConfig(level=logging.WARNING - 10 * verbose, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("series_a")
@click.argument("series_b")
@measure_options
@click.option("--manifest", type=click.Path(dir_okay=False), default=None)
@reported
def compute(series_a, series_b, manifest, **flags):
    """Distance between two series (files or inline comma-separated values)."""
    m = make_measure(**flags)
    x, y = read_series(series_a), read_series(series_b)
    value = m.distance(x, y)
    click.echo(format_distance(value))
    if manifest:
        write_json(build_manifest("compute", {"measure": m.to_dict(), "a": series_a, "b": series_b},
                                  [series_a, series_b]), manifest)


@main.command()
@click.argument("train_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("test_file", type=click.Path(exists=True, dir_okay=False))
@measure_options
@click.option("--tune/--no-tune", default=False, help="Tune the measure's parameter on the training set first.")
@click.option("--eta", type=float, default=DEFAULT_ETA, show_default=True)
@click.option("--max-window", type=int, default=None, help="Largest window tried with --tune (default: length).")
@click.option("--positive-label", type=int, default=None, help="Positive class for TSS (default: larger label).")
@click.option("--delimiter", type=click.Choice(sorted(DELIMITERS)), default="tab", show_default=True)
@click.option("--zscore", is_flag=True, help="Standardize both sets with training-set statistics.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report JSON (default: stdout).")
@click.option("--predictions", type=click.Path(dir_okay=False), default=None, help="Per-instance CSV.")
@click.option("--manifest", type=click.Path(dir_okay=False), default=None)
@reported
def classify(train_file, test_file, tune, eta, max_window, positive_label, delimiter, zscore, out,
             predictions, manifest, **flags):
    """1NN classification of TEST_FILE against TRAIN_FILE."""
    train, test, stats = load_pair(train_file, test_file, delimiter, zscore)
    measure = flags["measure"]
    if tune and measure == "dtw":
        flags["window"] = 0
    m = make_measure(**flags)
    expected = None
    if tune and measure == "mdd":
        res = tune_mdd(train, eta, m.epsilon_convention, m.delta_normalization)
        m, expected = res.best, res.expected_accuracy
    elif tune and measure == "dtw":
        res = tune_dtw(train, train.length if max_window is None else max_window, m.dtw_cost)
        m, expected = res.best, res.expected_accuracy
    elif len(train) >= 2:
        expected = loocv_accuracy(train, m)
    pred = predict(train, test, m)
    report = evaluate_predictions(pred, test.labels, m.to_dict(), positive_label).to_dict()
    report["expected_accuracy"] = expected
    report["train"] = {"name": train.name, "n": len(train), "length": train.length}
    report["test"] = {"name": test.name, "n": len(test), "length": test.length}
    if stats is not None:
        report["zscore"] = {"mean": stats.mean, "stddev": stats.stddev, "source": stats.source}
    write_json(report, out)
    outputs = [p for p in (out,) if p]
    if predictions:
        Path(predictions).parent.mkdir(parents=True, exist_ok=True)
        with open(predictions, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(PREDICTION_COLUMNS)
            for i, (a, p) in enumerate(zip(test.labels, pred)):
                w.writerow([i, int(a), int(p)])
        outputs.append(predictions)
    if manifest:
        params = {"measure": m.to_dict(), "tune": tune, "eta": eta, "max_window": max_window,
                  "positive_label": positive_label, "delimiter": delimiter, "zscore": zscore}
        write_json(build_manifest("classify", params, [train_file, test_file], outputs), manifest)


@main.command()
@click.argument("train_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--measure", type=click.Choice(["dtw", "mdd"]), default="mdd", show_default=True)
@click.option("--eta", type=float, default=DEFAULT_ETA, show_default=True)
@click.option("--max-window", type=int, default=None, help="Largest dtw window (default: series length).")
@click.option("--epsilon-convention", type=click.Choice(EPSILON_CONVENTIONS), default="inclusive",
              show_default=True)
@click.option("--delta-normalization", type=click.Choice(DELTA_NORMALIZATIONS), default="unit", show_default=True)
@click.option("--dtw-cost", type=click.Choice(DTW_COSTS), default="squared", show_default=True)
@click.option("--delimiter", type=click.Choice(sorted(DELIMITERS)), default="tab", show_default=True)
@click.option("--zscore", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Result JSON (default: stdout).")
@click.option("--manifest", type=click.Path(dir_okay=False), default=None)
@reported
def tune(train_file, measure, eta, max_window, epsilon_convention, delta_normalization, dtw_cost, delimiter,
         zscore, out, manifest):
    """Leave-one-out search for the best epsilon set (mdd) or window (dtw)."""
    train, _, _ = load_pair(train_file, None, delimiter, zscore)
    if measure == "mdd":
        res = tune_mdd(train, eta, epsilon_convention, delta_normalization)
    else:
        res = tune_dtw(train, train.length if max_window is None else max_window, dtw_cost)
    result = res.to_dict()
    result["dataset"] = train.name
    write_json(result, out)
    if manifest:
        params = {"measure": measure, "eta": eta, "max_window": max_window,
                  "epsilon_convention": epsilon_convention, "delta_normalization": delta_normalization,
                  "dtw_cost": dtw_cost, "delimiter": delimiter, "zscore": zscore}
        write_json(build_manifest("tune", params, [train_file], [out] if out else []), manifest)


def read_accuracy_table(path) -> list[AccuracyRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in TABLE_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = []
        for i, rec in enumerate(reader, start=2):
            try:
                rows.append(AccuracyRow(rec["dataset"], *(float(rec[c]) for c in TABLE_COLUMNS[1:])))
            except (TypeError, ValueError):
                raise ValueError(f"{path}: line {i} is malformed") from None
    if not rows:
        raise ValueError(f"{path}: no rows")
    return rows


def _wins(rows: list[AccuracyRow]) -> dict | None:
    points = [p for p in sharpshooter(rows) if p.actual_gain > 1.0]
    try:
        ws = win_significance(points)
    except ValueError:
        return None
    return {"total": ws.total, "mean": ws.mean, "stddev": ws.stddev, "count": ws.count}


@main.command("eval")
@click.argument("table", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Sharpshooter CSV.")
@click.option("--summary", type=click.Path(dir_okay=False), default=None, help="Summary JSON (default: stdout).")
@click.option("--mu1-name", default="mdd", show_default=True)
@click.option("--mu2-name", default="dtw", show_default=True)
@click.option("--manifest", type=click.Path(dir_okay=False), default=None)
@reported
def eval_(table, out, summary, mu1_name, mu2_name, manifest):
    """Sharpshooter gains, regions, and win significance from an accuracy table."""
    rows = read_accuracy_table(table)
    points = sharpshooter(rows)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(SHARPSHOOTER_COLUMNS)
        for r, p in zip(rows, points):
            w.writerow([r.dataset] + [render_number(v) for v in (
                r.acc_expected_mu1, r.acc_expected_mu2, r.acc_actual_mu1, r.acc_actual_mu2,
                p.expected_gain, p.actual_gain)] + [p.region])
    result = {
        "mu1": mu1_name,
        "mu2": mu2_name,
        "regions": region_summary(points),
        f"win_{mu1_name}_{mu2_name}": _wins(rows),
        f"win_{mu2_name}_{mu1_name}": _wins([r.swapped() for r in rows]),
    }
    write_json(result, summary)
    if manifest:
        outputs = [out] + ([summary] if summary else [])
        write_json(build_manifest("eval", {"mu1_name": mu1_name, "mu2_name": mu2_name}, [table], outputs),
                   manifest)


@main.command()
@click.argument("which", type=click.Choice(["one", "two"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=DEFAULT_COUNT, show_default=True, help="Instances per class.")
@click.option("--train-fraction", type=float, default=DEFAULT_TRAIN_FRACTION, show_default=True)
@click.option("--length", type=int, default=DEFAULT_LENGTH, show_default=True)
@click.option("--periods", type=float, default=DEFAULT_PERIODS, show_default=True)
@click.option("--shift-mode", type=click.Choice(SHIFT_MODES), default="uniform", show_default=True)
@click.option("--delimiter", type=click.Choice(sorted(DELIMITERS)), default="tab", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True, help="Output directory.")
@click.option("--manifest", type=click.Path(dir_okay=False), default=None,
              help="Manifest path (default: OUT/<name>_manifest.json).")
@reported
def simulate(which, seed, count, train_fraction, length, periods, shift_mode, delimiter, out, manifest):
    """Write a simulated sine/cosine train/test pair in UCR format."""
    gen = simulation_one if which == "one" else simulation_two
    sim = gen(seed, count=count, train_fraction=train_fraction, length=length, periods=periods,
              shift_mode=shift_mode)
    out = Path(out)
    ext = ".tsv" if delimiter == "tab" else ".csv"
    paths = []
    for part in (sim.train, sim.test):
        p = out / f"{part.name}{ext}"
        save_ucr(part, p, delimiter)
        paths.append(p)
    params = {"which": which, "seed": seed, "count": count, "train_fraction": train_fraction, "length": length,
              "periods": periods, "shift_mode": shift_mode, "delimiter": delimiter, **sim.metadata()}
    manifest = manifest or out / f"{sim.train.name.rsplit('_', 1)[0]}_manifest.json"
    write_json(build_manifest("simulate", params, [], paths), manifest)
    for p in paths:
        click.echo(str(p))


if __name__ == "__main__":
    main()
