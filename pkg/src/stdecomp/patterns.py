"""Pattern coding of seasonal cycles for similarity-based forecasting.

Input pattern of cycle ``i``: the cycle centered by its own mean and scaled by
its own diversity.  Output pattern for horizon ``tau``: cycle ``i + tau``
coded with the mean and diversity of cycle ``i``, because those are the only
coding variables known when forecasting.  A forecasted output pattern is
decoded with the same two numbers.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

import numpy as np

from .core import SeasonalGrid, SeriesLike, Variant, as_series, cycle_diversity, cycle_mean, split_cycles
from .errors import (
    AllZeroActuals,
    DegenerateCycleWarning,
    EmptyGroup,
    HorizonTooLarge,
    InconsistentLabels,
    KTooLarge,
)

__all__ = [
    "PatternPair",
    "PatternDataset",
    "ForecastResult",
    "ForecastError",
    "HoldoutResult",
    "encode_input_patterns",
    "encode_output_patterns",
    "cycle_labels",
    "build_dataset",
    "knn_forecast",
    "decode_forecast",
    "evaluate_forecast",
    "holdout_forecast",
]


def _coding(grid, variant):
    return cycle_mean(grid), cycle_diversity(grid, variant)


def encode_input_patterns(grid: SeasonalGrid, variant: Variant = Variant.DIVERSITY) -> np.ndarray:
    """K x n array of centered, normalised cycles; constant cycles become zero rows."""
    means, divs = _coding(grid, variant)
    zero = divs == 0
    if zero.any():
        warnings.warn(
            f"constant cycle(s) {np.flatnonzero(zero).tolist()}: input pattern zeroed",
            DegenerateCycleWarning,
            stacklevel=2,
        )
    safe = np.where(zero, 1.0, divs)
    out = (grid.rows - means[:, None]) / safe[:, None]
    out[zero] = 0.0
    return out


def encode_output_patterns(grid: SeasonalGrid, horizon: int, variant: Variant = Variant.DIVERSITY) -> np.ndarray:
    """(K - horizon) x n array; row ``i`` is cycle ``i + horizon`` coded with cycle ``i``.

    Rows whose coding cycle is constant cannot be coded and are NaN.
    """
    horizon = int(horizon)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    K = grid.cycles
    if horizon >= K:
        raise HorizonTooLarge(f"horizon {horizon} leaves no target cycle among {K}")
    means, divs = _coding(grid, variant)
    means, divs = means[: K - horizon], divs[: K - horizon]
    zero = divs == 0
    if zero.any():
        warnings.warn(
            f"constant coding cycle(s) {np.flatnonzero(zero).tolist()}: output pattern undefined",
            DegenerateCycleWarning,
            stacklevel=2,
        )
    safe = np.where(zero, 1.0, divs)
    out = (grid.rows[horizon:] - means[:, None]) / safe[:, None]
    out[zero] = np.nan
    return out


def decode_forecast(pattern, coding_mean: float, coding_dispersion: float) -> np.ndarray:
    if not coding_dispersion > 0:
        raise ValueError(f"coding dispersion must be positive, got {coding_dispersion}")
    return np.asarray(pattern, dtype=float) * coding_dispersion + coding_mean


@dataclass(frozen=True)
class PatternPair:
    input: np.ndarray
    output: np.ndarray
    coding_mean: float
    coding_dispersion: float
    cycle_index: int
    horizon: int
    group_label: Optional[Hashable] = None

    @property
    def target_index(self) -> int:
        return self.cycle_index + self.horizon


@dataclass(frozen=True)
class PatternDataset:
    """Training pairs keyed by the label of their output cycle.

    ``cycle_index`` values are zero-based cycle numbers in the source series.
    Without labels every pair sits in the single group ``None``.
    """

    pairs: tuple
    period: int
    horizon: int
    variant: Variant = Variant.DIVERSITY
    warnings: tuple = ()
    groups: dict = field(init=False)

    def __post_init__(self):
        groups = {}
        for idx, pair in enumerate(self.pairs):
            groups.setdefault(pair.group_label, []).append(idx)
        object.__setattr__(self, "groups", {k: tuple(v) for k, v in groups.items()})

    def __len__(self):
        return len(self.pairs)

    def group(self, label=None) -> tuple:
        if label is None and None not in self.groups:
            return self.pairs
        return tuple(self.pairs[i] for i in self.groups.get(label, ()))


def cycle_labels(grid: SeasonalGrid) -> Optional[list]:
    """One label per cycle; raises if a cycle carries more than one label."""
    if grid.labels is None:
        return None
    out = []
    for i, cyc in enumerate(grid.labels):
        distinct = set(cyc)
        if len(distinct) != 1:
            raise InconsistentLabels(f"cycle {i} spans labels {sorted(map(str, distinct))}")
        out.append(cyc[0])
    return out


def build_dataset(
    series: SeriesLike,
    period: int,
    horizon: int = 1,
    group_by: Optional[str] = None,
    variant: Variant = Variant.DIVERSITY,
    truncate: bool = False,
    last_target: Optional[int] = None,
) -> PatternDataset:
    """Pair every input pattern ``i`` with the output pattern for ``i + horizon``.

    ``group_by="labels"`` partitions pairs by the label of the output cycle
    (e.g. all Mondays), using the per-observation labels of ``series``.
    ``last_target`` (zero-based, exclusive) limits the output cycles used,
    which keeps held-out cycles out of training.  Pairs whose coding cycle is
    constant are dropped with a :class:`DegenerateCycleWarning`.
    """
    series = as_series(series)
    grid = split_cycles(series, period, truncate=truncate)
    horizon = int(horizon)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if horizon >= grid.cycles:
        raise HorizonTooLarge(f"horizon {horizon} leaves no target cycle among {grid.cycles}")
    labels = None
    if group_by is not None:
        if group_by != "labels":
            raise ValueError(f"group_by must be None or 'labels', got {group_by!r}")
        if series.labels is None:
            raise ValueError("grouping by labels requires a labelled series")
        labels = cycle_labels(grid)
    means, divs = _coding(grid, variant)
    inputs = grid.rows - means[:, None]
    end = grid.cycles if last_target is None else min(int(last_target), grid.cycles)
    pairs, skipped = [], []
    for i in range(0, end - horizon):
        if divs[i] == 0:
            skipped.append(i)
            continue
        pairs.append(
            PatternPair(
                input=inputs[i] / divs[i],
                output=(grid.rows[i + horizon] - means[i]) / divs[i],
                coding_mean=float(means[i]),
                coding_dispersion=float(divs[i]),
                cycle_index=i,
                horizon=horizon,
                group_label=None if labels is None else labels[i + horizon],
            )
        )
    notes = list(grid.warnings)
    if skipped:
        msg = f"constant coding cycle(s) {skipped}: pairs excluded"
        warnings.warn(msg, DegenerateCycleWarning, stacklevel=2)
        notes.append(msg)
    return PatternDataset(tuple(pairs), grid.period, horizon, Variant(variant), tuple(notes))


@dataclass(frozen=True)
class ForecastResult:
    predicted_pattern: np.ndarray
    predicted_sequence: np.ndarray
    neighbor_indices: tuple
    query_cycle: Optional[int]
    distances: tuple = ()


def knn_forecast(
    dataset: PatternDataset,
    query,
    k: int = 1,
    weighting: str = "uniform",
    group=None,
    coding_mean: float = 0.0,
    coding_dispersion: float = 1.0,
    query_cycle: Optional[int] = None,
) -> ForecastResult:
    """Average the output patterns of the ``k`` pairs whose inputs are closest to ``query``.

    Distance is Euclidean; equal distances go to the lower cycle index.
    ``weighting="inverse-distance"`` weights neighbours by ``1/d`` (an exact
    match takes all the weight).  The averaged pattern is decoded with
    ``coding_mean`` / ``coding_dispersion``, which should be those of the
    query cycle; the defaults leave the pattern as is.
    """
    if weighting not in ("uniform", "inverse-distance"):
        raise ValueError(f"unknown weighting {weighting!r}")
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    pool = dataset.group(group)
    if not pool:
        raise EmptyGroup(f"no training pairs for group {group!r}")
    if k > len(pool):
        warnings.warn(f"k={k} exceeds group size {len(pool)}; clamped", KTooLarge, stacklevel=2)
        k = len(pool)
    q = np.asarray(query, dtype=float)
    X = np.array([p.input for p in pool])
    if q.shape != X.shape[1:]:
        raise ValueError(f"query has shape {q.shape}, patterns have length {X.shape[1]}")
    cycles = np.array([p.cycle_index for p in pool])
    dist = np.sqrt(np.sum((X - q) ** 2, axis=1))
    order = np.lexsort((cycles, dist))[:k]
    Y = np.array([pool[i].output for i in order])
    d = dist[order]
    if weighting == "uniform":
        w = np.full(k, 1.0 / k)
    elif np.any(d == 0):
        w = (d == 0) / np.count_nonzero(d == 0)
    else:
        w = (1.0 / d) / np.sum(1.0 / d)
    pattern = w @ Y if k > 1 else Y[0].copy()
    return ForecastResult(
        predicted_pattern=pattern,
        predicted_sequence=decode_forecast(pattern, coding_mean, coding_dispersion),
        neighbor_indices=tuple(int(cycles[i]) for i in order),
        query_cycle=query_cycle,
        distances=tuple(float(x) for x in d),
    )


@dataclass(frozen=True)
class ForecastError:
    mape: float
    mae: float
    excluded: int


def evaluate_forecast(actual, predicted) -> ForecastError:
    """MAPE (percent, zero actuals skipped and counted) and MAE."""
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {p.shape}")
    keep = a != 0
    if not keep.any():
        raise AllZeroActuals("every actual value is zero; MAPE undefined")
    mape = float(np.mean(np.abs((a[keep] - p[keep]) / a[keep])) * 100.0)
    mae = float(np.mean(np.abs(a - p)))
    return ForecastError(mape, mae, int((~keep).sum()))


@dataclass(frozen=True)
class HoldoutResult:
    forecasts: tuple
    targets: tuple
    actual: np.ndarray
    predicted: np.ndarray
    naive: np.ndarray
    error: ForecastError
    naive_error: ForecastError
    dataset: PatternDataset


def holdout_forecast(
    series: SeriesLike,
    period: int,
    horizon: int = 1,
    holdout: int = 2,
    k: int = 3,
    weighting: str = "uniform",
    group_by: Optional[str] = None,
    variant: Variant = Variant.DIVERSITY,
    truncate: bool = False,
) -> HoldoutResult:
    """Forecast each of the last ``holdout`` cycles and score against the actuals.

    Training pairs only use output cycles before the holdout.  Each held-out
    cycle ``j`` is forecast from the observed cycle ``j - horizon``.  The
    naive reference decodes the query's own input pattern, i.e. repeats cycle
    ``j - horizon``.
    """
    series = as_series(series)
    grid = split_cycles(series, period, truncate=truncate)
    K = grid.cycles
    holdout = int(holdout)
    if not 1 <= holdout < K - horizon:
        raise ValueError(f"holdout must be in [1, {K - horizon - 1}], got {holdout}")
    first = K - holdout
    dataset = build_dataset(
        series, period, horizon, group_by=group_by, variant=variant,
        truncate=truncate, last_target=first,
    )
    means, divs = _coding(grid, variant)
    labels = cycle_labels(grid) if group_by else None
    forecasts = []
    for j in range(first, K):
        i = j - horizon
        if divs[i] == 0:
            raise ValueError(f"query cycle {i} is constant; cannot decode a forecast")
        query = (grid.rows[i] - means[i]) / divs[i]
        forecasts.append(
            knn_forecast(
                dataset, query, k=k, weighting=weighting,
                group=None if labels is None else labels[j],
                coding_mean=means[i], coding_dispersion=divs[i], query_cycle=i,
            )
        )
    actual = grid.rows[first:]
    predicted = np.array([f.predicted_sequence for f in forecasts])
    naive = grid.rows[first - horizon:K - horizon]
    return HoldoutResult(
        forecasts=tuple(forecasts),
        targets=tuple(range(first, K)),
        actual=actual,
        predicted=predicted,
        naive=naive,
        error=evaluate_forecast(actual, predicted),
        naive_error=evaluate_forecast(actual, naive),
        dataset=dataset,
    )
