"""Seasonal-trend-dispersion decomposition (STD) and its remainder variant (STDR).

A series whose length is a multiple of the seasonal period ``n`` is cut into
``K`` consecutive cycles.  Each cycle contributes one trend level (its mean)
and one dispersion level (its diversity); the seasonal component is the cycle
centered by the former and scaled by the latter::

    y_t = S_t * D_t + T_t                   (STD)
    y_t = S'_t * D_t + T_t + R_t            (STDR)

where ``S'`` repeats the cycle-averaged seasonal pattern and ``R`` closes the
identity.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    DegenerateCycleWarning,
    LengthNotMultiple,
    PeriodTooLarge,
    SingleCycleWarning,
    TruncationWarning,
)

__all__ = [
    "Variant",
    "TimeSeries",
    "SeasonalGrid",
    "StdComponents",
    "StdrComponents",
    "as_series",
    "split_cycles",
    "cycle_mean",
    "cycle_diversity",
    "trend_component",
    "dispersion_component",
    "seasonal_component",
    "decompose_std",
    "average_seasonal_pattern",
    "decompose_stdr",
    "reconstruct",
]


class Variant(str, enum.Enum):
    """Dispersion measure used for the diversity of a cycle.

    ``DIVERSITY`` is the root sum of squared deviations from the cycle mean,
    which makes every seasonal pattern unit-norm.  ``STDDEV`` divides it by
    ``sqrt(n)``.  ``APPENDIX`` is the sample standard deviation times
    ``sqrt(n)``, as some reference scripts compute it.  It exceeds
    ``DIVERSITY`` by ``sqrt(n / (n - 1))`` and exists for cross-checking only.
    """

    DIVERSITY = "diversity"
    STDDEV = "stddev"
    APPENDIX = "appendix"


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Observations ``y_1..y_N`` with optional per-observation cycle labels."""

    values: np.ndarray
    labels: Optional[tuple] = None
    name: str = ""
    units: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if values.size == 0:
            raise ValueError("values must be non-empty")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite (no NaN/Inf)")
        object.__setattr__(self, "values", _frozen(values))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != values.size:
                raise ValueError(
                    f"labels has length {len(labels)}, values has length {values.size}"
                )
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.values.size

    def head(self, length: int) -> "TimeSeries":
        labels = None if self.labels is None else self.labels[:length]
        return TimeSeries(self.values[:length], labels, self.name, self.units)


SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]


def as_series(series: SeriesLike) -> TimeSeries:
    if isinstance(series, TimeSeries):
        return series
    return TimeSeries(np.asarray(series, dtype=float))


@dataclass(frozen=True)
class SeasonalGrid:
    """A series reshaped to ``K`` rows (cycles) of ``n`` columns (cycle positions).

    Row ``i``, column ``j`` holds the observation at global index ``n*i + j``
    (zero-based).  ``labels`` is reshaped the same way when present.
    """

    rows: np.ndarray
    labels: Optional[tuple] = None
    truncated: int = 0
    warnings: tuple = ()

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] < 2 or rows.shape[0] < 1:
            raise ValueError("rows must be a K x n array with K >= 1 and n >= 2")
        object.__setattr__(self, "rows", _frozen(rows))

    @property
    def period(self) -> int:
        return self.rows.shape[1]

    @property
    def cycles(self) -> int:
        return self.rows.shape[0]

    def flatten(self) -> np.ndarray:
        return self.rows.ravel()


def split_cycles(
    series: SeriesLike, period: int, truncate: bool = False, min_cycles: int = 2
) -> SeasonalGrid:
    """Cut ``series`` into consecutive cycles of length ``period``.

    With ``truncate=True`` the trailing ``N mod period`` observations (the
    newest, incomplete cycle) are dropped and a :class:`TruncationWarning` is
    issued; otherwise a length that is not a multiple raises
    :class:`LengthNotMultiple`.
    """
    series = as_series(series)
    period = int(period)
    if period < 2:
        raise ValueError(f"period must be >= 2, got {period}")
    N = len(series)
    notes = []
    extra = N % period
    if extra:
        if not truncate:
            raise LengthNotMultiple(
                f"series length {N} is not a multiple of period {period} "
                f"({extra} trailing observations); enable truncation to drop them"
            )
        msg = f"dropped {extra} trailing observations to fit period {period}"
        warnings.warn(msg, TruncationWarning, stacklevel=2)
        notes.append(msg)
        series = series.head(N - extra)
    K = len(series) // period
    if K < min_cycles:
        raise PeriodTooLarge(
            f"period {period} leaves {K} complete cycle(s) in a series of length {N}; "
            f"at least {min_cycles} required"
        )
    labels = None
    if series.labels is not None:
        labels = tuple(
            series.labels[i * period:(i + 1) * period] for i in range(K)
        )
    return SeasonalGrid(
        series.values.reshape(K, period), labels, truncated=extra, warnings=tuple(notes)
    )


def _constant_rows(rows: np.ndarray) -> np.ndarray:
    return np.all(rows == rows[:, :1], axis=1)


def cycle_mean(grid: SeasonalGrid) -> np.ndarray:
    """Per-cycle averages; constant cycles return their value exactly."""
    rows = grid.rows
    means = rows.mean(axis=1)
    return np.where(_constant_rows(rows), rows[:, 0], means)


def cycle_diversity(grid: SeasonalGrid, variant: Variant = Variant.DIVERSITY) -> np.ndarray:
    """Per-cycle dispersion: root sum of squared deviations, or a rescaling of it."""
    variant = Variant(variant)
    rows = grid.rows
    n = grid.period
    constant = _constant_rows(rows)
    dev = rows - cycle_mean(grid)[:, None]
    if variant is Variant.APPENDIX:
        # literal port of `std(yy) * n^0.5`
        div = np.std(rows, axis=1, ddof=1) * n ** 0.5
    else:
        div = np.sqrt(np.sum(dev * dev, axis=1))
        if variant is Variant.STDDEV:
            div = div / np.sqrt(n)
    return np.where(constant, 0.0, div)


def trend_component(means, period: int) -> np.ndarray:
    return np.repeat(np.asarray(means, dtype=float), int(period))


def dispersion_component(diversities, period: int) -> np.ndarray:
    return np.repeat(np.asarray(diversities, dtype=float), int(period))


def _seasonal(y, trend, dispersion):
    y = np.asarray(y, dtype=float)
    trend = np.asarray(trend, dtype=float)
    dispersion = np.asarray(dispersion, dtype=float)
    if not (y.shape == trend.shape == dispersion.shape):
        raise ValueError("series, trend and dispersion must have equal lengths")
    if np.any(dispersion < 0):
        raise ValueError("dispersion must be non-negative")
    zero = dispersion == 0
    safe = np.where(zero, 1.0, dispersion)
    return np.where(zero, 0.0, (y - trend) / safe), zero


def seasonal_component(series: SeriesLike, trend, dispersion) -> np.ndarray:
    """``(y - T) / D``, with zeros where ``D == 0``.

    Zero-dispersion positions only arise from constant cycles, where ``y == T``
    and the zero keeps ``S * D + T == y`` exact.
    """
    y = as_series(series).values
    seasonal, zero = _seasonal(y, trend, dispersion)
    if zero.any():
        warnings.warn(
            f"zero dispersion at {int(zero.sum())} position(s); seasonal set to 0 there",
            DegenerateCycleWarning,
            stacklevel=2,
        )
    return seasonal


@dataclass(frozen=True)
class StdComponents:
    """Output of :func:`decompose_std`: ``series == seasonal * dispersion + trend``."""

    series: np.ndarray
    trend: np.ndarray
    dispersion: np.ndarray
    seasonal: np.ndarray
    period: int
    variant: Variant
    degenerate_cycles: tuple = ()
    warnings: tuple = ()

    mode = "std"

    def __post_init__(self):
        for name in ("series", "trend", "dispersion", "seasonal"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def __len__(self):
        return self.series.size

    @property
    def cycles(self) -> int:
        return self.series.size // self.period

    @property
    def cycle_means(self) -> np.ndarray:
        return self.trend[:: self.period].copy()

    @property
    def cycle_dispersions(self) -> np.ndarray:
        return self.dispersion[:: self.period].copy()

    def seasonal_patterns(self) -> np.ndarray:
        """The seasonal component as a K x n array, one pattern per cycle."""
        return self.seasonal.reshape(self.cycles, self.period)


@dataclass(frozen=True)
class StdrComponents(StdComponents):
    """Output of :func:`decompose_stdr`.

    ``series == seasonal_avg * dispersion + trend + remainder``; ``seasonal``
    still holds the per-cycle patterns of the plain STD.
    """

    seasonal_avg: np.ndarray = field(default=None)
    remainder: np.ndarray = field(default=None)
    avg_pattern: np.ndarray = field(default=None)

    mode = "stdr"

    def __post_init__(self):
        super().__post_init__()
        for name in ("seasonal_avg", "remainder", "avg_pattern"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))


def _std_parts(series, period, variant, truncate, min_cycles):
    series = as_series(series)
    grid = split_cycles(series, period, truncate=truncate, min_cycles=min_cycles)
    notes = list(grid.warnings)
    if grid.cycles == 1:
        msg = "single seasonal cycle: trend and dispersion are constant"
        warnings.warn(msg, SingleCycleWarning, stacklevel=3)
        notes.append(msg)
    n = grid.period
    means = cycle_mean(grid)
    divs = cycle_diversity(grid, variant)
    trend = trend_component(means, n)
    dispersion = dispersion_component(divs, n)
    y = grid.flatten()
    seasonal, _ = _seasonal(y, trend, dispersion)
    degenerate = tuple(int(i) for i in np.flatnonzero(divs == 0))
    if degenerate:
        msg = f"constant cycle(s) {list(degenerate)}: seasonal pattern set to zero"
        warnings.warn(msg, DegenerateCycleWarning, stacklevel=3)
        notes.append(msg)
    return dict(
        series=y,
        trend=trend,
        dispersion=dispersion,
        seasonal=seasonal,
        period=n,
        variant=Variant(variant),
        degenerate_cycles=degenerate,
        warnings=tuple(notes),
    )


def decompose_std(
    series: SeriesLike,
    period: int,
    variant: Variant = Variant.DIVERSITY,
    truncate: bool = False,
) -> StdComponents:
    """Split a series into trend, dispersion and seasonal components.

    Parameters
    ----------
    series : TimeSeries or array-like
        Observations; the length must be a multiple of ``period`` unless
        ``truncate`` is set.
    period : int
        Seasonal period ``n >= 2``.
    variant : Variant
        Dispersion measure; see :class:`Variant`.
    truncate : bool
        Drop an incomplete trailing cycle instead of raising.

    Returns
    -------
    StdComponents
        A single-cycle series is accepted with a :class:`SingleCycleWarning`.
    """
    return StdComponents(**_std_parts(series, period, variant, truncate, 1))


def average_seasonal_pattern(seasonal, period: int) -> np.ndarray:
    seasonal = np.asarray(seasonal, dtype=float)
    period = int(period)
    if seasonal.size % period:
        raise LengthNotMultiple(
            f"seasonal length {seasonal.size} is not a multiple of period {period}"
        )
    return seasonal.reshape(-1, period).mean(axis=0)


def decompose_stdr(
    series: SeriesLike,
    period: int,
    variant: Variant = Variant.DIVERSITY,
    truncate: bool = False,
) -> StdrComponents:
    """STD followed by averaging the seasonal patterns into one shared pattern.

    Requires at least two cycles.  The remainder is
    ``y - (seasonal_avg * dispersion + trend)`` and sums to zero over every
    cycle.
    """
    parts = _std_parts(series, period, variant, truncate, 2)
    n = parts["period"]
    K = parts["series"].size // n
    avg = average_seasonal_pattern(parts["seasonal"], n)
    seasonal_avg = np.tile(avg, K)
    remainder = parts["series"] - (seasonal_avg * parts["dispersion"] + parts["trend"])
    return StdrComponents(
        **parts, seasonal_avg=seasonal_avg, remainder=remainder, avg_pattern=avg
    )


def reconstruct(components: StdComponents) -> np.ndarray:
    if isinstance(components, StdrComponents):
        return (
            components.seasonal_avg * components.dispersion
            + components.trend
            + components.remainder
        )
    return components.seasonal * components.dispersion + components.trend
