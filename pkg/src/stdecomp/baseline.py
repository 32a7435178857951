"""Classical additive / multiplicative decomposition with a moving-average trend."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import SeriesLike, as_series
from .errors import NonPositiveSeries, SeriesTooShort

__all__ = ["Mode", "ClassicalComponents", "moving_average_trend", "classical_decompose"]


class Mode(str, enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class ClassicalComponents:
    """Trend and remainder are masked arrays; the first and last ``period // 2``
    positions have no trend estimate.
    """

    series: np.ndarray
    trend: np.ma.MaskedArray
    seasonal: np.ndarray
    remainder: np.ma.MaskedArray
    pattern: np.ndarray
    period: int
    mode: Mode


def _ma_weights(period):
    if period % 2 == 0:
        # 2 x n moving average: half weight on the two end points
        w = np.r_[0.5, np.ones(period - 1), 0.5]
    else:
        w = np.ones(period)
    return w / period


def moving_average_trend(series: SeriesLike, period: int) -> np.ma.MaskedArray:
    """Centered moving average of order ``period`` (2 x ``period`` when even)."""
    y = as_series(series).values
    period = int(period)
    if period < 2:
        raise ValueError(f"period must be >= 2, got {period}")
    N = y.size
    if N < period + 1:
        raise SeriesTooShort(f"moving average of order {period} needs {period + 1} observations, got {N}")
    w = _ma_weights(period)
    half = period // 2
    trend = np.full(N, np.nan)
    trend[half:N - half] = np.correlate(y, w, mode="valid")
    mask = np.zeros(N, dtype=bool)
    mask[:half] = True
    mask[N - half:] = True
    return np.ma.MaskedArray(trend, mask=mask)


def classical_decompose(series: SeriesLike, period: int, mode: Mode = Mode.ADDITIVE) -> ClassicalComponents:
    """Moving-average trend, constant seasonal pattern, closing remainder.

    The seasonal pattern is the per-position mean of the detrended series over
    all positions where the trend is defined, normalised to sum to zero
    (additive) or average to one (multiplicative).  Positions are counted from
    the first observation, which is taken to open a cycle.
    """
    mode = Mode(mode)
    y = as_series(series).values
    if mode is Mode.MULTIPLICATIVE and np.any(y <= 0):
        raise NonPositiveSeries("multiplicative decomposition needs a strictly positive series")
    trend = moving_average_trend(y, period)
    N = y.size
    valid = ~np.ma.getmaskarray(trend)
    t = trend.filled(np.nan)
    if mode is Mode.ADDITIVE:
        detrended = y - t
    else:
        detrended = y / t
    position = np.arange(N) % period
    covered = np.unique(position[valid])
    if covered.size < period:
        raise SeriesTooShort(
            f"only {covered.size} of {period} cycle positions have a trend estimate; "
            "the seasonal pattern needs every position covered"
        )
    pattern = np.array([detrended[valid & (position == j)].mean() for j in range(period)])
    if mode is Mode.ADDITIVE:
        pattern = pattern - pattern.mean()
    else:
        pattern = pattern / pattern.mean()
    seasonal = pattern[position]
    if mode is Mode.ADDITIVE:
        remainder = y - t - seasonal
    else:
        remainder = y / (t * seasonal)
    return ClassicalComponents(
        series=y.copy(),
        trend=trend,
        seasonal=seasonal,
        remainder=np.ma.MaskedArray(remainder, mask=~valid),
        pattern=pattern,
        period=int(period),
        mode=mode,
    )
