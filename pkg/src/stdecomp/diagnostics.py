"""Remainder diagnostics: remainder-to-series ratio, correlograms, unit-root tests."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import critical_values
from .errors import AllZeroSeries, SeriesTooShort, ZeroVariance

__all__ = [
    "RatioSummary",
    "CorrelogramResult",
    "Conclusion",
    "StationarityVerdict",
    "DiagnosticsReport",
    "remainder_ratio",
    "acf",
    "pacf",
    "adf_test",
    "kpss_test",
    "pp_test",
    "stationarity_report",
    "newey_west",
]

MIN_TEST_LENGTH = 20


@dataclass(frozen=True)
class RatioSummary:
    """``|R_t / y_t| * 100`` over positions with ``y_t != 0``."""

    ratios: np.ndarray
    positions: np.ndarray
    median: float
    iqr: float
    excluded: int


def remainder_ratio(remainder, series) -> RatioSummary:
    """Percent ratio of remainder to series, summarised by median and IQR.

    Quantiles use linear interpolation between order statistics (the
    ``h = (m - 1) p`` rule).  Positions where the series is exactly zero are
    left out and counted in ``excluded``.
    """
    r = np.asarray(remainder, dtype=float)
    y = np.asarray(series, dtype=float)
    if r.shape != y.shape:
        raise ValueError(f"remainder and series lengths differ: {r.size} vs {y.size}")
    keep = y != 0
    if not keep.any():
        raise AllZeroSeries("every observation is zero; ratio undefined")
    ratios = np.abs(r[keep] / y[keep]) * 100.0
    q1, med, q3 = np.percentile(ratios, [25, 50, 75], method="linear")
    return RatioSummary(
        ratios=ratios,
        positions=np.flatnonzero(keep),
        median=float(med),
        iqr=float(q3 - q1),
        excluded=int((~keep).sum()),
    )


@dataclass(frozen=True)
class CorrelogramResult:
    lags: np.ndarray
    values: np.ndarray
    conf_band: float
    kind: str = "acf"

    def significant(self) -> np.ndarray:
        """Lags (excluding 0) whose value lies outside the confidence band."""
        out = np.abs(self.values) > self.conf_band
        out[0] = False
        return self.lags[out]


def _check_correlogram_input(series, max_lag):
    x = np.asarray(series, dtype=float)
    max_lag = int(max_lag)
    if max_lag < 0 or max_lag >= x.size:
        raise ValueError(f"max_lag must be in [0, {x.size - 1}], got {max_lag}")
    d = x - x.mean()
    denom = d @ d
    if denom == 0 or np.all(x == x[0]):
        raise ZeroVariance("series is constant; autocorrelation undefined")
    return d, denom, max_lag


def _acf_values(d, denom, max_lag):
    N = d.size
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = (d[: N - k] @ d[k:]) / denom
    return out


def acf(series, max_lag: int) -> CorrelogramResult:
    """Sample autocorrelation ``r_k = sum (y_t - m)(y_{t+k} - m) / sum (y_t - m)^2``."""
    d, denom, max_lag = _check_correlogram_input(series, max_lag)
    return CorrelogramResult(
        lags=np.arange(max_lag + 1),
        values=_acf_values(d, denom, max_lag),
        conf_band=1.96 / math.sqrt(d.size),
        kind="acf",
    )


def pacf(series, max_lag: int) -> CorrelogramResult:
    """Partial autocorrelation by the Durbin-Levinson recursion on the sample ACF."""
    d, denom, max_lag = _check_correlogram_input(series, max_lag)
    r = _acf_values(d, denom, max_lag)
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    phi = np.zeros(0)
    v = 1.0
    for k in range(1, max_lag + 1):
        if v <= 0:
            out[k:] = 0.0
            break
        phi_kk = (r[k] - phi @ r[k - 1:0:-1]) / v
        phi = np.concatenate([phi - phi_kk * phi[::-1], [phi_kk]])
        v *= 1.0 - phi_kk * phi_kk
        out[k] = phi_kk
    return CorrelogramResult(
        lags=np.arange(max_lag + 1),
        values=out,
        conf_band=1.96 / math.sqrt(d.size),
        kind="pacf",
    )


class Conclusion(str, enum.Enum):
    STATIONARY_AT_1PCT = "stationary_at_1pct"
    NOT_STATIONARY = "not_stationary"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StationarityVerdict:
    """Outcome of one unit-root or stationarity test.

    ``conclusion`` is decided at the 1% level.  For ADF and PP (null: unit
    root) the series is called stationary when the statistic is below the 1%
    critical value.  KPSS has the opposite polarity (null: stationarity) and
    calls the series stationary when the statistic stays below the 10% value.
    A statistic between the 1% and 10% values is ``INCONCLUSIVE``.
    """

    test: str
    statistic: float
    critical_values: dict
    conclusion: Conclusion
    regression: str
    lags_or_bandwidth: int
    nobs: int

    @property
    def null_is_unit_root(self) -> bool:
        return self.test in ("ADF", "PP")

    def rejects_null(self, level: str = "1%") -> bool:
        cv = self.critical_values[level]
        if self.null_is_unit_root:
            return self.statistic < cv
        return self.statistic > cv

    def stationary_at(self, level: str = "1%") -> bool:
        """Whether the test supports stationarity at ``level``."""
        rejected = self.rejects_null(level)
        return rejected if self.null_is_unit_root else not rejected


def _conclude(test, stat, cvs):
    c1, c10 = cvs["1%"], cvs["10%"]
    if test in ("ADF", "PP"):
        if stat < c1:
            return Conclusion.STATIONARY_AT_1PCT
        if stat < c10:
            return Conclusion.INCONCLUSIVE
        return Conclusion.NOT_STATIONARY
    if stat < c10:
        return Conclusion.STATIONARY_AT_1PCT
    if stat < c1:
        return Conclusion.INCONCLUSIVE
    return Conclusion.NOT_STATIONARY


def _check_test_input(series, regression):
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if y.size < MIN_TEST_LENGTH:
        raise SeriesTooShort(
            f"stationarity tests need at least {MIN_TEST_LENGTH} observations, got {y.size}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("series must be finite")
    if regression not in ("c", "ct"):
        raise ValueError(f"regression must be 'c' or 'ct', got {regression!r}")
    return y


def _deterministic(nobs, regression, start=1):
    cols = [np.ones(nobs)]
    if regression == "ct":
        cols.append(np.arange(start, start + nobs, dtype=float))
    return np.column_stack(cols)


def _ols(X, z):
    """Coefficients, residuals and coefficient standard errors."""
    q, r = np.linalg.qr(X)
    beta = np.linalg.solve(r, q.T @ z)
    resid = z - X @ beta
    dof = X.shape[0] - X.shape[1]
    s2 = resid @ resid / dof
    rinv = np.linalg.inv(r)
    se = np.sqrt(s2 * np.sum(rinv * rinv, axis=1))
    return beta, resid, se


def newey_west(u, bandwidth: int) -> float:
    """Long-run variance of ``u`` with Bartlett weights ``1 - l / (bandwidth + 1)``."""
    u = np.asarray(u, dtype=float)
    n = u.size
    s = u @ u / n
    for lag in range(1, int(bandwidth) + 1):
        w = 1.0 - lag / (bandwidth + 1.0)
        s += 2.0 * w * (u[lag:] @ u[:-lag]) / n
    return float(s)


def _schwert_cap(nobs, coef):
    return int(math.floor(coef * (nobs / 100.0) ** 0.25))


def _adf_design(y, lags, regression, start):
    """Regression matrix for ``dy_t`` on ``y_{t-1}``, lagged differences and deterministics.

    Rows begin at difference index ``start`` (>= ``lags``) so different lag
    orders can share one estimation sample.
    """
    dy = np.diff(y)
    rows = np.arange(start, dy.size)
    cols = [y[rows]]
    for k in range(1, lags + 1):
        cols.append(dy[rows - k])
    X = np.column_stack(cols + [_deterministic(rows.size, regression, start + 1)])
    return X, dy[rows]


def adf_test(
    series,
    regression: str = "c",
    max_lag: Union[int, str] = "auto",
    autolag: Optional[str] = "aic",
) -> StationarityVerdict:
    """Augmented Dickey-Fuller test of a unit root.

    ``max_lag="auto"`` caps the augmentation at ``floor(12 (N/100)^(1/4))``.
    With ``autolag="aic"`` the lag order in ``[0, max_lag]`` minimising AIC on
    a common sample is chosen and the regression is refitted on all usable
    observations at that order; ``autolag=None`` uses ``max_lag`` directly.
    """
    y = _check_test_input(series, regression)
    N = y.size
    ntrend = 1 if regression == "c" else 2
    if max_lag == "auto":
        max_lag = min(_schwert_cap(N, 12), N // 2 - ntrend - 1)
    max_lag = int(max_lag)
    if max_lag < 0 or N - 1 - max_lag <= max_lag + ntrend + 2:
        raise SeriesTooShort(f"{N} observations cannot support {max_lag} lags")
    lags = max_lag
    if autolag is not None:
        if autolag.lower() != "aic":
            raise ValueError(f"unsupported autolag {autolag!r}")
        best = None
        for p in range(max_lag + 1):
            X, z = _adf_design(y, p, regression, max_lag)
            _, resid, _ = _ols(X, z)
            nobs = z.size
            aic = nobs * math.log(resid @ resid / nobs) + 2 * X.shape[1]
            if best is None or aic < best[0]:
                best = (aic, p)
        lags = best[1]
    X, z = _adf_design(y, lags, regression, lags)
    beta, _, se = _ols(X, z)
    stat = float(beta[0] / se[0])
    cvs = critical_values.dickey_fuller(regression, z.size)
    return StationarityVerdict("ADF", stat, cvs, _conclude("ADF", stat, cvs),
                               regression, lags, z.size)


def _bandwidth(N, bandwidth):
    if bandwidth == "auto":
        return _schwert_cap(N, 4)
    bandwidth = int(bandwidth)
    if bandwidth < 0:
        raise ValueError("bandwidth must be non-negative")
    return bandwidth


def kpss_test(series, regression: str = "c", bandwidth: Union[int, str] = "auto"):
    """KPSS test of level (``"c"``) or trend (``"ct"``) stationarity.

    The statistic is ``sum(S_t^2) / (N^2 * lrv)`` with ``S_t`` the partial sums
    of the detrended series and ``lrv`` its Newey-West long-run variance.
    """
    y = _check_test_input(series, regression)
    N = y.size
    L = _bandwidth(N, bandwidth)
    X = _deterministic(N, regression)
    beta = np.linalg.lstsq(X, y, rcond=None)[0]
    u = y - X @ beta
    lrv = newey_west(u, L)
    if lrv <= 0:
        raise ZeroVariance("long-run variance is not positive")
    s = np.cumsum(u)
    stat = float(s @ s / (N * N * lrv))
    cvs = critical_values.kpss(regression)
    return StationarityVerdict("KPSS", stat, cvs, _conclude("KPSS", stat, cvs),
                               regression, L, N)


def pp_test(series, regression: str = "c", bandwidth: Union[int, str] = "auto"):
    """Phillips-Perron Z_t test of a unit root.

    Runs the Dickey-Fuller regression ``y_t = rho y_{t-1} + deterministics``
    and corrects the t-ratio of ``rho - 1`` for serial correlation using the
    Newey-West long-run variance of the residuals (bandwidth
    ``floor(4 (N/100)^(1/4))`` by default).  Critical values are the ADF ones.
    """
    y = _check_test_input(series, regression)
    N = y.size
    L = _bandwidth(N, bandwidth)
    z = y[1:]
    X = np.column_stack([y[:-1], _deterministic(N - 1, regression, 2)])
    beta, u, se = _ols(X, z)
    n, k = X.shape
    s2 = u @ u / (n - k)
    gamma0 = u @ u / n
    lam2 = newey_west(u, L)
    lam = math.sqrt(lam2)
    t_rho = (beta[0] - 1.0) / se[0]
    stat = float(
        math.sqrt(gamma0 / lam2) * t_rho
        - 0.5 * ((lam2 - gamma0) / lam) * (n * se[0] / math.sqrt(s2))
    )
    cvs = critical_values.dickey_fuller(regression, n)
    return StationarityVerdict("PP", stat, cvs, _conclude("PP", stat, cvs),
                               regression, L, n)


@dataclass(frozen=True)
class DiagnosticsReport:
    adf: StationarityVerdict
    kpss: StationarityVerdict
    pp: StationarityVerdict
    ratio: Optional[RatioSummary]
    acf: Optional[CorrelogramResult] = None
    pacf: Optional[CorrelogramResult] = None

    @property
    def verdicts(self):
        return (self.adf, self.kpss, self.pp)

    def all_stationary(self, level: str = "1%") -> bool:
        return all(v.stationary_at(level) for v in self.verdicts)


def stationarity_report(remainder, series=None, max_lag: Optional[int] = None):
    """Run ADF, KPSS and PP with default settings on a remainder.

    ``series`` (the decomposed observations) enables the ratio summary.
    ``max_lag`` sets the correlogram depth, ``min(10 log10 N, N - 1)`` by
    default; correlograms are skipped for a constant remainder.
    """
    r = np.asarray(remainder, dtype=float)
    ratio = None if series is None else remainder_ratio(r, series)
    if max_lag is None:
        max_lag = int(min(10 * math.log10(r.size), r.size - 1))
    try:
        a, p = acf(r, max_lag), pacf(r, max_lag)
    except ZeroVariance:
        a = p = None
    return DiagnosticsReport(
        adf=adf_test(r), kpss=kpss_test(r), pp=pp_test(r), ratio=ratio, acf=a, pacf=p
    )
