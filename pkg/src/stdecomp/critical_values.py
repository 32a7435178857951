"""Static critical-value tables for the unit-root and stationarity tests.

Dickey-Fuller tau values (Fuller 1976, Table 8.5.2) for the constant and
constant-plus-trend regressions, by sample size; ``inf`` is the asymptotic row.
KPSS values are the asymptotic ones of Kwiatkowski et al. (1992).
"""
import math

import numpy as np

LEVELS = ("1%", "5%", "10%")

_DF_SIZES = (25, 50, 100, 250, 500, math.inf)

DF_TAU = {
    "c": (
        (-3.75, -3.00, -2.63),
        (-3.58, -2.93, -2.60),
        (-3.51, -2.89, -2.58),
        (-3.46, -2.88, -2.57),
        (-3.44, -2.87, -2.57),
        (-3.43, -2.86, -2.57),
    ),
    "ct": (
        (-4.38, -3.60, -3.24),
        (-4.15, -3.50, -3.18),
        (-4.04, -3.45, -3.15),
        (-3.99, -3.43, -3.13),
        (-3.98, -3.42, -3.13),
        (-3.96, -3.41, -3.12),
    ),
}

KPSS = {
    "c": (0.739, 0.463, 0.347),
    "ct": (0.216, 0.146, 0.119),
}


def dickey_fuller(regression: str, nobs: int) -> dict:
    """Tau critical values, linear in ``1/nobs`` between tabulated sizes.

    Sizes below 25 use the 25-observation row.
    """
    table = np.array(DF_TAU[regression])
    inv = np.array([1.0 / s for s in _DF_SIZES])  # decreasing, last is 0
    x = 1.0 / max(nobs, _DF_SIZES[0])
    # np.interp needs increasing abscissae
    values = [float(np.interp(x, inv[::-1], table[::-1, k])) for k in range(3)]
    return dict(zip(LEVELS, values))


def kpss(regression: str) -> dict:
    return dict(zip(LEVELS, KPSS[regression]))
