"""Synthetic series: the Mackey-Glass delay equation and simple stochastic processes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import TimeSeries
from .errors import UnstableIntegration

__all__ = ["MackeyGlassConfig", "gen_mackey_glass", "gen_test_process", "PROCESS_KINDS"]

_DIVIDE_TOL = 1e-12
_BLOWUP = 1e6


def _steps(span, step, what):
    m = round(span / step)
    if m < 1 or abs(m * step - span) > _DIVIDE_TOL * max(1.0, abs(span)):
        raise ValueError(f"integration step {step} does not divide {what} {span}")
    return int(m)


@dataclass(frozen=True)
class MackeyGlassConfig:
    """Parameters of ``dx/dt = a x(t - delay) / (1 + x(t - delay)^10) - b x(t)``.

    ``x(t) = x0`` for ``t <= 0``.  Samples are taken at
    ``t = sample_every, 2 sample_every, ...``; the first ``discard`` of them are
    dropped and the next ``length`` returned, so the defaults with
    ``length=970`` cover ``t = 101 .. 1070``.
    """

    a: float = 0.2
    b: float = 0.1
    delay: float = 17.0
    x0: float = 1.2
    integration_step: float = 0.1
    sample_every: float = 1.0
    discard: int = 100
    length: int = 970

    def __post_init__(self):
        for name in ("a", "b", "delay", "x0", "integration_step", "sample_every"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.integration_step <= 0 or self.sample_every <= 0:
            raise ValueError("integration_step and sample_every must be positive")
        if self.delay <= 0:
            raise ValueError("delay must be positive")
        if self.length < 1 or self.discard < 0:
            raise ValueError("length must be >= 1 and discard >= 0")
        _steps(self.sample_every, self.integration_step, "sample_every")
        _steps(self.delay, self.integration_step, "delay")


def gen_mackey_glass(config: Optional[MackeyGlassConfig] = None) -> TimeSeries:
    """Integrate the Mackey-Glass equation with fixed-step RK4.

    The delayed state at grid times is read from the stored trajectory; at the
    half-step it is the average of the two neighbouring grid values.
    """
    cfg = config or MackeyGlassConfig()
    h = cfg.integration_step
    per_sample = _steps(cfg.sample_every, h, "sample_every")
    d = _steps(cfg.delay, h, "delay")
    a, b, x0 = cfg.a, cfg.b, cfg.x0
    total = (cfg.discard + cfg.length) * per_sample

    def rhs(x, xd):
        return a * xd / (1.0 + xd ** 10) - b * x

    x = [x0] * (total + 1)
    for k in range(total):
        lo = x[k - d] if k - d >= 0 else x0
        hi = x[k + 1 - d] if k + 1 - d >= 0 else x0
        mid = 0.5 * (lo + hi)
        xk = x[k]
        k1 = rhs(xk, lo)
        k2 = rhs(xk + 0.5 * h * k1, mid)
        k3 = rhs(xk + 0.5 * h * k2, mid)
        k4 = rhs(xk + h * k3, hi)
        nxt = xk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(nxt) or abs(nxt) > _BLOWUP:
            raise UnstableIntegration(f"|x| exceeded {_BLOWUP:g} at t={(k + 1) * h:g}")
        x[k + 1] = nxt
    samples = np.array(x[per_sample::per_sample])[cfg.discard:]
    return TimeSeries(samples, name="mackey-glass")


PROCESS_KINDS = ("white_noise", "random_walk", "ar1")


def gen_test_process(kind: str, length: int, seed: int, phi: float = 0.0) -> TimeSeries:
    """Standard-normal white noise, its cumulative sum, or an AR(1) driven by it.

    The AR(1) recursion ``x_t = phi x_{t-1} + e_t`` starts from ``x_0 = 0``,
    so ``phi=0`` reproduces the white noise of the same seed.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    e = np.random.default_rng(seed).standard_normal(int(length))
    if kind == "white_noise":
        out = e
    elif kind == "random_walk":
        out = np.cumsum(e)
    elif kind == "ar1":
        out = np.empty_like(e)
        prev = 0.0
        for t, et in enumerate(e):
            prev = phi * prev + et
            out[t] = prev
    else:
        raise ValueError(f"kind must be one of {PROCESS_KINDS}, got {kind!r}")
    return TimeSeries(out, name=kind)
