"""Random test series: trend + heteroscedastic seasonality + noise."""
import numpy as np


def mixed_series(rng, n, K, positive=False):
    t = np.arange(n * K)
    level = rng.uniform(-50, 50) if not positive else rng.uniform(50, 200)
    slope = rng.normal(0, 0.5)
    trend = level + slope * t + rng.normal(0, 2) * np.sin(2 * np.pi * t / max(len(t), 1))
    amp = rng.uniform(0.5, 10) * (1 + rng.uniform(0, 2) * t / len(t))
    shape = rng.normal(size=n)
    seasonal = amp * np.tile(shape, K)
    noise = rng.normal(0, rng.uniform(0.01, 3), size=len(t))
    y = trend + seasonal + noise
    if positive:
        y = np.abs(y) + 1.0
    return y


def random_cases(seed, count, periods=range(2, 25), cycles=range(2, 51), positive=False):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.choice(list(periods)))
        K = int(rng.choice(list(cycles)))
        yield n, mixed_series(rng, n, K, positive=positive)
