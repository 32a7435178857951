import math

import numpy as np
import pytest

from stdecomp import MackeyGlassConfig, gen_mackey_glass, gen_test_process
from stdecomp.errors import UnstableIntegration


@pytest.fixture(scope="module")
def mg():
    return gen_mackey_glass(MackeyGlassConfig(length=970))


def test_default_range(mg):
    x = mg.values
    assert x.size == 970
    assert 0.2 < x.min() and x.max() < 1.5
    # chaotic: no exact repetition, several distinct peaks
    assert np.unique(np.round(x, 6)).size > 900


def test_exponential_decay():
    cfg = MackeyGlassConfig(a=0.0, b=0.1, x0=1.2, discard=0, length=50)
    x = gen_mackey_glass(cfg).values
    t = np.arange(1, 51, dtype=float)
    exact = 1.2 * np.exp(-0.1 * t)
    assert np.all(np.abs(x - exact) <= 1e-8 * t)


def test_deterministic(mg):
    again = gen_mackey_glass(MackeyGlassConfig(length=970))
    assert again.values.tobytes() == mg.values.tobytes()


def test_discard_alignment():
    full = gen_mackey_glass(MackeyGlassConfig(discard=0, length=300)).values
    tail = gen_mackey_glass(MackeyGlassConfig(discard=100, length=200)).values
    assert np.array_equal(full[100:], tail)


def test_step_must_divide():
    with pytest.raises(ValueError):
        MackeyGlassConfig(integration_step=0.3)
    with pytest.raises(ValueError):
        MackeyGlassConfig(delay=17.05)


def test_unstable():
    with pytest.raises(UnstableIntegration):
        gen_mackey_glass(MackeyGlassConfig(a=0.0, b=-5.0, discard=0, length=10))


def test_step_convergence():
    # linear interpolation of the delayed term makes the scheme second order
    runs = [gen_mackey_glass(MackeyGlassConfig(integration_step=h, discard=0, length=60)).values
            for h in (0.1, 0.05, 0.025)]
    e1 = np.max(np.abs(runs[0] - runs[1]))
    e2 = np.max(np.abs(runs[1] - runs[2]))
    assert e1 < 1e-4
    assert 3.0 < e1 / e2 < 5.0


def test_processes():
    a = gen_test_process("white_noise", 100, seed=3)
    b = gen_test_process("white_noise", 100, seed=3)
    assert a.values.tobytes() == b.values.tobytes()
    rw = gen_test_process("random_walk", 100, seed=3)
    np.testing.assert_array_equal(rw.values, np.cumsum(a.values))
    ar0 = gen_test_process("ar1", 100, seed=3, phi=0.0)
    np.testing.assert_array_equal(ar0.values, a.values)
    ar = gen_test_process("ar1", 5, seed=3, phi=0.5).values
    e = a.values[:5]
    assert ar[1] == pytest.approx(0.5 * e[0] + e[1])
    with pytest.raises(ValueError):
        gen_test_process("pink", 10, seed=1)
