import numpy as np
import pytest

from udwsignal.errors import DomainError
from udwsignal.fit import power_law


def test_exact_power_law():
    x = np.geomspace(1, 100, 12)
    res = power_law(x, 3.0 * x**-1.5)
    assert res.exponent == pytest.approx(-1.5, abs=1e-12)
    assert res.prefactor == pytest.approx(3.0, rel=1e-12)
    assert res.half_width < 1e-10


def test_noisy_interval_covers_truth():
    rng = np.random.default_rng(3)
    x = np.geomspace(1, 1000, 40)
    y = x**0.5 * np.exp(rng.normal(0, 0.05, x.size))
    res = power_law(x, y)
    lo, hi = res.interval
    assert lo < 0.5 < hi


def test_bad_input():
    with pytest.raises(DomainError):
        power_law([1, 2], [1, 2])
    with pytest.raises(DomainError):
        power_law([1, 2, 3], [1, 0, 2])
