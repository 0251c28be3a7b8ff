import math

import numpy as np
import pytest

from udwsignal.quadrature import integrate_segments
from udwsignal.signal import QuadratureConfig


class Osc:
    """exp(i w t) / (1 + t^2): known transform pi exp(-|w|) on the whole line."""

    def __init__(self, w):
        self.w = w

    def values(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.w * t) / (1 + t * t)

    def amp_phase(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return 1 / (1 + t * t), self.w * t

    def dphase(self, t):
        return np.full(np.shape(t), self.w)

    def budget(self, t):
        return self.w * np.asarray(t, dtype=float)


@pytest.mark.parametrize("w", [0.5, 3.0, 20.0])
def test_oscillatory_half_lines(w):
    cfg = QuadratureConfig()
    res = integrate_segments(Osc(w), [-math.inf, -1.0, 0.0, 1.0, math.inf], cfg, tail_end=True, tail_start=True)
    assert res.value == pytest.approx(math.pi * math.exp(-w), abs=1e-10)
    assert res.error < 1e-8


def test_finite_panel_error_estimate_is_honest():
    cfg = QuadratureConfig(rel_tol=1e-12)
    res = integrate_segments(Osc(7.0), [0.0, 1.0, 2.5], cfg)
    exact = complex(
        *(
            __import__("scipy").integrate.quad(f, 0, 2.5, epsabs=1e-14, limit=200)[0]
            for f in (lambda t: math.cos(7 * t) / (1 + t * t), lambda t: math.sin(7 * t) / (1 + t * t))
        )
    )
    assert abs(res.value - exact) <= max(res.error, 1e-14)
