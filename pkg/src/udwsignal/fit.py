"""Power-law fits of sweep columns."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DomainError


@dataclass(frozen=True)
class PowerLawFit:
    """y ~ prefactor * x**exponent with a ``level`` confidence half-width on the exponent."""

    exponent: float
    half_width: float
    prefactor: float
    n: int
    level: float = 0.95

    @property
    def interval(self):
        return self.exponent - self.half_width, self.exponent + self.half_width


def power_law(x, y, level: float = 0.95) -> PowerLawFit:
    """Least-squares fit of log|y| against log x."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    if x.shape != y.shape or x.size < 3:
        raise DomainError("need at least three matching (x, y) samples")
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise DomainError("power-law fit needs positive finite samples")
    res = stats.linregress(np.log(x), np.log(y))
    t = stats.t.ppf(0.5 + level / 2, x.size - 2)
    hw = float(t * res.stderr) if x.size > 2 else math.inf
    return PowerLawFit(float(res.slope), hw, float(math.exp(res.intercept)), int(x.size), level)
