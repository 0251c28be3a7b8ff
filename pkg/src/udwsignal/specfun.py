"""Complex special functions used by the closed-form signaling results."""
from __future__ import annotations

import cmath
import math

from .errors import AccuracyError, DomainError, PoleError

EULER_GAMMA = 0.57721566490153286061

# B_{2k} / (2k (2k-1)) for the Stirling series
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_SHIFT_TO = 16.0


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _loggamma_stirling(z: complex) -> complex:
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi) + series


def gamma_complex(z: complex) -> complex:
    """Gamma function for complex ``z``.

    Reflection into the right half plane, an upward recurrence to
    ``Re z >= 16`` and the Stirling series there.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    shifted = z
    product = 1.0 + 0j
    while shifted.real < _SHIFT_TO:
        product *= shifted
        shifted += 1.0
    return cmath.exp(_loggamma_stirling(shifted)) / product


def _log_sin_pi(z: complex) -> complex:
    # log sin(pi z) without overflow for large |Im z| (branch modulo 2 pi i)
    w = math.pi * z
    if abs(w.imag) < 20.0:
        return cmath.log(cmath.sin(w))
    if w.imag > 0:
        return -1j * w + cmath.log((1.0 - cmath.exp(2j * w)) / -2j)
    return 1j * w + cmath.log((1.0 - cmath.exp(-2j * w)) / 2j)


def log_gamma_complex(z: complex) -> complex:
    """A logarithm of Gamma(z), accurate in the real part for large |Im z|.

    The imaginary part is only defined modulo 2 pi; use it through exp.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.log(math.pi) - _log_sin_pi(z) - log_gamma_complex(1.0 - z)
    shifted = z
    log_product = 0j
    while shifted.real < _SHIFT_TO:
        log_product += cmath.log(shifted)
        shifted += 1.0
    return _loggamma_stirling(shifted) - log_product


def _e1_series(x: complex) -> complex:
    total = 0j
    term = 1.0 + 0j
    k = 0
    while True:
        k += 1
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) <= 1e-17 * max(abs(total), 1e-300) or k > 500:
            break
    return -EULER_GAMMA - cmath.log(x) - total


def _e1_continued_fraction(x: complex, max_iter: int = 20000, scaled: bool = False) -> complex:
    # modified Lentz on e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -float(i * i)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h if scaled else h * cmath.exp(-x)
    raise AccuracyError("E1 continued fraction did not converge", best=h * cmath.exp(-x))


def incomplete_gamma_upper(a: float, x: complex) -> complex:
    """Upper incomplete Gamma function Gamma(0, x) = E1(x), principal branch.

    Only ``a = 0`` is supported.
    """
    if a != 0:
        raise DomainError("only Gamma(0, x) is implemented")
    x = complex(x)
    if x == 0:
        raise PoleError("Gamma(0, x) has a logarithmic singularity at x = 0")
    r = abs(x)
    if r < 2.0 or (x.real < 0 and abs(x.imag) < 1.0 and r < 40.0):
        return _e1_series(x)
    return _e1_continued_fraction(x)


def exp1(x: complex) -> complex:
    return incomplete_gamma_upper(0, x)


def exp1_scaled(x: complex) -> complex:
    """e^x E1(x), finite for large |x| where E1 itself under- or overflows."""
    x = complex(x)
    if x == 0:
        raise PoleError("E1 has a logarithmic singularity at x = 0")
    r = abs(x)
    if r < 2.0 or (x.real < 0 and abs(x.imag) < 1.0 and r < 40.0):
        return cmath.exp(x) * _e1_series(x)
    return _e1_continued_fraction(x, scaled=True)


def hyp1f2(a1: complex, b1: complex, b2: complex, z: complex, max_terms: int = 5000) -> complex:
    """Generalized hypergeometric series 1F2(a1; b1, b2; z).

    Summed until the terms stagnate below machine precision relative to
    the partial sum.
    """
    a1, b1, b2, z = complex(a1), complex(b1), complex(b2), complex(z)
    for b in (b1, b2):
        if _is_nonpositive_integer(b):
            raise DomainError("lower parameters must not be non-positive integers")
    total = 1.0 + 0j
    term = 1.0 + 0j
    small = 0
    for k in range(max_terms):
        term *= (a1 + k) * z / ((b1 + k) * (b2 + k) * (k + 1))
        total += term
        if term == 0:
            return total
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise AccuracyError(
        f"1F2 series did not converge in {max_terms} terms", best=total, error=abs(term)
    )
