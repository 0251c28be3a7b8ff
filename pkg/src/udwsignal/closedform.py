"""Analytic leading-order signaling coefficients for special configurations.

Every function returns values including the coupling prefactor
``lam_a * lam_b``.  The D2 partner of a closed-form C2 is obtained from
``D2(Omega_A, Omega_B) = -C2(Omega_A, -Omega_B)`` unless a dedicated
formula exists.  :func:`build_scenario` produces the matching scenario for
the quadrature engine so every case can be cross-checked numerically.

Geometries
----------
rest
    Alice at the origin coupled for ``0 <= t <= T``, Bob at distance ``L``
    coupled for ``L <= t <= L + T``.
inertial
    Alice starts at distance ``L`` from a resting Bob and recedes with speed
    ``v`` for proper time ``T``; Bob couples for ``L <= t <= L + zeta T``.
accelerated
    Alice on the hyperbola ``x = cosh(a tau) / a`` coupled for all proper
    time, Bob at rest at the origin coupled for ``t > 0``.
timelike
    Bob's window lies strictly inside the future light cone of all of
    Alice's window (1+1 only).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from . import kinematics
from .errors import ConfigurationError, DomainError
from .kinematics import Rest, Inertial, UniformAcceleration
from .scenario import DetectorConfig, Scenario
from .signal import SignalCoefficients
from .specfun import exp1_scaled, hyp1f2, log_gamma_complex
from .switching import ExponentialDecay, Sudden, SwitchingProfile, support_window

FOUR_PI = 4.0 * math.pi
RESONANCE_THRESHOLD = 1e-6
SMALL_GAP_THRESHOLD = 1e-3
SMALL_SPEED = 1e-4
OSCILLATORY_X = 0.05


class ClosedFormCase(Enum):
    REST_1P1 = "rest_1p1"
    REST_1P1_RESONANT = "rest_1p1_resonant"
    REST_3P1 = "rest_3p1"
    REST_3P1_RESONANT = "rest_3p1_resonant"
    REST_1P1_ZERO_GAP = "rest_1p1_zero_gap"
    REST_3P1_ZERO_GAP = "rest_3p1_zero_gap"
    REST_2P1_ZERO_GAP = "rest_2p1_zero_gap"
    INERTIAL_3P1 = "inertial_3p1"
    INERTIAL_3P1_RESONANT = "inertial_3p1_resonant"
    INERTIAL_1P1 = "inertial_1p1"
    ACCEL_3P1 = "accel_3p1"
    ACCEL_1P1_LIMIT = "accel_1p1_limit"
    TIMELIKE_1P1_SUDDEN = "timelike_1p1_sudden"


# elementary integrals ---------------------------------------------------------


def _moment(k: int, w: float, T: float) -> complex:
    """M_k(w) = int_0^T s^k exp(i w s) ds, stable for all real w."""
    z = w * T
    if abs(z) <= 2.0:
        total = 0j
        term = 1.0 + 0j
        j = 0
        while True:
            contrib = term / (j + k + 1)
            total += contrib
            j += 1
            term *= 1j * z / j
            if abs(term) < 1e-17 * abs(total) or j > 80:
                break
        return total * T ** (k + 1)
    e = cmath.exp(1j * z)
    m = (e - 1.0) / (1j * w)
    for j in range(1, k + 1):
        m = (T**j * e - j * m) / (1j * w)
    return m


def _log1p_ratio(z: float) -> float:
    """log(1 + z) / z with the z -> 0 limit."""
    if abs(z) < 1e-4:
        return 1.0 - z / 2.0 + z * z / 3.0 - z**3 / 4.0
    return math.log1p(z) / z


def _log1p_defect(z: float) -> float:
    """(1 - log(1 + z)/z) / z."""
    if abs(z) < 1e-3:
        return 0.5 - z / 3.0 + z * z / 4.0 - z**3 / 5.0 + z**4 / 6.0
    return (1.0 - math.log1p(z) / z) / z


def _check_positive(**kw):
    for name, val in kw.items():
        if not (math.isfinite(val) and val > 0):
            raise DomainError(f"{name} must be positive and finite")


def _check_gap(*gaps):
    for g in gaps:
        if not math.isfinite(g):
            raise DomainError("energy gaps must be finite")


def _coeffs(c2: complex, d2: complex) -> SignalCoefficients:
    return SignalCoefficients(complex(c2), complex(d2))


# resting detectors ------------------------------------------------------------


def _rest_1p1_core(oa: float, ob: float, L: float, T: float) -> complex:
    phase = cmath.exp(1j * ob * L)
    if abs(oa) * T < SMALL_GAP_THRESHOLD:
        # expansion in Omega_A around the zero-gap sender
        total = 0j
        fact = 1.0
        for k in range(1, 8):
            fact *= k
            total += (1j) ** k * _moment(k, ob, T) * (-oa) ** (k - 1) / fact
        return 0.5 * phase * total
    if oa == ob:
        return -phase * (1j * (cmath.exp(1j * oa * T) - 1.0) + oa * T) / (2.0 * oa * oa)
    if abs(oa - ob) * T < RESONANCE_THRESHOLD or abs(ob) * T < SMALL_GAP_THRESHOLD:
        return -phase / (2.0 * oa) * (_moment(0, ob - oa, T) - _moment(0, ob, T))
    # overall sign fixed so that the resonant limit is reproduced
    return (
        1j * phase / (2.0 * oa * ob * (ob - oa))
        * ((ob - oa) * (1.0 - cmath.exp(1j * ob * T)) + ob * (cmath.exp(1j * (ob - oa) * T) - 1.0))
    )


def _rest_3p1_core(oa: float, ob: float, L: float, T: float) -> complex:
    phase = cmath.exp(1j * ob * L)
    w = ob - oa
    if abs(w) * T < RESONANCE_THRESHOLD:
        # resonant value with its first-order detuning correction
        return 1j * phase * T * (1.0 + 0.5j * w * T) / (FOUR_PI * L)
    return phase * (1.0 - cmath.exp(1j * w * T)) / (FOUR_PI * L * (oa - ob))


def rest_c2(n: int, omega_a: float, omega_b: float, L: float, T: float, lam_a: float = 1.0, lam_b: float = 1.0) -> complex:
    """C2 for resting detectors a distance ``L`` apart in 1+1 or 3+1 dimensions."""
    _check_positive(L=L)
    _check_gap(omega_a, omega_b)
    if T < 0:
        raise DomainError("coupling time must be non-negative")
    if n == 1:
        return lam_a * lam_b * _rest_1p1_core(omega_a, omega_b, L, T)
    if n == 3:
        return lam_a * lam_b * _rest_3p1_core(omega_a, omega_b, L, T)
    if n == 2:
        raise DomainError("2+1 rest coefficients have a closed form only for zero gaps (rest_2p1_zero_gap)")
    raise DomainError("dimension must be 1 or 3")


def rest_coefficients(n: int, omega_a: float, omega_b: float, L: float, T: float, lam_a: float = 1.0, lam_b: float = 1.0) -> SignalCoefficients:
    c2 = rest_c2(n, omega_a, omega_b, L, T, lam_a, lam_b)
    d2 = -rest_c2(n, omega_a, -omega_b, L, T, lam_a, lam_b)
    return _coeffs(c2, d2)


def rest_resonant_pair(n: int, omega: float, L: float, T: float, lam_a: float = 1.0, lam_b: float = 1.0) -> Tuple[complex, complex]:
    """Dedicated (C2, D2) formulas for equal gaps ``omega > 0``."""
    _check_positive(L=L, omega=omega)
    lam = lam_a * lam_b
    if n == 1:
        c2 = -lam * cmath.exp(1j * omega * L) * (1j * (cmath.exp(1j * omega * T) - 1.0) + omega * T) / (2.0 * omega**2)
        d2 = lam * 1j * cmath.exp(-1j * (omega * L + 2.0 * omega * T)) * (cmath.exp(1j * omega * T) - 1.0) ** 2 / (4.0 * omega**2)
        return c2, d2
    if n == 3:
        c2 = lam * 1j * cmath.exp(1j * omega * L) * T / (FOUR_PI * L)
        d2 = -lam * cmath.exp(-1j * omega * (L + 2.0 * T)) * (cmath.exp(2j * omega * T) - 1.0) / (2.0 * FOUR_PI * omega * L)
        return c2, d2
    raise DomainError("resonant formulas exist for 1+1 and 3+1")


def rest_zero_gap_strength(n: int, L: float, T: float, lam_a: float = 1.0, lam_b: float = 1.0) -> float:
    """|C2| + |D2| for zero-gap detectors at rest."""
    _check_positive(L=L)
    if T < 0:
        raise DomainError("coupling time must be non-negative")
    lam = lam_a * lam_b
    if n == 1:
        return lam * T * T / 2.0
    if n == 2:
        return rest_2p1_zero_gap(L, T, lam_a, lam_b)
    if n == 3:
        return lam * T / (2.0 * math.pi * L)
    raise DomainError("dimension must be 1, 2 or 3")


def rest_2p1_zero_gap(L: float, T: float, lam_a: float = 1.0, lam_b: float = 1.0) -> float:
    """|C2| + |D2| for zero-gap resting detectors in 2+1 dimensions.

    (lam^2/pi) [(T + L) ln(1 + (T + s)/L) - s] with s = sqrt(2 L T + T^2).
    """
    _check_positive(L=L)
    if T < 0:
        raise DomainError("coupling time must be non-negative")
    s = math.sqrt(2.0 * L * T + T * T)
    return lam_a * lam_b / math.pi * ((T + L) * math.log1p((T + s) / L) - s)


# inertial sender --------------------------------------------------------------


def doppler(v: float) -> float:
    return kinematics.doppler_factor(v)


def _inertial_3p1_core(oa: float, ob: float, L: float, T: float, v: float) -> complex:
    phase = cmath.exp(1j * ob * L)
    if v == 0:
        return _rest_3p1_core(oa, ob, L, T)
    gamma = 1.0 / math.sqrt((1.0 - v) * (1.0 + v))
    zeta = doppler(v)
    kappa = (oa - zeta * ob) / gamma
    U = gamma * T
    z = v * U / L
    if abs(kappa) * U < RESONANCE_THRESHOLD:
        res = U / L * _log1p_ratio(z)
        corr = -1j * kappa * U * U / L * _log1p_defect(z)
        return 1j * phase * (res + corr) / (FOUR_PI * gamma)
    z1 = 1j * kappa * L / v
    z2 = 1j * kappa * (L + v * U) / v
    bracket = exp1_scaled(z1) - cmath.exp(-1j * kappa * U) * exp1_scaled(z2)
    return 1j * phase * bracket / (FOUR_PI * gamma * v)


def _inertial_1p1_r(oa: float, ob: float, T: float, v: float) -> complex:
    """R term of the inertial 1+1 coefficient: int_0^{zeta T} exp(i (Omega_B - Omega_A/zeta) s) ds."""
    zeta = doppler(v)
    w = ob - oa / zeta
    if abs(w) * zeta * T < RESONANCE_THRESHOLD:
        return _moment(0, w, zeta * T)
    th = 0.5 * (ob * zeta - oa) * T
    return 2.0 / w * cmath.exp(1j * th) * math.sin(th)


def _inertial_1p1_core(oa: float, ob: float, L: float, T: float, v: float) -> complex:
    zeta = doppler(v)
    if abs(oa) * T < SMALL_GAP_THRESHOLD or abs(ob) * zeta * T < SMALL_GAP_THRESHOLD:
        return _rest_1p1_core(oa / zeta, ob, L, zeta * T) / zeta
    R = _inertial_1p1_r(oa, ob, T, v)
    return -cmath.exp(1j * ob * L) / (2.0 * oa) * (R + 1j / ob * (cmath.exp(1j * ob * zeta * T) - 1.0))


def inertial_c2(n: int, omega_a: float, omega_b: float, L: float, T: float, v: float, lam_a: float = 1.0, lam_b: float = 1.0) -> complex:
    """C2 for a sender receding at speed ``v`` from a resting receiver."""
    _check_positive(L=L)
    _check_gap(omega_a, omega_b)
    if not 0.0 <= v < 1.0:
        raise DomainError("speed must satisfy 0 <= v < 1")
    if T < 0:
        raise DomainError("coupling time must be non-negative")
    if n == 3:
        return lam_a * lam_b * _inertial_3p1_core(omega_a, omega_b, L, T, v)
    if n == 1:
        return lam_a * lam_b * _inertial_1p1_core(omega_a, omega_b, L, T, v)
    raise DomainError("inertial closed forms exist for 1+1 and 3+1")


def inertial_coefficients(n: int, omega_a: float, omega_b: float, L: float, T: float, v: float, lam_a: float = 1.0, lam_b: float = 1.0) -> SignalCoefficients:
    c2 = inertial_c2(n, omega_a, omega_b, L, T, v, lam_a, lam_b)
    d2 = -inertial_c2(n, omega_a, -omega_b, L, T, v, lam_a, lam_b)
    return _coeffs(c2, d2)


def inertial_3p1_resonant_c2(omega_a: float, L: float, T: float, v: float, lam_a: float = 1.0, lam_b: float = 1.0) -> complex:
    """C2 at the Doppler-matched receiver gap Omega_B = Omega_A / zeta."""
    _check_positive(L=L)
    if not 0.0 <= v < 1.0:
        raise DomainError("speed must satisfy 0 <= v < 1")
    ob = omega_a / doppler(v)
    gamma = 1.0 / math.sqrt((1.0 - v) * (1.0 + v))
    z = v * gamma * T / L
    return lam_a * lam_b * 1j * cmath.exp(1j * ob * L) / FOUR_PI * (T / L) * _log1p_ratio(z)


# accelerated sender -----------------------------------------------------------


def accel_1p1(omega_a: float, omega_b: float, a: float, lam_a: float = 1.0, lam_b: float = 1.0) -> Tuple[complex, float]:
    """(C2, |C2| + |D2|) across the acceleration horizon in 1+1 dimensions."""
    _check_positive(a=a, omega_a=omega_a, omega_b=omega_b)
    lam = lam_a * lam_b
    y = omega_a / a
    x = omega_b / a
    # (-i x)^{i y} = x^{i y} e^{pi y / 2} on the principal branch
    log_c2 = 1j * y * math.log(x) + 0.5 * math.pi * y + log_gamma_complex(-1j * y)
    c2 = -lam * cmath.exp(log_c2) / (2.0 * a * omega_b)
    return c2, accel_1p1_strength(omega_a, omega_b, a, lam_a, lam_b)


def accel_1p1_strength(omega_a: float, omega_b: float, a: float, lam_a: float = 1.0, lam_b: float = 1.0) -> float:
    """(lam^2 / (a Omega_B)) cosh(pi Omega_A / 2a) sqrt(a pi / (Omega_A sinh(pi Omega_A / a)))."""
    _check_positive(a=a, omega_a=omega_a, omega_b=omega_b)
    y = omega_a / a
    py = math.pi * y
    # cosh(py/2) / sqrt(sinh(py)) in log space
    log_ratio = math.log(0.5 * (1.0 + math.exp(-py))) - 0.5 * math.log(0.5 * -math.expm1(-2.0 * py))
    return lam_a * lam_b / (a * omega_b) * math.exp(log_ratio) * math.sqrt(math.pi / y)


def accel_1p1_coefficients(omega_a: float, omega_b: float, a: float, lam_a: float = 1.0, lam_b: float = 1.0) -> SignalCoefficients:
    c2, _ = accel_1p1(omega_a, omega_b, a, lam_a, lam_b)
    y = omega_a / a
    x = omega_b / a
    log_d2 = 1j * y * math.log(x) - 0.5 * math.pi * y + log_gamma_complex(-1j * y)
    d2 = -lam_a * lam_b * cmath.exp(log_d2) / (2.0 * a * omega_b)
    return _coeffs(c2, d2)


def _sinh_ratio(s: float, t: float) -> float:
    """sinh(s) / sinh(t) for t > 0 without overflow."""
    if max(abs(s), t) < 30.0:
        return math.sinh(s) / math.sinh(t)
    sign = math.copysign(1.0, s)
    return sign * math.exp(abs(s) - t) * -math.expm1(-2.0 * abs(s)) / -math.expm1(-2.0 * t)


def _cosh_csch(s: float, t: float) -> float:
    """cosh(s) / sinh(t) for t > 0 without overflow."""
    if max(abs(s), t) < 30.0:
        return math.cosh(s) / math.sinh(t)
    return math.exp(abs(s) - t) * (1.0 + math.exp(-2.0 * abs(s))) / -math.expm1(-2.0 * t)


def _accel_3p1_parts(x: float, y: float) -> Tuple[complex, complex]:
    """I(x) and I(-x) with C2 = (i/4 pi) I(x) and D2 = -(i/4 pi) I(-x)."""
    if not (math.isfinite(y) and y > 0):
        raise DomainError("y = Omega_A / a must be positive (the zero-gap sender is not covered)")
    if not (math.isfinite(x) and x >= 0):
        raise DomainError("x = Omega_B / a must be non-negative")
    py = math.pi * y
    even_p = 2.0 * math.pi * _sinh_ratio(x + 0.5 * py, py)
    even_m = 2.0 * math.pi * _sinh_ratio(0.5 * py - x, py)
    if x == 0:
        return complex(even_p), complex(even_m)
    f_odd = hyp1f2(1.0, 1.0 + 0.5j * y, 1.5 + 0.5j * y, 0.25 * x * x)
    base = log_gamma_complex(-1j * y) + (1.0 + 1j * y) * math.log(x)
    odd = 2j * f_odd / (1.0 + 1j * y)
    odd_p = cmath.exp(base + 0.5 * py) * odd
    odd_m = cmath.exp(base - 0.5 * py) * odd
    return even_p + odd_p, even_m - odd_m


def accel_3p1_coefficients(x: float, y: float, lam_a: float = 1.0, lam_b: float = 1.0) -> SignalCoefficients:
    """C2 and D2 across the acceleration horizon in 3+1 dimensions, x = Omega_B/a, y = Omega_A/a."""
    ip, im = _accel_3p1_parts(x, y)
    lam = lam_a * lam_b
    return _coeffs(1j * lam * ip / FOUR_PI, -1j * lam * im / FOUR_PI)


def accel_3p1_strength(x: float, y: float, lam_a: float = 1.0, lam_b: float = 1.0) -> float:
    ip, im = _accel_3p1_parts(x, y)
    return lam_a * lam_b * (abs(ip) + abs(im)) / FOUR_PI


def accel_3p1_strength_alt(x: float, y: float, lam_a: float = 1.0, lam_b: float = 1.0) -> float:
    """Series form built on 1F2(1; 1/2 + iy/2, 1 + iy/2; x^2/4) x^{iy}.

    Kept for comparison; it does not agree with direct quadrature.  Use
    :func:`accel_3p1_strength` for results.
    """
    if not (math.isfinite(y) and y > 0):
        raise DomainError("y must be positive")
    if not (math.isfinite(x) and x > 0):
        raise DomainError("x must be positive")
    py = math.pi * y
    f = hyp1f2(1.0, 0.5 + 0.5j * y, 1.0 + 0.5j * y, 0.25 * x * x)
    base = cmath.exp(log_gamma_complex(-1j * y) + 1j * y * math.log(x)) * f
    first = 2j * math.exp(-0.5 * py) * base + 2.0 * math.pi * _cosh_csch(0.5 * py - x, py)
    second = 2j * math.exp(0.5 * py) * base + 2.0 * math.pi * _cosh_csch(x + 0.5 * py, py)
    return lam_a * lam_b * (abs(first) + abs(second)) / FOUR_PI


def accel_3p1_oscillation_dominated(x: float) -> bool:
    """True where the small-x behaviour makes the strength oscillation-dominated."""
    return x < OSCILLATORY_X


# timelike signaling -----------------------------------------------------------


def _check_timelike(switch_a, switch_b, worldline_a, worldline_b, cutoff):
    a_lo, a_hi = support_window(switch_a, worldline_a, cutoff)
    b_lo, b_hi = support_window(switch_b, worldline_b, cutoff)
    if not (math.isfinite(a_hi) and math.isfinite(b_lo)):
        raise DomainError("timelike windows must have a finite sender end and receiver start")
    last = kinematics.reception_time(worldline_a, worldline_b, a_hi)
    if last is None or not last < b_lo:
        raise DomainError("receiver window is not strictly inside the sender's future light cone")


def timelike_1p1(
    switch_a: SwitchingProfile,
    switch_b: SwitchingProfile,
    omega_a: float,
    omega_b: float,
    lam_a: float = 1.0,
    lam_b: float = 1.0,
    worldline_a=None,
    worldline_b=None,
    cutoff: float = 1e-10,
) -> complex:
    """C2 = (i/2) lam^2 F_A(-Omega_A) F_B(Omega_B) for strictly timelike windows in 1+1.

    F_d is the Fourier transform of the switching over proper time.  When
    both worldlines are given the timelike precondition is checked.
    """
    _check_gap(omega_a, omega_b)
    if (worldline_a is None) != (worldline_b is None):
        raise ConfigurationError("give both worldlines or neither")
    if worldline_a is not None:
        if worldline_a.dim != 1 or worldline_b.dim != 1:
            raise DomainError("timelike factorization holds in 1+1 dimensions")
        _check_timelike(switch_a, switch_b, worldline_a, worldline_b, cutoff)
    return 0.5j * lam_a * lam_b * switch_a.fourier(-omega_a) * switch_b.fourier(omega_b)


def timelike_1p1_coefficients(switch_a, switch_b, omega_a, omega_b, lam_a=1.0, lam_b=1.0, worldline_a=None, worldline_b=None) -> SignalCoefficients:
    c2 = timelike_1p1(switch_a, switch_b, omega_a, omega_b, lam_a, lam_b, worldline_a, worldline_b)
    d2 = -timelike_1p1(switch_a, switch_b, omega_a, -omega_b, lam_a, lam_b, worldline_a, worldline_b)
    return _coeffs(c2, d2)


def timelike_sudden_strength(dtau_a: float, dtau_b: float, omega_a: float, omega_b: float, lam_a: float = 1.0, lam_b: float = 1.0) -> float:
    """(4 lam^2 / (Omega_A Omega_B)) |sin(dtau_A Omega_A / 2) sin(dtau_B Omega_B / 2)|."""
    _check_positive(omega_a=omega_a, omega_b=omega_b)
    return 4.0 * lam_a * lam_b / (omega_a * omega_b) * abs(math.sin(0.5 * dtau_a * omega_a) * math.sin(0.5 * dtau_b * omega_b))


# case catalogue -------------------------------------------------------------


@dataclass(frozen=True)
class CaseParams:
    """Parameters of a catalogue case; unused fields are ignored."""

    omega_a: float = 1.0
    omega_b: float = 1.0
    L: float = 1.0
    T: float = 1.0
    v: float = 0.0
    a: float = 1.0
    lam_a: float = 1.0
    lam_b: float = 1.0
    gap: float = 1.0  # delay between the sender's switch-off and the receiver's switch-on
    T_b: Optional[float] = None  # receiver window length (timelike case)
    sigma: Optional[float] = None  # decay time of the exponential switching for horizon cases


def closed_form(case: ClosedFormCase, p: CaseParams) -> SignalCoefficients:
    """Catalogue value for ``case``; strength-only cases carry the strength in ``c2``."""
    C = ClosedFormCase
    if case in (C.REST_1P1, C.REST_3P1):
        return rest_coefficients(1 if case is C.REST_1P1 else 3, p.omega_a, p.omega_b, p.L, p.T, p.lam_a, p.lam_b)
    if case in (C.REST_1P1_RESONANT, C.REST_3P1_RESONANT):
        c2, d2 = rest_resonant_pair(1 if case is C.REST_1P1_RESONANT else 3, p.omega_a, p.L, p.T, p.lam_a, p.lam_b)
        return _coeffs(c2, d2)
    if case is C.REST_1P1_ZERO_GAP:
        return rest_coefficients(1, 0.0, 0.0, p.L, p.T, p.lam_a, p.lam_b)
    if case is C.REST_3P1_ZERO_GAP:
        return rest_coefficients(3, 0.0, 0.0, p.L, p.T, p.lam_a, p.lam_b)
    if case is C.REST_2P1_ZERO_GAP:
        return _coeffs(rest_2p1_zero_gap(p.L, p.T, p.lam_a, p.lam_b), 0.0)
    if case is C.INERTIAL_3P1:
        return inertial_coefficients(3, p.omega_a, p.omega_b, p.L, p.T, p.v, p.lam_a, p.lam_b)
    if case is C.INERTIAL_3P1_RESONANT:
        ob = p.omega_a / doppler(p.v)
        c2 = inertial_3p1_resonant_c2(p.omega_a, p.L, p.T, p.v, p.lam_a, p.lam_b)
        d2 = -inertial_c2(3, p.omega_a, -ob, p.L, p.T, p.v, p.lam_a, p.lam_b)
        return _coeffs(c2, d2)
    if case is C.INERTIAL_1P1:
        return inertial_coefficients(1, p.omega_a, p.omega_b, p.L, p.T, p.v, p.lam_a, p.lam_b)
    if case is C.ACCEL_3P1:
        return accel_3p1_coefficients(p.omega_b / p.a, p.omega_a / p.a, p.lam_a, p.lam_b)
    if case is C.ACCEL_1P1_LIMIT:
        return accel_1p1_coefficients(p.omega_a, p.omega_b, p.a, p.lam_a, p.lam_b)
    if case is C.TIMELIKE_1P1_SUDDEN:
        sa, sb, _, _ = _timelike_geometry(p)
        return timelike_1p1_coefficients(sa, sb, p.omega_a, p.omega_b, p.lam_a, p.lam_b)
    raise ConfigurationError(f"unknown case {case!r}")


def is_strength_only(case: ClosedFormCase) -> bool:
    return case is ClosedFormCase.REST_2P1_ZERO_GAP


def _timelike_geometry(p: CaseParams):
    # Bob sits at distance L and switches on `gap` after Alice's last light ray arrives
    T_b = p.T if p.T_b is None else p.T_b
    sa = Sudden(0.0, p.T)
    sb = Sudden(p.L + p.T + p.gap, T_b)
    return sa, sb, Rest((0.0,)), Rest((p.L,))


def horizon_sigma(p: CaseParams) -> float:
    """Decay time used to emulate switching that never ends on the hyperbola."""
    return p.sigma if p.sigma is not None else 1e8 / p.a


def build_scenario(case: ClosedFormCase, p: CaseParams) -> Scenario:
    """The scenario whose quadrature should reproduce :func:`closed_form`."""
    C = ClosedFormCase
    oa, ob = p.omega_a, p.omega_b
    if case in (C.REST_1P1_ZERO_GAP, C.REST_3P1_ZERO_GAP, C.REST_2P1_ZERO_GAP):
        oa = ob = 0.0
    if case in (C.REST_1P1_RESONANT, C.REST_3P1_RESONANT):
        ob = oa
    if case is C.INERTIAL_3P1_RESONANT:
        ob = oa / doppler(p.v)
    if case in (C.REST_1P1, C.REST_1P1_RESONANT, C.REST_1P1_ZERO_GAP, C.REST_3P1, C.REST_3P1_RESONANT, C.REST_3P1_ZERO_GAP, C.REST_2P1_ZERO_GAP):
        n = {"1": 1, "2": 2, "3": 3}[case.value.split("_")[1][0]]
        zero = (0.0,) * n
        far = (p.L,) + (0.0,) * (n - 1)
        alice = DetectorConfig(p.lam_a, oa, Rest(zero), Sudden(0.0, p.T))
        bob = DetectorConfig(p.lam_b, ob, Rest(far), None)
        return Scenario(n, alice, bob)
    if case in (C.INERTIAL_3P1, C.INERTIAL_3P1_RESONANT, C.INERTIAL_1P1):
        n = 1 if case is C.INERTIAL_1P1 else 3
        zero = (0.0,) * n
        start = (p.L,) + (0.0,) * (n - 1)
        vel = (p.v,) + (0.0,) * (n - 1)
        alice = DetectorConfig(p.lam_a, oa, Inertial(vel, start), Sudden(0.0, p.T))
        bob = DetectorConfig(p.lam_b, ob, Rest(zero), None)
        return Scenario(n, alice, bob)
    if case in (C.ACCEL_3P1, C.ACCEL_1P1_LIMIT):
        n = 3 if case is C.ACCEL_3P1 else 1
        sigma = horizon_sigma(p)
        alice = DetectorConfig(p.lam_a, oa, UniformAcceleration(p.a, dim=n), ExponentialDecay(sigma))
        bob = DetectorConfig(p.lam_b, ob, Rest((0.0,) * n), ExponentialDecay(sigma))
        return Scenario(n, alice, bob)
    if case is C.TIMELIKE_1P1_SUDDEN:
        sa, sb, wa, wb = _timelike_geometry(p)
        return Scenario(1, DetectorConfig(p.lam_a, oa, wa, sa), DetectorConfig(p.lam_b, ob, wb, sb))
    raise ConfigurationError(f"unknown case {case!r}")
