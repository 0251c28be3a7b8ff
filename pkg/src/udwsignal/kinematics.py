"""Worldlines in flat n+1 dimensional spacetime (n = 1, 2, 3).

All worldlines are parametrized by coordinate time ``t`` and satisfy
``tau(0) = 0``.  Methods accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, NumericalError

ArrayLike = Union[float, np.ndarray]

REST, INERTIAL, ACCELERATED = 0, 1, 2

_MAX_BRACKET_STEPS = 1100
_MAX_BISECTIONS = 400


def _as_vector(values, dim: Optional[int] = None) -> tuple:
    vec = tuple(float(v) for v in np.atleast_1d(values))
    if dim is not None and len(vec) != dim:
        raise DomainError(f"expected a {dim}-component vector, got {len(vec)}")
    if not 1 <= len(vec) <= 3:
        raise DomainError("spatial dimension must be 1, 2 or 3")
    return vec


@dataclass(frozen=True)
class Rest:
    position: tuple

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vector(self.position))

    @property
    def dim(self) -> int:
        return len(self.position)

    def position_at(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.array(self.position), t.shape + (self.dim,)).copy()

    def velocity_at(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape + (self.dim,))

    def proper_time(self, t: ArrayLike) -> ArrayLike:
        return t * 1.0

    def coordinate_time(self, tau: ArrayLike) -> ArrayLike:
        return tau * 1.0

    def dtau_dt(self, t: ArrayLike) -> ArrayLike:
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0

    def mirrored(self) -> "Rest":
        return self

    def translated(self, offset) -> "Rest":
        return Rest(tuple(np.add(self.position, _as_vector(offset, self.dim))))

    def kernel_spec(self):
        params = np.zeros(7)
        params[: self.dim] = self.position
        return REST, params


@dataclass(frozen=True)
class Inertial:
    """Constant velocity ``velocity`` through ``position`` at ``t = 0``."""

    velocity: tuple
    position: tuple

    def __post_init__(self):
        v = _as_vector(self.velocity)
        x = _as_vector(self.position, len(v))
        if math.fsum(c * c for c in v) >= 1.0:
            raise DomainError("inertial worldlines need |v| < 1")
        object.__setattr__(self, "velocity", v)
        object.__setattr__(self, "position", x)

    @property
    def dim(self) -> int:
        return len(self.velocity)

    @property
    def speed(self) -> float:
        return math.sqrt(math.fsum(c * c for c in self.velocity))

    @property
    def _dtau(self) -> float:
        return math.sqrt(1.0 - self.speed**2)

    def position_at(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array(self.position) + t[..., None] * np.array(self.velocity)

    def velocity_at(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.array(self.velocity), t.shape + (self.dim,)).copy()

    def proper_time(self, t: ArrayLike) -> ArrayLike:
        return t * self._dtau

    def coordinate_time(self, tau: ArrayLike) -> ArrayLike:
        return tau / self._dtau

    def dtau_dt(self, t: ArrayLike) -> ArrayLike:
        if np.ndim(t):
            return np.full(np.shape(t), self._dtau)
        return self._dtau

    def mirrored(self) -> "Inertial":
        return Inertial(tuple(-c for c in self.velocity), self.position)

    def translated(self, offset) -> "Inertial":
        return Inertial(self.velocity, tuple(np.add(self.position, _as_vector(offset, self.dim))))

    def kernel_spec(self):
        params = np.zeros(7)
        params[: self.dim] = self.position
        params[3 : 3 + self.dim] = self.velocity
        return INERTIAL, params


@dataclass(frozen=True)
class UniformAcceleration:
    """Hyperbola ``t = sinh(a tau)/a``, ``x1 = cosh(a tau)/a``, other components 0."""

    a: float
    dim: int = 3

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("proper acceleration must be positive")
        if self.dim not in (1, 2, 3):
            raise DomainError("spatial dimension must be 1, 2 or 3")
        object.__setattr__(self, "a", float(self.a))

    def position_at(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dim,))
        out[..., 0] = np.hypot(1.0 / self.a, t)
        return out

    def velocity_at(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dim,))
        out[..., 0] = t / np.hypot(1.0 / self.a, t)
        return out

    def proper_time(self, t: ArrayLike) -> ArrayLike:
        return np.arcsinh(self.a * np.asarray(t, dtype=float)) / self.a

    def coordinate_time(self, tau: ArrayLike) -> ArrayLike:
        with np.errstate(over="ignore"):
            return np.sinh(self.a * np.asarray(tau, dtype=float)) / self.a

    def dtau_dt(self, t: ArrayLike) -> ArrayLike:
        return 1.0 / np.hypot(1.0, self.a * np.asarray(t, dtype=float))

    def mirrored(self) -> "UniformAcceleration":
        # x(-t) = x(t) on the hyperbola
        return self

    def kernel_spec(self):
        params = np.zeros(7)
        params[6] = self.a
        return ACCELERATED, params


Worldline = Union[Rest, Inertial, UniformAcceleration]


def position(w: Worldline, t: ArrayLike) -> np.ndarray:
    return w.position_at(t)


def proper_time(w: Worldline, t: ArrayLike) -> ArrayLike:
    return w.proper_time(t)


def coordinate_time(w: Worldline, tau: ArrayLike) -> ArrayLike:
    return w.coordinate_time(tau)


def doppler_factor(v: float) -> float:
    """Relativistic Doppler factor sqrt((1+v)/(1-v)) for recession speed ``v``."""
    if not 0.0 <= v < 1.0:
        raise DomainError(f"speed must satisfy 0 <= v < 1, got {v}")
    return math.sqrt((1.0 + v) / (1.0 - v))


def separation(wa: Worldline, t2: ArrayLike, wb: Worldline, t1: ArrayLike) -> np.ndarray:
    """Euclidean distance between ``x_b(t1)`` and ``x_a(t2)``."""
    return np.linalg.norm(wb.position_at(t1) - wa.position_at(t2), axis=-1)


def _bisect(f, lo: float, hi: float, tol_scale: float) -> float:
    """Root of a decreasing-or-increasing ``f`` with ``f(lo)`` and ``f(hi)`` of opposite sign."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= 4e-16 * tol_scale:
            break
    return 0.5 * (lo + hi)


def _offset_square(w: Worldline, t: float) -> float:
    """|x(t)|^2 - t^2, exact for the hyperbola."""
    if isinstance(w, UniformAcceleration):
        return 1.0 / (w.a * w.a)
    x = w.position_at(t)
    return float(x @ x) - t * t


def light_gap(wa: Worldline, t2: float, wb: Worldline, t1: float) -> float:
    """t1 - t2 - |x_b(t1) - x_a(t2)|, positive inside the future light cone of the emission.

    With an accelerated party the quadratic terms are cancelled analytically,
    which keeps the sign reliable far from the hyperbola vertex.
    """
    xa = wa.position_at(t2)
    xb = wb.position_at(t1)
    dt = t1 - t2
    dist = float(np.linalg.norm(xb - xa))
    if not (isinstance(wa, UniformAcceleration) or isinstance(wb, UniformAcceleration)):
        return dt - dist
    with np.errstate(invalid="ignore", over="ignore"):
        num = -2.0 * t1 * t2 - _offset_square(wa, t2) - _offset_square(wb, t1) + 2.0 * float(xa @ xb)
    denom = dt + dist
    if not math.isfinite(denom):
        return math.copysign(1.0, num) if num != 0 else 0.0
    if denom > 0:
        return num / denom
    return dt - dist


def retarded_emission_time(wa: Worldline, wb: Worldline, t1: float) -> Optional[float]:
    """Coordinate time at which the light ray reaching ``wb`` at ``t1`` left ``wa``.

    Returns ``None`` when no point of ``wa`` lies on the past light cone of
    the reception event (e.g. behind an acceleration horizon).
    """
    t1 = float(t1)

    def f(t2):
        return light_gap(wa, t2, wb, t1)

    f1 = f(t1)
    if f1 == 0.0:
        return t1
    step = max(-f1, 1e-300)
    lo = t1 - step
    for _ in range(_MAX_BRACKET_STEPS):
        flo = f(lo)
        if flo >= 0.0:
            break
        if not math.isfinite(lo):
            return None
        step *= 2.0
        lo = t1 - step
    else:
        return None
    if not math.isfinite(lo) or flo < 0.0:
        return None
    root = _bisect(f, lo, t1, max(1.0, abs(t1), abs(lo)))
    if not abs(f(root)) < 1e-12 * max(1.0, abs(t1), abs(root)):
        raise NumericalError("retarded time bisection did not converge", state={"lo": lo, "hi": t1})
    return root


def reception_time(wa: Worldline, wb: Worldline, t2: float) -> Optional[float]:
    """Coordinate time at which a light ray emitted by ``wa`` at ``t2`` reaches ``wb``."""
    t2 = float(t2)
    if not math.isfinite(t2):
        return None

    def g(t1):
        return light_gap(wa, t2, wb, t1)

    g2 = g(t2)
    if g2 == 0.0:
        return t2
    step = max(-g2, 1e-300)
    hi = t2 + step
    for _ in range(_MAX_BRACKET_STEPS):
        if not math.isfinite(hi):
            return None
        ghi = g(hi)
        if ghi >= 0.0:
            break
        step *= 2.0
        hi = t2 + step
    else:
        return None
    return _bisect(g, t2, hi, max(1.0, abs(t2), abs(hi)))


def retarded_times(wa: Worldline, wb: Worldline, t1) -> np.ndarray:
    """Vectorized :func:`retarded_emission_time`; ``nan`` marks no solution."""
    from . import kernels

    t1 = np.ascontiguousarray(t1, dtype=float)
    ka, pa = wa.kernel_spec()
    kb, pb = wb.kernel_spec()
    return kernels.backend.retarded_times(ka, pa, kb, pb, t1.ravel()).reshape(t1.shape)
