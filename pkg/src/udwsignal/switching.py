"""Switching profiles eta(tau) in detector proper time.

Each profile knows its Fourier primitive
``P(omega, tau) = int_{-inf}^{tau} eta(s) exp(i omega s) ds`` in closed form,
which the 1+1 signaling integrals use for the inner time integration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError

SUDDEN, EXPONENTIAL, GAUSSIAN = 0, 1, 2

DEFAULT_CUTOFF = 1e-10


def _phase_ramp(omega, start, stop):
    """int_start^stop exp(i omega s) ds, stable for omega -> 0."""
    width = stop - start
    half = 0.5 * omega * width
    return width * np.exp(1j * omega * (start + 0.5 * width)) * np.sinc(half / np.pi)


@dataclass(frozen=True)
class Sudden:
    """Top hat: 1 on ``[tau0, tau0 + dtau]``, 0 elsewhere."""

    tau0: float
    dtau: float

    def __post_init__(self):
        if not self.dtau > 0:
            raise DomainError("sudden switching needs a positive window length")

    @property
    def smooth(self) -> bool:
        return False

    def eta(self, tau):
        tau = np.asarray(tau, dtype=float)
        inside = (tau >= self.tau0) & (tau <= self.tau0 + self.dtau)
        return inside.astype(float) if inside.ndim else float(inside)

    def support(self, cutoff: float = DEFAULT_CUTOFF) -> tuple:
        return (self.tau0, self.tau0 + self.dtau)

    def kinks(self) -> tuple:
        return ()

    def primitive(self, omega: float, tau):
        tau = np.clip(np.asarray(tau, dtype=float), self.tau0, self.tau0 + self.dtau)
        return _phase_ramp(omega, self.tau0, tau)

    def fourier(self, omega: float) -> complex:
        return complex(_phase_ramp(omega, self.tau0, self.tau0 + self.dtau))

    def mirrored(self) -> "Sudden":
        return Sudden(-self.tau0 - self.dtau, self.dtau)

    def kernel_spec(self):
        return SUDDEN, (float(self.tau0), float(self.dtau))


@dataclass(frozen=True)
class ExponentialDecay:
    """``exp(-|tau| / sigma)``, centred at ``tau = 0``."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("decay scale must be positive")

    @property
    def smooth(self) -> bool:
        return True

    def eta(self, tau):
        return np.exp(-np.abs(tau) / self.sigma)

    def support(self, cutoff: float = DEFAULT_CUTOFF) -> tuple:
        half = -self.sigma * math.log(cutoff)
        return (-half, half)

    def kinks(self) -> tuple:
        return (0.0,)

    def primitive(self, omega: float, tau):
        tau = np.asarray(tau, dtype=float)
        rate = 1.0 / self.sigma
        up = rate + 1j * omega
        down = -rate + 1j * omega
        neg = np.exp(up * np.minimum(tau, 0.0)) / up
        # (exp(down*tau) - 1)/down without cancellation for small tau
        pos_tau = np.maximum(tau, 0.0)
        pos = np.where(pos_tau > 0, _expm1c(down * pos_tau) / down, 0.0)
        return np.where(tau <= 0, neg, 1.0 / up + pos)

    def fourier(self, omega: float) -> complex:
        rate = 1.0 / self.sigma
        return complex(2.0 * rate / (rate * rate + omega * omega))

    def mirrored(self) -> "ExponentialDecay":
        return self

    def kernel_spec(self):
        return EXPONENTIAL, (float(self.sigma), 0.0)


@dataclass(frozen=True)
class Gaussian:
    """``exp(-(tau - center)^2 / (2 width^2))``."""

    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("Gaussian width must be positive")

    @property
    def smooth(self) -> bool:
        return True

    def eta(self, tau):
        z = (np.asarray(tau, dtype=float) - self.center) / self.width
        return np.exp(-0.5 * z * z)

    def support(self, cutoff: float = DEFAULT_CUTOFF) -> tuple:
        half = self.width * math.sqrt(-2.0 * math.log(cutoff))
        return (self.center - half, self.center + half)

    def kinks(self) -> tuple:
        return ()

    def primitive(self, omega: float, tau):
        tau = np.asarray(tau, dtype=float)
        w = self.width
        z = (tau - self.center) / (math.sqrt(2.0) * w) - 1j * omega * w / math.sqrt(2.0)
        pref = w * math.sqrt(math.pi / 2.0) * np.exp(1j * omega * self.center - 0.5 * (omega * w) ** 2)
        return pref * special.erfc(-z)

    def fourier(self, omega: float) -> complex:
        w = self.width
        return complex(
            w * math.sqrt(2.0 * math.pi) * np.exp(1j * omega * self.center - 0.5 * (omega * w) ** 2)
        )

    def mirrored(self) -> "Gaussian":
        return Gaussian(-self.center, self.width)

    def kernel_spec(self):
        return GAUSSIAN, (float(self.center), float(self.width))


def _expm1c(z):
    """Complex exp(z) - 1 accurate near z = 0."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    # exp(x)(cos y + i sin y) - 1 = expm1(x) cos y - 2 sin^2(y/2) + i exp(x) sin y
    re = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


SwitchingProfile = Union[Sudden, ExponentialDecay, Gaussian]


def eta(profile: SwitchingProfile, tau):
    return profile.eta(tau)


def chi(profile: SwitchingProfile, worldline, t):
    """Effective coupling weight in coordinate time, eta(tau(t)) * dtau/dt."""
    return profile.eta(worldline.proper_time(t)) * worldline.dtau_dt(t)


def support_window(profile: SwitchingProfile, worldline, cutoff: float = DEFAULT_CUTOFF) -> tuple:
    """Coordinate-time interval outside of which ``eta < cutoff`` (exact for :class:`Sudden`).

    Ends that overflow the float range come back as infinities.
    """
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    lo, hi = profile.support(cutoff)
    with np.errstate(over="ignore"):
        return (float(worldline.coordinate_time(lo)), float(worldline.coordinate_time(hi)))
