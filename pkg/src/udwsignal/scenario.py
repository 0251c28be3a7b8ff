"""Detector configurations, two-detector scenarios and the time-mirror transform."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

from . import kinematics
from .errors import ConfigurationError, DomainError
from .kinematics import Worldline
from .switching import DEFAULT_CUTOFF, Sudden, SwitchingProfile, support_window


class PerturbativeRegimeWarning(UserWarning):
    """Coupling large compared to the natural scale of the detector."""


@dataclass(frozen=True)
class DetectorConfig:
    """Coupling ``lam``, energy gap ``omega``, worldline and switching of one detector.

    ``switching=None`` is only allowed for the receiver and selects the
    null-shadow window of the sender.
    """

    lam: float
    omega: float
    worldline: Worldline
    switching: Optional[SwitchingProfile] = None

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError("coupling constant must be non-negative")
        if not math.isfinite(self.omega) or self.omega < 0:
            raise DomainError("energy gap must be finite and non-negative")

    @property
    def dim(self) -> int:
        return self.worldline.dim

    def perturbative_ratio(self) -> Optional[float]:
        """lam/Omega in 1+1, lam/sqrt(Omega) in 2+1; None where undefined."""
        if self.omega <= 0:
            return None
        if self.dim == 1:
            return self.lam / self.omega
        if self.dim == 2:
            return self.lam / math.sqrt(self.omega)
        return None


@dataclass(frozen=True)
class Scenario:
    """Sender ``alice`` and receiver ``bob`` in ``dim``+1 dimensional Minkowski space."""

    dim: int
    alice: DetectorConfig
    bob: DetectorConfig
    cutoff: float = DEFAULT_CUTOFF

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ConfigurationError("spatial dimension must be 1, 2 or 3")
        for name, det in (("alice", self.alice), ("bob", self.bob)):
            if det.dim != self.dim:
                raise ConfigurationError(f"{name}'s worldline has dimension {det.dim}, scenario has {self.dim}")
        if self.alice.switching is None:
            raise ConfigurationError("the sender needs an explicit switching profile")
        if not self.cutoff > 0:
            raise ConfigurationError("cutoff must be positive")
        for det in (self.alice, self.bob):
            ratio = det.perturbative_ratio()
            if ratio is not None and ratio > 0.1:
                warnings.warn(
                    f"coupling ratio {ratio:.3g} exceeds 0.1; leading order may be inaccurate",
                    PerturbativeRegimeWarning,
                    stacklevel=3,
                )

    def alice_window(self) -> tuple:
        return support_window(self.alice.switching, self.alice.worldline, self.cutoff)

    def bob_switching(self) -> SwitchingProfile:
        """Bob's profile, resolving the default null-shadow window."""
        if self.bob.switching is not None:
            return self.bob.switching
        return null_shadow_window(self)

    def resolved(self) -> "Scenario":
        if self.bob.switching is not None:
            return self
        return replace(self, bob=replace(self.bob, switching=null_shadow_window(self)))

    def with_gaps(self, omega_a: float, omega_b: float) -> "Scenario":
        return replace(
            self, alice=replace(self.alice, omega=omega_a), bob=replace(self.bob, omega=omega_b)
        )


def null_shadow_window(scenario: Scenario) -> Sudden:
    """Receiver window covering exactly the light rays from the sender's window."""
    lo, hi = scenario.alice_window()
    wa = scenario.alice.worldline
    wb = scenario.bob.worldline
    first = kinematics.reception_time(wa, wb, lo)
    last = kinematics.reception_time(wa, wb, hi)
    if first is None or last is None:
        raise ConfigurationError("the sender's window has no complete null image on the receiver")
    tau0 = float(wb.proper_time(first))
    tau1 = float(wb.proper_time(last))
    return Sudden(tau0, tau1 - tau0)


def _mirror_detector(det: DetectorConfig, switching: SwitchingProfile) -> DetectorConfig:
    return DetectorConfig(det.lam, det.omega, det.worldline.mirrored(), switching.mirrored())


def mirror(scenario: Scenario) -> Scenario:
    """Time-reversed scenario x'(t) = x(-t) with sender and receiver exchanged."""
    resolved = scenario.resolved()
    return Scenario(
        scenario.dim,
        alice=_mirror_detector(resolved.bob, resolved.bob.switching),
        bob=_mirror_detector(resolved.alice, resolved.alice.switching),
        cutoff=scenario.cutoff,
    )
