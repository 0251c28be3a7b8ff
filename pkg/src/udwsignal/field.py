"""Commutator and two-point functions of the massless scalar field.

Arguments are ordered as ``[phi(x, t), phi(x', t')]``.  Spatial points are
arrays whose last axis holds the components.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi
FOUR_PI_SQ = 4.0 * math.pi**2


def _distance(x, xp):
    diff = np.atleast_1d(np.asarray(x, dtype=float) - np.asarray(xp, dtype=float))
    return np.linalg.norm(diff, axis=-1)


def commutator_1p1(t, x, tp, xp):
    """(i/2) sgn(t'-t) theta((t-t')^2 - (x-x')^2); the light cone itself counts as inside."""
    dt = np.asarray(tp, dtype=float) - np.asarray(t, dtype=float)
    dx = np.asarray(xp, dtype=float) - np.asarray(x, dtype=float)
    inside = dt * dt >= dx * dx
    return 0.5j * np.sign(dt) * inside


def commutator_2p1(t, x, tp, xp):
    """(i / 2 pi) sgn(t'-t) / sqrt((t'-t)^2 - |x-x'|^2) inside the light cone.

    Raises :class:`PoleError` exactly on the light cone, where the kernel
    has an integrable inverse square root singularity.
    """
    dt = float(tp) - float(t)
    r = float(_distance(x, xp))
    interval = dt * dt - r * r
    if interval < 0 or dt == 0:
        return 0j
    if interval == 0:
        raise PoleError("2+1 commutator evaluated on the light cone (integrable singularity)")
    return 1j * math.copysign(1.0, dt) / (TWO_PI * math.sqrt(interval))


def lightcone_delta_amplitude_3p1(distance: float) -> float:
    """Weight 1/(4 pi |x - x'|) of the retarded delta in the 3+1 commutator."""
    if not distance > 0:
        raise PoleError("3+1 commutator amplitude is singular at coincident points")
    return 1.0 / (FOUR_PI * distance)


def wightman_3p1(t, x, tp, xp, eps: float):
    """Regulated vacuum two-point function <phi(x,t) phi(x',t')> in 3+1 dimensions.

    W = 1 / (4 pi^2 (|x - x'|^2 - (t - t' - i eps)^2)).
    """
    if not eps > 0:
        raise DomainError("the regulator eps must be positive")
    dt = np.asarray(t, dtype=float) - np.asarray(tp, dtype=float)
    r = _distance(x, xp)
    return 1.0 / (FOUR_PI_SQ * (r * r - (dt - 1j * eps) ** 2))
