"""Bloch-sphere form of the leading-order detector channel, optimal states and capacities.

Density matrices are written in the (excited, ground) basis, so a state
``[[e, c], [c*, g]]`` has Bloch vector ``(2 Re c, -2 Im c, e - g)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NoSignalError

PURE_TOL = 1e-12
#: perturbative guard for the capacity formulas
VALIDITY_LIMIT = 0.1


@dataclass(frozen=True)
class BlochVector:
    """Real three-vector of a qubit state, norm at most one."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm > 1.0 + PURE_TOL:
            raise DomainError(f"Bloch vector norm {self.norm:.15g} exceeds 1")

    @classmethod
    def from_array(cls, r) -> "BlochVector":
        r = np.asarray(r, dtype=float)
        return cls(float(r[0]), float(r[1]), float(r[2]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def pure(self) -> bool:
        return abs(self.norm - 1.0) <= PURE_TOL

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def density(self) -> np.ndarray:
        return 0.5 * np.array(
            [[1 + self.z, self.x - 1j * self.y], [self.x + 1j * self.y, 1 - self.z]]
        )


@dataclass(frozen=True)
class DetectorState:
    """Initial qubit state ``[[excited, coherence], [coherence*, ground]]``.

    For the sender these entries are (theta, beta, gamma), for the receiver
    (phi, kappa, delta).
    """

    excited: float
    ground: float
    coherence: complex = 0j

    def __post_init__(self):
        e, g = self.excited, self.ground
        if e < -PURE_TOL or g < -PURE_TOL or abs(e + g - 1.0) > PURE_TOL:
            raise DomainError("populations must be non-negative and sum to one")
        if abs(self.coherence) > math.sqrt(max(e * g, 0.0)) + PURE_TOL:
            raise DomainError("coherence violates positivity |c| <= sqrt(excited*ground)")

    @classmethod
    def ground_state(cls) -> "DetectorState":
        return cls(0.0, 1.0, 0j)

    @classmethod
    def excited_state(cls) -> "DetectorState":
        return cls(1.0, 0.0, 0j)

    @classmethod
    def from_bloch(cls, r: BlochVector) -> "DetectorState":
        return cls(0.5 * (1 + r.z), 0.5 * (1 - r.z), 0.5 * (r.x - 1j * r.y))

    def bloch(self) -> BlochVector:
        c = complex(self.coherence)
        r = np.array([2 * c.real, -2 * c.imag, self.excited - self.ground])
        n = float(np.linalg.norm(r))
        if n > 1.0:  # rounding on the surface
            r = r / n
        return BlochVector.from_array(r)

    def density(self) -> np.ndarray:
        c = complex(self.coherence)
        return np.array([[self.excited, c], [c.conjugate(), self.ground]])


@dataclass(frozen=True)
class ChannelMap:
    """Affine Bloch map r -> M r + v, with the phases of the two signaling coefficients."""

    M: np.ndarray
    v: np.ndarray
    phi_c: float = 0.0
    phi_d: float = 0.0

    def apply(self, r) -> np.ndarray:
        arr = r.array if isinstance(r, BlochVector) else np.asarray(r, dtype=float)
        return self.M @ arr + self.v


def _coeffs(sc) -> Tuple[complex, complex]:
    if isinstance(sc, tuple):
        return complex(sc[0]), complex(sc[1])
    return complex(sc.c2), complex(sc.d2)


def _phases(c2: complex, d2: complex) -> Tuple[float, float]:
    if c2 == 0 and d2 == 0:
        raise NoSignalError("C2 = D2 = 0: there is no signal to optimize")
    pc = math.atan2(c2.imag, c2.real) if c2 != 0 else 0.0
    pd = math.atan2(d2.imag, d2.real) if d2 != 0 else 0.0
    return pc, pd


def leading_channel_matrix(sc, bob: DetectorState, single=None) -> ChannelMap:
    """Leading-order Bloch map from the sender's state to the receiver's final state.

    ``sc`` is a coefficient object with ``c2``/``d2`` or a pair.  ``v`` is the
    receiver's initial Bloch vector, plus the vacuum noise terms when
    ``single`` (a :class:`SingleDetectorCoefficients`) is given.
    """
    c2, d2 = _coeffs(sc)
    kp = bob.ground - bob.excited
    dl = complex(bob.coherence)
    M = np.array(
        [
            [kp * (c2 + d2).real, kp * (c2 + d2).imag, 0.0],
            [kp * (d2 - c2).imag, kp * (c2 - d2).real, 0.0],
            [
                2 * (dl * (c2.conjugate() + d2)).real,
                2 * (dl.conjugate() * (c2 - d2.conjugate())).imag,
                0.0,
            ],
        ]
    )
    v = bob.bloch().array
    if single is not None:
        off = dl * complex(single.r2) + dl.conjugate() * complex(single.s2).conjugate()
        pop = bob.ground * complex(single.p2).real + bob.excited * complex(single.q2).real
        v = v + np.array([2 * off.real, -2 * off.imag, 2 * pop])
    pc = math.atan2(c2.imag, c2.real) if c2 != 0 else 0.0
    pd = math.atan2(d2.imag, d2.real) if d2 != 0 else 0.0
    return ChannelMap(M, v, pc, pd)


def _z_rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def svd_channel(M: ChannelMap, c: complex, d: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(U, O, Diag) with M = U O Diag O^T for a ground-state receiver.

    U is the clockwise Z rotation by phi_C, O the anticlockwise rotation by
    (phi_C + phi_D)/2.  The third singular value is next-to-leading order and
    set to 0.
    """
    c, d = complex(c), complex(d)
    pc = math.atan2(c.imag, c.real) if c != 0 else 0.0
    pd = math.atan2(d.imag, d.real) if d != 0 else 0.0
    U = _z_rotation(pc)
    O = _z_rotation(-(pc + pd) / 2)
    Diag = np.diag([abs(c) + abs(d), abs(c) - abs(d), 0.0])
    return U, O, Diag


def optimal_alice_states(sc) -> Tuple[BlochVector, BlochVector]:
    """Antipodal equatorial pair maximizing the receiver's output trace distance."""
    pc, pd = _phases(*_coeffs(sc))
    a = 0.5 * (pc + pd)
    r = BlochVector(math.cos(a), math.sin(a), 0.0)
    return r, -r


def optimal_bob_state(sc, kappa: float) -> DetectorState:
    """Pure receiver state with ground population ``kappa`` from the optimal family."""
    if not 0.0 <= kappa <= 1.0:
        raise DomainError("kappa must lie in [0, 1]")
    pc, pd = _phases(*_coeffs(sc))
    phi = 1.0 - kappa
    delta = math.sqrt(kappa * phi) * complex(math.cos((pc - pd) / 2), math.sin((pc - pd) / 2))
    return DetectorState(phi, kappa, delta)


def trace_distance(r1, r2) -> float:
    a = r1.array if isinstance(r1, BlochVector) else np.asarray(r1, dtype=float)
    b = r2.array if isinstance(r2, BlochVector) else np.asarray(r2, dtype=float)
    return 0.5 * float(np.linalg.norm(a - b))


def measurement_basis(sc, bob: DetectorState) -> Tuple[BlochVector, BlochVector]:
    """Directions of the two signal-dependent output displacements, orthogonal to Bob's state."""
    pc, pd = _phases(*_coeffs(sc))
    b = 0.5 * (pc - pd)
    kp = bob.ground - bob.excited
    r = np.array([kp * math.cos(b), -kp * math.sin(b), 2 * abs(complex(bob.coherence))])
    n = np.linalg.norm(r)
    if n == 0:
        raise DomainError("the receiver's state carries no signal direction")
    out = BlochVector.from_array(r / n)
    return out, -out


def signal_trace_distance(sc, bob: DetectorState, alice: Optional[BlochVector] = None) -> float:
    """Output trace distance for the antipodal inputs +-alice (optimal pair by default)."""
    if alice is None:
        alice = optimal_alice_states(sc)[0]
    cm = leading_channel_matrix(sc, bob)
    return float(np.linalg.norm(cm.M @ alice.array))


# capacities ------------------------------------------------------------------


@dataclass(frozen=True)
class CapacityReport:
    """Leading-order capacity measures.

    ``p_bit_upper`` is 1/2 + D, the bit probability that the Shannon
    constant pairs with.
    """

    trace_distance: float
    p_bit: float
    p_bit_upper: float
    shannon: float
    holevo: Optional[float]
    valid: bool


def capacities(sc, p2: Optional[float] = None) -> CapacityReport:
    """Capacities at optimal signaling; D = |C2| + |D2|.

    Holevo needs the receiver's vacuum excitation ``p2`` in (0, 1) and is
    omitted (with a warning) otherwise.
    """
    c2, d2 = _coeffs(sc)
    D = abs(c2) + abs(d2)
    holevo = None
    if p2 is not None:
        p2 = float(np.real(p2))
        if 0.0 < p2 < 1.0:
            holevo = -math.log(p2) * D * D / (4 * math.log(2))
        else:
            warnings.warn(f"p2 = {p2!r} outside (0, 1); Holevo capacity omitted", stacklevel=2)
    return CapacityReport(
        trace_distance=D,
        p_bit=0.5 + 0.5 * D,
        p_bit_upper=0.5 + D,
        shannon=2.0 / math.log(2) * D * D,
        holevo=holevo,
        valid=D < VALIDITY_LIMIT,
    )


def _h2(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bac_mutual_information(prior: float, e0: float, e1: float) -> float:
    """I(X;Y) in bits for P(1|0) = e0, P(0|1) = e1 and P(X=1) = prior."""
    p_out = prior * (1 - e1) + (1 - prior) * e0
    return _h2(p_out) - prior * _h2(e1) - (1 - prior) * _h2(e0)


def bac_capacity(e0: float, e1: float) -> float:
    """Capacity in bits of the binary asymmetric channel with flip probabilities e0, e1."""
    for e in (e0, e1):
        if not 0.0 <= e <= 1.0:
            raise DomainError("flip probabilities must lie in [0, 1]")
    res = minimize_scalar(
        lambda q: -bac_mutual_information(q, e0, e1),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return max(0.0, -float(res.fun))


def leading_flip_probabilities(sc) -> Tuple[float, float]:
    """Flip probabilities when Bob measures along :func:`measurement_basis` at optimal signaling.

    The two outputs sit at +-D along the measured axis, so each bit flips with
    probability (1 - D)/2.
    """
    c2, d2 = _coeffs(sc)
    D = abs(c2) + abs(d2)
    if D > 1:
        raise DomainError("|C2| + |D2| > 1 is outside the leading-order regime")
    e = 0.5 * (1.0 - D)
    return e, e
