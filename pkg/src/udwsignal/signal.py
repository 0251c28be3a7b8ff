"""Leading-order signaling coefficients C2 and D2 by quadrature.

The double time integral is reduced to a single outer integral over Bob's
coordinate time ``t1``:

* 3+1: the commutator is a delta on the past light cone, so the inner
  integral collapses onto the retarded emission time with the Jacobian
  ``1 / (1 - n.v_A)``.
* 1+1: the commutator is constant inside the light cone and the inner
  integral is the closed-form Fourier primitive of Alice's switching.
* 2+1: the inner integral runs up to the retarded time with an inverse
  square-root edge, handled by the compiled kernel in ``s = sqrt(t~ - t2)``.

``lambda_A lambda_B`` is factored out and restored at the end.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from . import kernels, kinematics
from .errors import AccuracyError, ConfigurationError, DomainError, NumericalError
from .field import FOUR_PI, wightman_3p1
from .quadrature import integrate_segments
from .scenario import DetectorConfig, Scenario, mirror
from .switching import support_window

TWO_PI = 2.0 * math.pi


class PerturbativeWarning(UserWarning):
    """A coefficient is not small compared with one."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_depth: int = 12
    points_per_period: int = 16
    tail_tol: float = 1e-9

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.tail_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be at least 1")
        if self.points_per_period < 8:
            raise DomainError("points_per_period must be at least 8")

    def tightened(self, factor: float = 10.0) -> "QuadratureConfig":
        return replace(self, rel_tol=self.rel_tol / factor, abs_tol=self.abs_tol / factor)


@dataclass(frozen=True)
class SignalCoefficients:
    c2: complex
    d2: complex
    err_c2: float = 0.0
    err_d2: float = 0.0
    notes: tuple = ()

    @property
    def strength(self) -> float:
        return signal_strength(self)

    @property
    def strength_err(self) -> float:
        return self.err_c2 + self.err_d2


def signal_strength(sc: SignalCoefficients) -> float:
    """|C2| + |D2|."""
    return abs(sc.c2) + abs(sc.d2)


def _null_weight(w, vel, dtau_dt, d, r, xa, ta, xb, tb):
    """-k.u for the worldline ``w`` with k = (r, d) the null vector from (ta, xa) to (tb, xb).

    On the hyperbola the direct form (r - d.v) / (d tau/dt) cancels
    catastrophically at early times; there -k.u = a (x_A tb - x_B ta)
    along the acceleration axis, which is exact for either endpoint.
    """
    if isinstance(w, kinematics.UniformAcceleration):
        return w.a * (xa[..., 0] * tb - xb[..., 0] * ta)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (r - np.einsum("...k,...k->...", d, vel)) / dtau_dt


class _ReceptionIntegrand:
    """Outer integrand over Bob's coordinate time for one pair of gaps."""

    def __init__(self, scenario: Scenario, omega_a: float, omega_b: float, cfg: QuadratureConfig):
        self.n = scenario.dim
        self.wa = scenario.alice.worldline
        self.wb = scenario.bob.worldline
        self.sa = scenario.alice.switching
        self.sb = scenario.bob_switching()
        self.oa = float(omega_a)
        self.ob = float(omega_b)
        self.cfg = cfg
        self.ka, self.pa = self.wa.kernel_spec()
        self.kb, self.pb = self.wb.kernel_spec()
        self.a_lo, self.a_hi = support_window(self.sa, self.wa, scenario.cutoff)
        self.b_lo, self.b_hi = support_window(self.sb, self.wb, scenario.cutoff)
        self._cache_key = None
        self._cache = None
        if self.n == 2 and not (math.isfinite(self.a_lo) and math.isfinite(self.a_hi)):
            raise ConfigurationError("2+1 scenarios need a sender window of finite coordinate length")

    # geometry -------------------------------------------------------------
    def retarded(self, t1):
        t1 = np.asarray(t1, dtype=float)
        return kernels.backend.retarded_times(self.ka, self.pa, self.kb, self.pb, t1.ravel()).reshape(t1.shape)

    def _pad(self, x):
        out = np.zeros(x.shape[:-1] + (3,))
        out[..., : x.shape[-1]] = x
        return out

    def _null_weights(self, t2, t1):
        """-k.u_A, -k.u_B and |dx| for the null vector k from Alice at t2 to Bob at t1."""
        xa = self.wa.position_at(t2)
        xb = self.wb.position_at(t1)
        d = xb - xa
        r = np.linalg.norm(d, axis=-1)
        return (
            _null_weight(self.wa, self.wa.velocity_at(t2), self.wa.dtau_dt(t2), d, r, xa, t2, xb, t1),
            _null_weight(self.wb, self.wb.velocity_at(t1), self.wb.dtau_dt(t1), d, r, xa, t2, xb, t1),
            r,
        )

    def _evaluate(self, t1):
        t1 = np.asarray(t1, dtype=float)
        key = (t1.shape, t1.tobytes())
        if key == self._cache_key:
            return self._cache
        tt = self.retarded(t1)
        valid = np.isfinite(tt)
        tts = np.where(valid, tt, 0.0)
        tau_b = self.wb.proper_time(t1)
        chib = self.sb.eta(tau_b) * self.wb.dtau_dt(t1)
        extra = np.zeros(t1.shape)
        if self.n == 3:
            tau_a = self.wa.proper_time(tts)
            w_a, _, r = self._null_weights(tts, t1)
            with np.errstate(divide="ignore", invalid="ignore"):
                amp = chib * self.sa.eta(tau_a) * 1j / (FOUR_PI * w_a)
            amp = np.where(valid & (r > 0), amp, 0.0)
            phase = self.ob * tau_b - self.oa * tau_a
        else:
            te = np.minimum(tts, self.a_hi)
            tau_e = self.wa.proper_time(te)
            if self.n == 1:
                prim = self.sa.primitive(-self.oa, self.wa.proper_time(tts))
                amp = 0.5j * chib * prim * np.exp(1j * self.oa * tau_e)
            else:
                inner, inner_err = kernels.backend.inner_2p1(
                    self.ka, self.pa, *self.sa.kernel_spec(), self.oa, self.kb, self.pb,
                    t1.ravel(), tt.ravel(), self.a_lo, self.a_hi, self.cfg.points_per_period,
                    0.1 * self.cfg.rel_tol, 0.1 * self.cfg.abs_tol, self.cfg.max_depth,
                )
                inner = inner.reshape(t1.shape)
                pref = chib / TWO_PI
                amp = 1j * pref * inner * np.exp(1j * self.oa * tau_e)
                extra = np.abs(pref) * inner_err.reshape(t1.shape)
            amp = np.where(valid, amp, 0.0)
            phase = self.ob * tau_b - self.oa * tau_e
        phase = np.where(valid, phase, 0.0)
        self._cache_key = key
        self._cache = (amp, phase, extra, tt)
        return self._cache

    # integrand protocol ---------------------------------------------------
    def amp_phase(self, t1):
        amp, phase, _, _ = self._evaluate(t1)
        return amp, phase

    def values(self, t1):
        amp, phase, _, _ = self._evaluate(t1)
        return amp * np.exp(1j * phase)

    def extra_error(self, t1):
        return self._evaluate(t1)[2]

    def dphase(self, t1):
        t1 = np.asarray(t1, dtype=float)
        tt = self.retarded(t1)
        valid = np.isfinite(tt)
        tts = np.where(valid, tt, 0.0)
        w_a, w_b, r = self._null_weights(tts, t1)
        dtau_b = self.wb.dtau_dt(t1)
        te = np.minimum(tts, self.a_hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            # d tau_A / d t1 along the ray is (k.u_B / k.u_A) d tau_B / d t1
            rate = np.where(r > 0, dtau_b * w_b / w_a, self.wa.dtau_dt(te))
        if self.n != 3:
            rate = np.where(tts < self.a_hi, rate, 0.0)
        out = self.ob * dtau_b - self.oa * rate
        return np.where(valid, out, self.ob * dtau_b)

    def budget(self, t1):
        t1 = np.asarray(t1, dtype=float)
        tt = self.retarded(t1)
        floor = self.a_lo if math.isfinite(self.a_lo) else -1e300
        te = np.clip(np.where(np.isfinite(tt), tt, floor), floor, self.a_hi)
        return abs(self.ob) * self.wb.proper_time(t1) + abs(self.oa) * self.wa.proper_time(te)

    # integration range ----------------------------------------------------
    def has_contact(self, t1: float) -> bool:
        return bool(np.isfinite(self.retarded(np.array([t1]))[0]))

    def _reception(self, t2: float) -> Optional[float]:
        # forward propagation loses x - t far out on a hyperbola; trust it only if the retarded root agrees
        if not math.isfinite(t2):
            return None
        t1 = kinematics.reception_time(self.wa, self.wb, t2)
        if t1 is None:
            return None
        back = self.retarded(np.array([t1]))[0]
        if not np.isfinite(back) or abs(back - t2) > 1e-6 * max(1.0, abs(t2)):
            return None
        return t1

    def edges(self) -> Optional[List[float]]:
        """Sorted breakpoints of the outer integral, or None when there is no causal contact."""
        wa, wb = self.wa, self.wb
        lo, hi = self.b_lo, self.b_hi
        first = self._reception(self.a_lo)
        if first is not None:
            lo = max(lo, first)
        last = self._reception(self.a_hi)
        if self.n == 3 and last is not None:
            hi = min(hi, last)
        if not lo < hi:
            return None
        if not self.has_contact(lo):
            probe_hi = hi if math.isfinite(hi) else max(abs(lo), 1.0) * 2.0
            while not self.has_contact(probe_hi):
                if not math.isfinite(hi) and probe_hi < 1e300:
                    probe_hi *= 16.0
                    continue
                return None
            a, b = lo, probe_hi
            if not math.isfinite(a):
                a = -abs(b) - 1.0
                while self.has_contact(a):
                    a *= 16.0
            for _ in range(400):
                m = 0.5 * (a + b)
                if self.has_contact(m):
                    b = m
                else:
                    a = m
                if b - a <= 4e-16 * max(1.0, abs(a), abs(b)):
                    break
            lo = b
        if not math.isfinite(lo):
            raise ConfigurationError("receiver window has no finite start; give Bob a bounded switching")
        cuts = {lo, hi}
        for tau in self.sb.kinks():
            cuts.add(float(wb.coordinate_time(tau)))
        alice_marks = [float(wa.coordinate_time(tau)) for tau in self.sa.kinks()]
        if self.n != 3:
            alice_marks.append(self.a_hi)
        for t2 in alice_marks:
            t1 = self._reception(t2)
            if t1 is not None:
                cuts.add(t1)
        return sorted(c for c in cuts if lo <= c <= hi)


def _coefficient(scenario: Scenario, omega_a: float, omega_b: float, cfg: QuadratureConfig):
    """lambda-stripped integral with phase exp(i(omega_b tau_B - omega_a tau_A)); (value, error, notes)."""
    integrand = _ReceptionIntegrand(scenario, omega_a, omega_b, cfg)
    edges = integrand.edges()
    if edges is None or len(edges) < 2:
        return 0j, 0.0, ("no causal contact",)
    res = integrate_segments(integrand, edges, cfg, tail_end=True, tail_start=True)
    return res.value, res.error, tuple(res.notes)


def _check_perturbative(sc: SignalCoefficients) -> None:
    if abs(sc.c2) > 0.1 or abs(sc.d2) > 0.1:
        warnings.warn(
            f"|C2| = {abs(sc.c2):.3g}, |D2| = {abs(sc.d2):.3g}: outside the perturbative regime",
            PerturbativeWarning,
            stacklevel=3,
        )


def compute_c2_d2(
    scenario: Scenario, q: Optional[QuadratureConfig] = None, d2_route: str = "identity"
) -> SignalCoefficients:
    """Leading-order signaling coefficients of ``scenario``.

    ``d2_route="identity"`` obtains D2 as ``-C2(Omega_A, -Omega_B)``;
    ``"direct"`` integrates the D2 integrand with its own phase
    ``exp(-i(Omega_B tau_B + Omega_A tau_A))`` in emission order.
    """
    cfg = q or QuadratureConfig()
    sc = scenario.resolved()
    lam = sc.alice.lam * sc.bob.lam
    oa, ob = sc.alice.omega, sc.bob.omega
    if lam == 0:
        return SignalCoefficients(0j, 0j, 0.0, 0.0, ("zero coupling",))
    c2, e_c2, n1 = _coefficient(sc, oa, ob, cfg)
    if d2_route == "identity":
        d2, e_d2, n2 = _coefficient(sc, oa, -ob, cfg)
        d2 = -d2
    elif d2_route == "direct":
        d2, e_d2, n2 = _direct_d2(sc, cfg)
    else:
        raise ConfigurationError(f"unknown D2 route {d2_route!r}")
    if sc.alice.switching.smooth or (sc.bob.switching is not None and sc.bob.switching.smooth):
        # windows of smooth profiles end where chi drops below the cutoff
        e_c2 += 10.0 * sc.cutoff * abs(c2)
        e_d2 += 10.0 * sc.cutoff * abs(d2)
    out = SignalCoefficients(lam * c2, lam * d2, lam * e_c2, lam * e_d2, n1 + n2)
    _check_perturbative(out)
    return out


class _EmissionIntegrand:
    """D2 integrand ordered by Alice's emission time (3+1 and 1+1).

    Integrates ``chi_A(t2) exp(-i Omega_A tau_A)`` against Bob's response
    to the ray or light cone leaving ``x_A(t2)``.
    """

    def __init__(self, scenario: Scenario, cfg: QuadratureConfig):
        self.n = scenario.dim
        self.wa = scenario.alice.worldline
        self.wb = scenario.bob.worldline
        self.sa = scenario.alice.switching
        self.sb = scenario.bob_switching()
        self.oa = scenario.alice.omega
        self.ob = scenario.bob.omega
        self.cutoff = scenario.cutoff
        self.a_lo, self.a_hi = support_window(self.sa, self.wa, scenario.cutoff)
        self.b_lo, self.b_hi = support_window(self.sb, self.wb, scenario.cutoff)
        self._rx = np.vectorize(self._reception, otypes=[float])

    def _reception(self, t2):
        r = kinematics.reception_time(self.wa, self.wb, t2)
        return np.nan if r is None else r

    def amp_phase(self, t2):
        t2 = np.asarray(t2, dtype=float)
        tr = self._rx(t2)
        valid = np.isfinite(tr)
        trs = np.where(valid, tr, 0.0)
        tau_a = self.wa.proper_time(t2)
        chia = self.sa.eta(tau_a) * self.wa.dtau_dt(t2)
        tau_r = self.wb.proper_time(trs)
        if self.n == 3:
            d = self.wb.position_at(trs) - self.wa.position_at(t2)
            r = np.linalg.norm(d, axis=-1)
            with np.errstate(divide="ignore", invalid="ignore"):
                nv = np.einsum("...k,...k->...", d, self.wb.velocity_at(trs)) / r
                chib = self.sb.eta(tau_r) * self.wb.dtau_dt(trs)
                amp = -chia * chib * 1j / (FOUR_PI * r * (1.0 - nv))
            amp = np.where(valid & (r > 0), amp, 0.0)
            phase = -self.ob * tau_r - self.oa * tau_a
        else:
            total = self.sb.fourier(-self.ob)
            before = self.sb.primitive(-self.ob, tau_r)
            after = np.where(valid, total - before, 0.0)
            lo_b = max(self.b_lo, -1e300)
            tau_s = self.wb.proper_time(np.maximum(trs, lo_b))
            amp = -0.5j * chia * after * np.exp(1j * self.ob * tau_s)
            phase = -self.ob * tau_s - self.oa * tau_a
        return amp, phase

    def values(self, t2):
        amp, phase = self.amp_phase(t2)
        return amp * np.exp(1j * phase)

    def dphase(self, t2):
        raise NumericalError("emission-ordered route has no tail handling")

    def budget(self, t2):
        t2 = np.asarray(t2, dtype=float)
        tr = self._rx(t2)
        lo_b = max(self.b_lo, -1e300)
        trs = np.clip(np.where(np.isfinite(tr), tr, lo_b), lo_b, self.b_hi)
        return abs(self.ob) * self.wb.proper_time(trs) + abs(self.oa) * self.wa.proper_time(t2)

    def edges(self) -> Optional[List[float]]:
        lo, hi = self.a_lo, self.a_hi
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigurationError("emission-ordered route needs a finite sender window")
        cuts = {lo, hi}
        for tau in self.sa.kinks():
            cuts.add(float(self.wa.coordinate_time(tau)))
        for t1 in (self.b_lo, self.b_hi):
            if math.isfinite(t1):
                t2 = kinematics.retarded_emission_time(self.wa, self.wb, t1)
                if t2 is not None:
                    cuts.add(t2)
        for tau in self.sb.kinks():
            t2 = kinematics.retarded_emission_time(self.wa, self.wb, float(self.wb.coordinate_time(tau)))
            if t2 is not None:
                cuts.add(t2)
        cuts = sorted(c for c in cuts if lo <= c <= hi)
        return cuts if len(cuts) >= 2 else None


def _direct_d2(scenario: Scenario, cfg: QuadratureConfig):
    if scenario.dim == 2:
        # no emission-ordered reduction in 2+1; integrate the D2 phase in reception order
        value, err, notes = _coefficient(scenario, scenario.alice.omega, -scenario.bob.omega, cfg)
        return -value, err, notes
    integrand = _EmissionIntegrand(scenario, cfg)
    edges = integrand.edges()
    if edges is None:
        return 0j, 0.0, ("no causal contact",)
    res = integrate_segments(integrand, edges, cfg)
    return res.value, res.error, tuple(res.notes)


# mirror symmetry --------------------------------------------------------------


@dataclass(frozen=True)
class MirrorReport:
    original: SignalCoefficients
    mirrored: SignalCoefficients
    c2_gap: float
    d2_gap: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.c2_gap <= self.tolerance and self.d2_gap <= self.tolerance


class MirrorSymmetryError(NumericalError):
    """Mirrored coefficients differ by more than the combined error estimates."""


def verify_mirror_symmetry(
    scenario: Scenario, q: Optional[QuadratureConfig] = None, raise_on_failure: bool = False
) -> MirrorReport:
    """Compare C2' with C2 and D2' with -D2* for the time-mirrored scenario."""
    cfg = q or QuadratureConfig()
    orig = compute_c2_d2(scenario, cfg)
    mirr = compute_c2_d2(mirror(scenario), cfg)
    tol = orig.err_c2 + orig.err_d2 + mirr.err_c2 + mirr.err_d2
    tol = max(tol, 64 * np.finfo(float).eps * (abs(orig.c2) + abs(orig.d2)))
    report = MirrorReport(
        orig,
        mirr,
        abs(mirr.c2 - orig.c2),
        abs(mirr.d2 + orig.d2.conjugate()),
        tol,
    )
    if raise_on_failure and not report.passed:
        raise MirrorSymmetryError(
            f"mirror symmetry violated: |dC2| = {report.c2_gap:.3g}, |dD2| = {report.d2_gap:.3g}, tol {tol:.3g}",
            state={"report": report},
        )
    return report


# single-detector coefficients -------------------------------------------------


@dataclass(frozen=True)
class SingleDetectorCoefficients:
    """Vacuum terms of one detector; ``r2`` is reported at the finite regulator ``eps``."""

    p2: complex
    q2: complex
    r2: complex
    s2: complex
    eps: float = 0.0
    p2_spread: float = 0.0
    err: float = 0.0


class _LagIntegrand:
    """Integrand over the proper-time lag u = tau(t1) - tau(t2) for a stationary detector."""

    def __init__(self, fun, omega):
        self.fun = fun
        self.omega = abs(omega)

    def values(self, u):
        return self.fun(np.asarray(u, dtype=float))

    def budget(self, u):
        return self.omega * np.asarray(u, dtype=float)

    def amp_phase(self, u):
        return self.values(u), np.zeros(np.shape(u))

    def dphase(self, u):
        return np.full(np.shape(u), self.omega)


def _lag_kernels(profile, omega: float):
    """Autocorrelation K(u) and its S2 partner K_S(u) of the proper-time switching."""
    from .switching import ExponentialDecay, Gaussian

    if isinstance(profile, Gaussian):
        w, c = profile.width, profile.center
        root = w * math.sqrt(math.pi)

        def K(u):
            return root * np.exp(-u * u / (4.0 * w * w))

        def KS(u):
            return K(u) * np.exp(-2j * omega * c + 1j * omega * u - (omega * w) ** 2)

        return K, KS, w * math.sqrt(-4.0 * math.log(1e-17))
    if isinstance(profile, ExponentialDecay):
        s = profile.sigma

        def K(u):
            a = np.abs(u)
            return (s + a) * np.exp(-a / s)

        def KS(u):
            u = np.asarray(u, dtype=float)
            a = np.abs(u)
            rate = 2.0 / s
            two = 2.0 * omega
            if omega != 0:
                mid = np.expm1(1j * two * a) / (1j * two)
            else:
                mid = a + 0j
            plus = np.exp(-a / s) * (np.exp(1j * two * a) / (rate - 1j * two) + mid + 1.0 / (rate + 1j * two))
            return np.where(u >= 0, plus, np.exp(1j * two * u) * plus)

        return K, KS, 40.0 * s
    raise ConfigurationError("single-detector terms are UV divergent for sudden switching; use a smooth profile")


def _lag_wightman(worldline, eps: float):
    """Regulated Wightman function <phi(x(t2)) phi(x(t1))> as a function of the proper-time lag."""
    if isinstance(worldline, kinematics.Rest):
        gamma, speed = 1.0, 0.0
    elif isinstance(worldline, kinematics.Inertial):
        speed = float(worldline.speed)
        gamma = 1.0 / math.sqrt((1.0 - speed) * (1.0 + speed))
    else:
        raise ConfigurationError("single-detector terms are implemented for inertial detectors")

    def W(u):
        # x(t2) relative to x(t1) along the direction of motion
        x2 = (gamma * speed * np.abs(u))[:, None]
        return wightman_3p1(-gamma * u, x2, 0.0, np.zeros(1), eps)

    return W


def _lag_edges(eps: float, reach: float) -> List[float]:
    # geometric grading resolves the width-eps peak at zero lag
    pos = [0.0]
    h = eps / 8.0
    while h < reach:
        pos.append(h)
        h *= 2.0
    pos.append(reach)
    return sorted({-p for p in pos} | set(pos))


def _lag_integral(fun, omega, edges, cfg) -> Tuple[complex, float]:
    res = integrate_segments(_LagIntegrand(fun, omega), edges, cfg)
    return res.value, res.error


def _single_terms(bob: DetectorConfig, cfg: QuadratureConfig, eps: float):
    om = bob.omega
    K, KS, reach = _lag_kernels(bob.switching, om)
    W = _lag_wightman(bob.worldline, eps)
    edges = _lag_edges(eps, reach)
    half = [e for e in edges if e >= 0]
    lam2 = bob.lam**2
    p2, ep = _lag_integral(lambda u: K(u) * np.exp(1j * om * u) * W(u), om, edges, cfg)
    q2, eq = _lag_integral(lambda u: K(u) * np.exp(-1j * om * u) * W(u), om, edges, cfg)
    r2, er = _lag_integral(lambda u: K(u) * np.exp(1j * om * u) * 2.0 * W(u).real, om, half, cfg)
    s2, es = _lag_integral(lambda u: KS(u) * np.exp(-1j * om * u) * W(u), om, edges, cfg)
    return lam2 * p2, -lam2 * q2, -lam2 * r2, lam2 * s2, lam2 * (ep + eq + er + es)


def _richardson(values: List[complex]) -> complex:
    """Two Richardson steps for a sequence at eps, eps/2, eps/4 with O(eps) leading error."""
    r1 = [2.0 * values[1] - values[0], 2.0 * values[2] - values[1]]
    return (4.0 * r1[1] - r1[0]) / 3.0


def compute_single_detector(
    bob: DetectorConfig, q: Optional[QuadratureConfig] = None, eps: float = 1e-2
) -> SingleDetectorCoefficients:
    """P2, Q2, R2, S2 of a stationary 3+1 detector with smooth switching.

    P2, Q2 and S2 are extrapolated to eps -> 0 from eps, eps/2, eps/4.  R2
    has no finite eps -> 0 limit and is reported at ``eps``.
    """
    cfg = q or QuadratureConfig()
    if bob.dim != 3:
        raise ConfigurationError("single-detector terms are implemented in 3+1 dimensions")
    if bob.switching is None or not bob.switching.smooth:
        raise ConfigurationError("single-detector terms are UV divergent for sudden switching; use a smooth profile")
    if not (eps > 0 and math.isfinite(eps)):
        raise DomainError("the regulator eps must be positive")
    if bob.lam == 0:
        return SingleDetectorCoefficients(0j, 0j, 0j, 0j, eps)
    runs = [_single_terms(bob, cfg, eps / 2**k) for k in range(4)]
    p_seq = [r[0] for r in runs]
    p2 = _richardson(p_seq[:3])
    p2_alt = _richardson(p_seq[1:])
    q2 = _richardson([r[1] for r in runs[:3]])
    s2 = _richardson([r[3] for r in runs[:3]])
    spread = abs(p2_alt - p2)
    if spread > 1e-3 * max(abs(p2_alt), 1e-300) and spread > 1e3 * runs[0][4]:
        raise AccuracyError(f"eps extrapolation of P2 is not stable (spread {spread:.3g})", best=p2_alt, error=spread)
    return SingleDetectorCoefficients(p2_alt, q2, runs[0][2], s2, eps, spread, max(r[4] for r in runs))
