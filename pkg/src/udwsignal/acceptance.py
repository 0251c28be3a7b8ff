"""End-to-end acceptance checks shared by ``udwsignal verify`` and the test suite.

Each check returns a :class:`CriterionResult`; nothing here raises on a
failed comparison, so one report always covers every criterion.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from . import channel
from .closedform import (
    CaseParams,
    ClosedFormCase,
    accel_1p1_strength,
    build_scenario,
    closed_form,
    doppler,
    is_strength_only,
    timelike_1p1_coefficients,
)
from .fit import power_law
from .kinematics import Inertial, Rest, UniformAcceleration
from .scenario import DetectorConfig, Scenario
from .signal import QuadratureConfig, compute_c2_d2, compute_single_detector, verify_mirror_symmetry
from .switching import ExponentialDecay, Gaussian, Sudden

C = ClosedFormCase


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> Dict[str, object]:
        return {"criterion": self.number, "name": self.name, "passed": bool(self.passed),
                "seconds": round(self.seconds, 3), "detail": self.detail}

    def line(self) -> str:
        return f"criterion {self.number:2d} {'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}"


def _quad(strict: bool) -> QuadratureConfig:
    q = QuadratureConfig()
    return q.tightened(10.0) if strict else q


# 1. oracle equivalence ------------------------------------------------------

ZETA_06 = doppler(0.6)
PINNED_POINTS = [
    (C.REST_1P1, CaseParams(omega_a=1.0, omega_b=2.0, L=1.0, T=3.0)),
    (C.REST_1P1, CaseParams(omega_a=2.5, omega_b=0.7, L=2.0, T=5.0)),
    (C.REST_1P1, CaseParams(omega_a=0.3, omega_b=1.1, L=1.0, T=7.5)),
    (C.REST_1P1_RESONANT, CaseParams(omega_a=1.0, L=1.0, T=3.0)),
    (C.REST_1P1_RESONANT, CaseParams(omega_a=2.2, L=0.5, T=4.0)),
    (C.REST_3P1, CaseParams(omega_a=1.3, omega_b=1.7, L=1.0, T=7.5)),
    (C.REST_3P1, CaseParams(omega_a=0.5, omega_b=2.0, L=2.0, T=3.0)),
    (C.REST_3P1, CaseParams(omega_a=3.0, omega_b=2.9, L=1.0, T=5.0)),
    (C.REST_3P1, CaseParams(omega_a=1.0, omega_b=1.0 + 1e-4, L=1.0, T=7.5)),
    (C.REST_3P1_RESONANT, CaseParams(omega_a=1.0, L=1.0, T=7.5)),
    (C.REST_3P1_RESONANT, CaseParams(omega_a=2.0, L=3.0, T=2.0)),
    (C.REST_1P1_ZERO_GAP, CaseParams(L=1.0, T=2.0)),
    (C.REST_1P1_ZERO_GAP, CaseParams(L=5.0, T=1.0)),
    (C.REST_3P1_ZERO_GAP, CaseParams(L=1.0, T=2.0)),
    (C.REST_3P1_ZERO_GAP, CaseParams(L=10.0, T=3.0)),
    (C.REST_2P1_ZERO_GAP, CaseParams(L=1.0, T=1.0)),
    (C.REST_2P1_ZERO_GAP, CaseParams(L=30.0, T=1.0)),
    (C.REST_2P1_ZERO_GAP, CaseParams(L=2.0, T=5.0)),
    (C.INERTIAL_3P1, CaseParams(omega_a=2.5, omega_b=1.4, L=1.0, T=7.5, v=0.5)),
    (C.INERTIAL_3P1, CaseParams(omega_a=1.0, omega_b=2.0, L=1.0, T=3.0, v=0.2)),
    (C.INERTIAL_3P1, CaseParams(omega_a=2.5, omega_b=0.9, L=2.0, T=7.5, v=0.8)),
    (C.INERTIAL_3P1, CaseParams(omega_a=1.5, omega_b=1.2, L=1.0, T=2.0, v=1e-5)),
    (C.INERTIAL_3P1_RESONANT, CaseParams(omega_a=2.5, L=1.0, T=7.5, v=0.5)),
    (C.INERTIAL_3P1_RESONANT, CaseParams(omega_a=1.0, L=1.0, T=2.0, v=0.3)),
    (C.INERTIAL_1P1, CaseParams(omega_a=1.0, omega_b=2.0, L=1.0, T=3.0, v=0.5)),
    (C.INERTIAL_1P1, CaseParams(omega_a=2.0, omega_b=2.0 / ZETA_06, L=1.0, T=4.0, v=0.6)),
    (C.ACCEL_3P1, CaseParams(omega_a=1.0, omega_b=1.0, a=1.0)),
    (C.ACCEL_3P1, CaseParams(omega_a=1.0, omega_b=1.0, a=2.0)),
    (C.ACCEL_1P1_LIMIT, CaseParams(omega_a=1.0, omega_b=1.0, a=1.0)),
    (C.ACCEL_1P1_LIMIT, CaseParams(omega_a=2.0, omega_b=0.5, a=1.0)),
    (C.TIMELIKE_1P1_SUDDEN, CaseParams(omega_a=1.0, omega_b=2.0, L=1.0, T=3.0, gap=0.5)),
    (C.TIMELIKE_1P1_SUDDEN, CaseParams(omega_a=2.2, omega_b=0.7, L=0.5, T=2.0, gap=1.0, T_b=3.0)),
]


def oracle_point(case, p, q, closed=closed_form) -> Dict[str, object]:
    """Compare quadrature with the closed form at one catalogue point."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        num = compute_c2_d2(build_scenario(case, p), q)
        ref = closed(case, p)
    if is_strength_only(case):
        pairs = [(num.strength, abs(ref.c2))]
    else:
        pairs = [(num.c2, ref.c2), (num.d2, ref.d2)]
    worst = max(abs(a - b) / max(1e-6, 1e-4 * abs(b)) for a, b in pairs)
    return {"case": case.value, "ratio": worst, "ok": worst <= 1.0}


def criterion_1(strict=False, closed: Callable = closed_form, points=None) -> CriterionResult:
    q = _quad(strict)
    pts = PINNED_POINTS if points is None else points
    t0 = time.perf_counter()
    rows = [oracle_point(c, p, q, closed) for c, p in pts]
    took = time.perf_counter() - t0
    cases = {c for c, _ in pts}
    bad = [r["case"] for r in rows if not r["ok"]]
    covered = points is not None or (cases == set(ClosedFormCase) and len(pts) >= 30)
    ok = not bad and covered and took < 120.0
    detail = {"points": len(pts), "cases": len(cases), "worst_ratio": max(r["ratio"] for r in rows),
              "failing": bad, "runtime_s": round(took, 2)}
    return CriterionResult(1, "oracle equivalence", ok, detail)


# 2. resonance ---------------------------------------------------------------


def resonance_grid(q, n: int = 41, lo: float = 0.1, hi: float = 4.1, T: float = 7.5) -> np.ndarray:
    grid = np.linspace(lo, hi, n)
    out = np.empty((n, n))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i, oa in enumerate(grid):
            for j, ob in enumerate(grid):
                sc = build_scenario(C.REST_3P1, CaseParams(omega_a=oa, omega_b=ob, L=1.0, T=T))
                out[i, j] = compute_c2_d2(sc, q).strength
    return out


def criterion_2(strict=False) -> CriterionResult:
    s = resonance_grid(_quad(strict))
    i, j = np.unravel_index(int(s.argmax()), s.shape)
    ridge = [int(s[k].argmax()) - k for k in range(s.shape[0])]
    upper = ridge[s.shape[0] // 8:]
    detail = {"argmax": [int(i), int(j)], "ridge_offsets_above_omega_0.6": sorted(set(upper))}
    return CriterionResult(2, "resonance ridge", abs(int(i) - int(j)) <= 1, detail)


# 3. Doppler -----------------------------------------------------------------


def criterion_3(strict=False) -> CriterionResult:
    q = _quad(strict)
    grid = np.linspace(0.5, 3.0, 101)
    step = grid[1] - grid[0]
    found = {}
    ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for v in (0.2, 0.5, 0.8):
            s = [compute_c2_d2(build_scenario(C.INERTIAL_3P1, CaseParams(omega_a=2.5, omega_b=ob, L=1.0, T=7.5, v=v)), q).strength
                 for ob in grid]
            peak = float(grid[int(np.argmax(s))])
            target = 2.5 / doppler(v)
            found[str(v)] = {"peak": peak, "omega_a_over_zeta": target}
            ok &= abs(peak - target) <= step * (1 + 1e-9)
    return CriterionResult(3, "Doppler detuning", ok, found)


# 4. distance scaling --------------------------------------------------------


def _L_sweep(case, Ls, q, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return [compute_c2_d2(build_scenario(case, CaseParams(L=float(L), **kw)), q).strength for L in Ls]


def criterion_4(strict=False) -> CriterionResult:
    q = _quad(strict)
    fits = {
        "3+1 rest": (power_law(np.geomspace(1, 100, 9), _L_sweep(C.REST_3P1_ZERO_GAP, np.geomspace(1, 100, 9), q, T=1.0)), -1.0, 0.02),
        "2+1 rest zero gap": (power_law(np.geomspace(30, 3000, 9), _L_sweep(C.REST_2P1_ZERO_GAP, np.geomspace(30, 3000, 9), q, T=1.0)), -0.5, 0.05),
        "1+1 rest": (power_law(np.geomspace(1, 100, 9), _L_sweep(C.REST_1P1, np.geomspace(1, 100, 9), q, T=3.0, omega_a=1.0, omega_b=2.0)), 0.0, 0.02),
    }
    detail, ok = {}, True
    for name, (f, want, tol) in fits.items():
        detail[name] = round(f.exponent, 6)
        ok &= abs(f.exponent - want) <= tol
    return CriterionResult(4, "distance scaling", ok, detail)


# 5. acceleration bound ------------------------------------------------------


def criterion_5(strict=False) -> CriterionResult:
    accel = [1.0, 10.0, 100.0, 1000.0]
    s = [accel_1p1_strength(1.0, 1.0, a) for a in accel]
    gaps = [abs(x - 1.0) for x in s]
    monotone = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1] < 1e-3
    return CriterionResult(5, "acceleration bound", ok, {"strengths": s, "monotone": monotone})


# 6. accelerated 3+1 ---------------------------------------------------------


def criterion_6(strict=False, closed: Callable = closed_form) -> CriterionResult:
    q = _quad(strict)
    detail, ok = {}, True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for x, y in ((0.5, 0.5), (1.0, 1.0), (2.0, 1.0)):
            p = CaseParams(omega_b=x, omega_a=y, a=1.0)
            ref = closed(C.ACCEL_3P1, p).strength
            num = compute_c2_d2(build_scenario(C.ACCEL_3P1, p), q).strength
            rel = abs(num - ref) / ref
            detail[f"({x},{y})"] = rel
            ok &= rel <= 1e-3
    return CriterionResult(6, "accelerated 3+1", ok, detail)


# 7. timelike factorization --------------------------------------------------


def _timelike_scenario(sa, sb, oa, ob, L=0.0):
    return Scenario(1, DetectorConfig(1.0, oa, Rest((0.0,)), sa), DetectorConfig(1.0, ob, Rest((L,)), sb))


def criterion_7(strict=False) -> CriterionResult:
    q = _quad(strict)
    worst_fac = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for sa, sb, oa, ob, L in (
            (Sudden(0.0, 3.0), Sudden(5.0, 2.0), 1.0, 2.0, 1.0),
            (Sudden(0.0, 1.7), Sudden(4.0, 3.3), 2.2, 0.7, 2.0),
            (Sudden(-1.0, 2.0), Sudden(2.5, 1.0), 0.4, 3.1, 0.0),
        ):
            num = compute_c2_d2(_timelike_scenario(sa, sb, oa, ob, L), q)
            ref = timelike_1p1_coefficients(sa, sb, oa, ob)
            worst_fac = max(worst_fac, abs(num.c2 - ref.c2), abs(num.d2 - ref.d2))
        oa, ob = 1.3, 2.1
        half = compute_c2_d2(_timelike_scenario(Sudden(0.0, 1.5 * 2 * math.pi / oa), Sudden(20.0, 0.5 * 2 * math.pi / ob), oa, ob), q)
        full = compute_c2_d2(_timelike_scenario(Sudden(0.0, 2 * math.pi / oa), Sudden(20.0, 2 * 2 * math.pi / ob), oa, ob), q)
    half_gap = abs(half.strength - 4.0 / (oa * ob))
    ok = worst_fac <= 1e-8 and half_gap <= 1e-10 and full.strength <= 1e-10
    detail = {"factorization_gap": worst_fac, "half_period_gap": half_gap, "full_period_strength": full.strength}
    return CriterionResult(7, "timelike factorization", ok, detail)


# 8. mirror symmetry ---------------------------------------------------------


def random_scenarios(seed: int = 20240611, count: int = 10) -> List[Scenario]:
    """Mixed dimensions, worldlines and switchings with causal contact."""
    rng = np.random.default_rng(seed)
    out: List[Scenario] = []
    while len(out) < count:
        kind = len(out) % 5
        oa, ob = rng.uniform(0.3, 3.0, 2)
        if kind == 0:
            n = int(rng.integers(1, 4))
            pos = (float(rng.uniform(0.5, 3.0)),) + (0.0,) * (n - 1)
            alice = DetectorConfig(1.0, oa, Rest((0.0,) * n), Sudden(0.0, float(rng.uniform(1, 4))))
            bob = DetectorConfig(1.0, ob, Rest(pos), None)
        elif kind == 1:
            n = 3
            vel = tuple(rng.uniform(-0.4, 0.4, 3))
            alice = DetectorConfig(1.0, oa, Inertial(vel, (0.0, 0.0, 0.0)), Gaussian(2.0, float(rng.uniform(0.5, 1.5))))
            bob = DetectorConfig(1.0, ob, Rest(tuple(rng.uniform(1, 3, 3))), Gaussian(6.0, float(rng.uniform(0.8, 2.0))))
        elif kind == 2:
            n = 2
            alice = DetectorConfig(1.0, oa, Inertial(tuple(rng.uniform(-0.3, 0.3, 2)), (0.0, 0.0)), Sudden(0.0, float(rng.uniform(1, 3))))
            bob = DetectorConfig(1.0, ob, Rest(tuple(rng.uniform(1, 3, 2))), Gaussian(6.0, 1.5))
        elif kind == 3:
            n = 1
            alice = DetectorConfig(1.0, oa, Inertial((float(rng.uniform(-0.5, 0.5)),), (0.0,)), Sudden(0.0, float(rng.uniform(1, 3))))
            bob = DetectorConfig(1.0, ob, Inertial((float(rng.uniform(-0.5, 0.5)),), (float(rng.uniform(1, 3)),)), Sudden(1.0, float(rng.uniform(2, 5))))
        else:
            n = 3
            a = float(rng.uniform(0.5, 2.0))
            sigma = 1e8 / a
            alice = DetectorConfig(1.0, oa, UniformAcceleration(a, dim=3), ExponentialDecay(sigma))
            bob = DetectorConfig(1.0, ob, Rest((0.0, 0.0, 0.0)), ExponentialDecay(sigma))
        out.append(Scenario(n, alice, bob))
    return out


def criterion_8(strict=False, scenarios: Optional[Iterable[Scenario]] = None) -> CriterionResult:
    q = _quad(strict)
    gaps, ok = [], True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for sc in scenarios if scenarios is not None else random_scenarios():
            rep = verify_mirror_symmetry(sc, q)
            gaps.append(max(rep.c2_gap, rep.d2_gap) / rep.tolerance)
            ok &= rep.passed
    return CriterionResult(8, "mirror symmetry", ok, {"scenarios": len(gaps), "worst_gap_over_tol": max(gaps)})


# 9. channel optimality ------------------------------------------------------


def brute_force_trace_distance(pair, bob: channel.DetectorState, step_deg: float = 1.0) -> float:
    """Largest output trace distance over antipodal equatorial inputs on a degree grid."""
    M = channel.leading_channel_matrix(pair, bob).M
    ang = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    r = np.stack([np.cos(ang), np.sin(ang), np.zeros_like(ang)])
    return float(np.linalg.norm(M @ r, axis=0).max())


def criterion_9(strict=False, seed: int = 7) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst_excess = worst_analytic = worst_orth = 0.0
    worst_rel_grid = 0.0
    for _ in range(20):
        D = rng.uniform(0.005, 0.1)
        share = rng.uniform(0, 1)
        c2 = share * D * np.exp(1j * rng.uniform(-math.pi, math.pi))
        d2 = (1 - share) * D * np.exp(1j * rng.uniform(-math.pi, math.pi))
        pair = (complex(c2), complex(d2))
        alice, _ = channel.optimal_alice_states(pair)
        for kappa in np.linspace(0.0, 1.0, 21):
            bob = channel.optimal_bob_state(pair, float(kappa))
            analytic = channel.signal_trace_distance(pair, bob, alice)
            grid = brute_force_trace_distance(pair, bob)
            worst_analytic = max(worst_analytic, abs(analytic - D))
            worst_excess = max(worst_excess, grid - analytic)
            worst_rel_grid = max(worst_rel_grid, (analytic - grid) / D)
            mb, _ = channel.measurement_basis(pair, bob)
            worst_orth = max(worst_orth, abs(float(mb.array @ bob.bloch().array)))
        # no other receiver state does better
        for _ in range(5):
            v = rng.normal(size=3)
            v *= rng.uniform(0, 1) / np.linalg.norm(v)
            other = channel.DetectorState.from_bloch(channel.BlochVector.from_array(v))
            worst_excess = max(worst_excess, brute_force_trace_distance(pair, other) - D)
    ok = worst_analytic <= 1e-6 and worst_excess <= 1e-6 and worst_orth <= 1e-10 and worst_rel_grid <= 1e-4
    detail = {"analytic_vs_sum": worst_analytic, "grid_excess": worst_excess, "grid_shortfall_rel": worst_rel_grid,
              "orthogonality": worst_orth}
    return CriterionResult(9, "channel optimality", ok, detail)


# 10. capacities -------------------------------------------------------------


def criterion_10(strict=False) -> CriterionResult:
    rep = channel.capacities((0.1, 0.0), math.exp(-1.0))
    ln2 = math.log(2.0)
    hand = {"p_bit": 0.55, "shannon": 0.02 / ln2, "holevo": 0.01 / (4 * ln2)}
    formula_gap = max(abs(getattr(rep, k) - v) for k, v in hand.items())
    zero = channel.capacities((0.0, 0.0), math.exp(-1.0))
    zero_ok = zero.p_bit == 0.5 and zero.shannon == 0.0 and zero.holevo == 0.0
    D = 0.05
    exact = channel.bac_capacity(*channel.leading_flip_probabilities((D, 0.0)))
    leading = channel.capacities((D, 0.0)).shannon
    rel = abs(leading - exact) / exact
    ok = formula_gap <= 1e-12 and zero_ok and rel <= 0.10
    detail = {"formula_gap": formula_gap, "shannon_leading": leading, "bac_exact": exact, "bac_rel_gap": rel}
    return CriterionResult(10, "capacities", ok, detail)


# 11. single-detector P2 -----------------------------------------------------


def criterion_11(strict=False) -> CriterionResult:
    q = _quad(strict)
    vals, ok = [], True
    for om in (1.0, 2.0, 4.0, 8.0):
        bob = DetectorConfig(1.0, om, Rest((0.0, 0.0, 0.0)), Gaussian(0.0, 1.0))
        r = compute_single_detector(bob, q, eps=1e-2)
        p2 = complex(r.p2)
        floor = 10 * r.err + 1e-13
        ok &= abs(p2.imag) <= floor and p2.real >= -floor and r.p2_spread <= 5e-4 * abs(p2.real) + floor
        vals.append(p2.real)
    decreasing = all(b < a for a, b in zip(vals, vals[1:]))
    return CriterionResult(11, "single-detector P2", ok and decreasing, {"p2": vals, "decreasing": decreasing})


# 12. 2+1 timelike decay -----------------------------------------------------


def criterion_12(strict=False) -> CriterionResult:
    q = _quad(strict)
    delays = np.geomspace(20.0, 200.0, 7)
    s = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for d in delays:
            sc = Scenario(2, DetectorConfig(1.0, 1.0, Rest((0.0, 0.0)), Sudden(0.0, 2.0)),
                          DetectorConfig(1.0, 1.0, Rest((0.0, 0.0)), Sudden(2.0 + float(d), 2.0)))
            s.append(compute_c2_d2(sc, q).strength)
    f = power_law(delays, s)
    return CriterionResult(12, "2+1 timelike decay", abs(f.exponent + 1.0) <= 0.1, {"exponent": f.exponent, "ci": f.half_width})


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_criteria(only: Optional[Iterable[int]] = None, strict: bool = False):
    """Yield results in criterion order."""
    for i in sorted(only) if only else CRITERIA:
        t0 = time.perf_counter()
        res = CRITERIA[i](strict=strict)
        res.seconds = time.perf_counter() - t0
        yield res
