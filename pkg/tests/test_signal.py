import math
from dataclasses import replace

import pytest
from scipy.special import erfc

from udwsignal import closedform as cf
from udwsignal.closedform import CaseParams, ClosedFormCase
from udwsignal.errors import ConfigurationError, DomainError
from udwsignal.kinematics import Inertial, Rest, UniformAcceleration
from udwsignal.scenario import DetectorConfig, Scenario, mirror
from udwsignal.signal import (
    QuadratureConfig,
    SignalCoefficients,
    compute_c2_d2,
    compute_single_detector,
    signal_strength,
    verify_mirror_symmetry,
)
from udwsignal.switching import ExponentialDecay, Gaussian, Sudden


def rest_pair(n, oa, ob, L, T, lam=(1.0, 1.0), bob_switch=None):
    zero = (0.0,) * n
    far = (L,) + (0.0,) * (n - 1)
    return Scenario(
        n,
        DetectorConfig(lam[0], oa, Rest(zero), Sudden(0.0, T)),
        DetectorConfig(lam[1], ob, Rest(far), bob_switch),
    )


def test_strength_examples():
    assert signal_strength(SignalCoefficients(0.1j, 0j)) == pytest.approx(0.1)
    assert signal_strength(SignalCoefficients(3 + 4j, 0j)) == 5.0


def test_rest_3p1_resonant():
    res = compute_c2_d2(rest_pair(3, 2.0, 2.0, 1.0, 3.0))
    assert abs(res.c2) == pytest.approx(3 / (4 * math.pi), abs=1e-8)
    c2, d2 = cf.rest_resonant_pair(3, 2.0, 1.0, 3.0)
    assert abs(res.c2 - c2) < 1e-8 and abs(res.d2 - d2) < 1e-8


def test_rest_1p1_zero_gap():
    res = compute_c2_d2(cf.build_scenario(ClosedFormCase.REST_1P1_ZERO_GAP, CaseParams(L=1.0, T=2.0)))
    assert res.strength == pytest.approx(2.0, rel=1e-8)


def test_spacelike_gives_exact_zeros():
    sc = rest_pair(3, 1.0, 1.0, 10.0, 1.0, bob_switch=Sudden(0.0, 1.0))
    res = compute_c2_d2(sc)
    assert res.c2 == 0 and res.d2 == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bilinear_in_couplings(n):
    base = compute_c2_d2(rest_pair(n, 1.0, 1.5, 1.0, 2.0))
    scaled = compute_c2_d2(rest_pair(n, 1.0, 1.5, 1.0, 2.0, lam=(0.2, 0.3)))
    assert scaled.c2 == pytest.approx(0.06 * base.c2, rel=1e-12)
    assert scaled.d2 == pytest.approx(0.06 * base.d2, rel=1e-12)
    zero = compute_c2_d2(rest_pair(n, 1.0, 1.5, 1.0, 2.0, lam=(0.0, 1.0)))
    assert zero.c2 == 0 and zero.d2 == 0


@pytest.mark.parametrize(
    "sc",
    [
        rest_pair(3, 1.0, 1.7, 1.0, 2.0),
        rest_pair(1, 1.2, 0.6, 0.5, 3.0),
        Scenario(
            3,
            DetectorConfig(1.0, 2.0, Inertial((0.4, 0, 0), (1.0, 0, 0)), Sudden(0.0, 3.0)),
            DetectorConfig(1.0, 1.0, Rest((0.0, 0, 0)), None),
        ),
    ],
    ids=["rest3", "rest1", "inertial3"],
)
def test_direct_d2_route_matches_identity(sc):
    a = compute_c2_d2(sc)
    b = compute_c2_d2(sc, d2_route="direct")
    assert abs(a.d2 - b.d2) <= a.err_d2 + b.err_d2 + 1e-12


def test_unknown_route():
    with pytest.raises(ConfigurationError):
        compute_c2_d2(rest_pair(3, 1.0, 1.0, 1.0, 1.0), d2_route="sideways")


@pytest.mark.parametrize("n", [2, 3])
def test_doubling_points_per_period(n):
    sc = rest_pair(n, 3.0, 2.2, 1.0, 4.0)
    cfg = QuadratureConfig()
    a = compute_c2_d2(sc, cfg)
    b = compute_c2_d2(sc, replace(cfg, points_per_period=2 * cfg.points_per_period))
    assert abs(a.c2 - b.c2) <= a.err_c2 + b.err_c2 + 1e-13
    assert abs(a.d2 - b.d2) <= a.err_d2 + b.err_d2 + 1e-13


def test_mirror_of_rest_scenario():
    sc = rest_pair(3, 1.0, 1.0, 1.0, 2.0)
    m = mirror(sc).resolved()
    assert m.alice.switching == Sudden(-3.0, 2.0)
    assert m.bob.switching == Sudden(-2.0, 2.0)
    assert m.alice.worldline == Rest((1.0, 0.0, 0.0))
    report = verify_mirror_symmetry(sc)
    assert report.passed


def test_mirror_inertial_recession():
    sc = Scenario(
        3,
        DetectorConfig(1.0, 2.0, Inertial((0.3, 0, 0), (1.0, 0, 0)), Sudden(0.0, 3.0)),
        DetectorConfig(1.0, 1.4, Rest((0.0, 0, 0)), None),
    )
    report = verify_mirror_symmetry(sc, raise_on_failure=True)
    assert report.c2_gap < 1e-8 and report.d2_gap < 1e-8


def test_mirror_accelerated_sender():
    sigma = 3.0
    sc = Scenario(
        1,
        DetectorConfig(1.0, 1.0, UniformAcceleration(1.0, dim=1), ExponentialDecay(sigma)),
        DetectorConfig(1.0, 0.7, Rest((0.0,)), ExponentialDecay(sigma)),
    )
    report = verify_mirror_symmetry(sc)
    assert report.passed
    assert report.mirrored.strength == pytest.approx(report.original.strength, abs=report.tolerance)


# single detector ----------------------------------------------------------------


def gaussian_p2(omega, w):
    x = omega * w
    return (math.exp(-x * x) - math.sqrt(math.pi) * x * erfc(x)) / (4 * math.pi)


def bob(omega=1.0, width=1.0, lam=1.0, worldline=None, switching=None):
    return DetectorConfig(lam, omega, worldline or Rest((0.0, 0, 0)), switching or Gaussian(0.0, width))


def test_single_detector_gaussian_closed_form():
    res = compute_single_detector(bob())
    assert res.p2.real == pytest.approx(gaussian_p2(1.0, 1.0), rel=1e-6)
    assert res.p2.real == pytest.approx(0.0070883, rel=1e-4)
    assert abs(res.p2.imag) < 1e-9
    assert res.q2.real == pytest.approx(-gaussian_p2(-1.0, 1.0), rel=1e-6)
    assert res.q2.real <= 0


def test_single_detector_p2_decreases_with_gap():
    vals = [compute_single_detector(bob(omega=w)).p2.real for w in (1.0, 2.0, 4.0)]
    assert all(v >= 0 for v in vals)
    assert vals[0] > vals[1] > vals[2]


def test_single_detector_boosted_is_time_dilated():
    moving = compute_single_detector(bob(worldline=Inertial((0.6, 0, 0), (0.0, 0, 0)), omega=1.0))
    assert moving.p2.real == pytest.approx(gaussian_p2(1.0, 1.0), rel=1e-5)


def test_single_detector_errors():
    with pytest.raises(ConfigurationError):
        compute_single_detector(bob(switching=Sudden(0.0, 1.0)))
    with pytest.raises(ConfigurationError):
        compute_single_detector(DetectorConfig(1.0, 1.0, Rest((0.0,)), Gaussian(0.0, 1.0)))
    with pytest.raises(ConfigurationError):
        compute_single_detector(bob(worldline=UniformAcceleration(1.0, dim=3)))
    with pytest.raises(DomainError):
        compute_single_detector(bob(), eps=0.0)


def test_single_detector_zero_coupling():
    res = compute_single_detector(bob(lam=0.0))
    assert (res.p2, res.q2, res.r2, res.s2) == (0, 0, 0, 0)
