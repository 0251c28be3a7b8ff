import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwsignal import kinematics
from udwsignal.errors import DomainError
from udwsignal.kinematics import Inertial, Rest, UniformAcceleration


def test_positions():
    assert np.allclose(kinematics.position(Rest((0.0, 0.0)), 5.0), [0.0, 0.0])
    assert kinematics.position(Inertial((0.6,), (0.0,)), 10.0)[0] == pytest.approx(6.0)
    assert kinematics.position(UniformAcceleration(1.0, dim=3), 0.0)[0] == pytest.approx(1.0)


def test_proper_and_coordinate_time():
    assert kinematics.proper_time(Rest((0.0,)), 7.0) == 7.0
    assert kinematics.proper_time(Inertial((0.6,), (0.0,)), 10.0) == pytest.approx(8.0)
    # sinh(2)/2 from mpmath
    assert kinematics.coordinate_time(UniformAcceleration(2.0, dim=1), 1.0) == pytest.approx(1.8134302039235095, rel=1e-14)


def test_accelerated_dtau_dt():
    w = UniformAcceleration(1.5, dim=1)
    t = np.linspace(-4, 4, 9)
    assert np.allclose(w.dtau_dt(t), 1 / np.sqrt(1 + (1.5 * t) ** 2))


def test_doppler_factor():
    assert kinematics.doppler_factor(0.0) == 1.0
    assert kinematics.doppler_factor(0.6) == pytest.approx(2.0)
    assert kinematics.doppler_factor(0.8) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        kinematics.doppler_factor(1.0)


def test_superluminal_rejected():
    with pytest.raises(DomainError):
        Inertial((0.8, 0.7, 0.0), (0.0, 0.0, 0.0))


def test_retarded_examples():
    assert kinematics.retarded_emission_time(Rest((0.0,)), Rest((2.0,)), 5.0) == pytest.approx(3.0)
    assert kinematics.retarded_emission_time(Inertial((0.6,), (1.0,)), Rest((0.0,)), 1.0) == pytest.approx(0.0, abs=1e-13)
    assert kinematics.retarded_emission_time(UniformAcceleration(1.0, dim=1), Rest((0.0,)), -1.0) is None


def test_no_emission_before_horizon_by_scan():
    # t1 - t2 - cosh(asinh t2) = t1 - exp(asinh t2) stays negative for t1 < 0
    t2 = np.linspace(-50, 50, 20001)
    for t1 in (-1.0, -0.1, -10.0):
        g = t1 - t2 - np.sqrt(1 + t2 * t2)
        assert np.all(g < 0)


def test_hyperbola_retarded_matches_log():
    # Bob at origin receives at t1 > 0 the ray sent at proper time ln(a t1)/a
    w = UniformAcceleration(2.0, dim=3)
    for t1 in (0.01, 0.7, 3.0, 40.0):
        t2 = kinematics.retarded_emission_time(w, Rest((0.0, 0.0, 0.0)), t1)
        assert float(w.proper_time(t2)) == pytest.approx(math.log(2.0 * t1) / 2.0, rel=1e-12, abs=1e-13)


def test_vectorized_matches_scalar():
    wa, wb = Inertial((0.3, -0.2), (0.0, 1.0)), Rest((2.0, -1.0))
    t1 = np.linspace(3, 30, 25)
    vec = kinematics.retarded_times(wa, wb, t1)
    scal = [kinematics.retarded_emission_time(wa, wb, t) for t in t1]
    assert np.allclose(vec, scal, rtol=0, atol=1e-11)


def test_retarded_against_mpmath_root():
    wa, wb = Inertial((0.4, 0.1, -0.2), (0.5, 0.0, 0.0)), Rest((3.0, 1.0, 0.0))
    t1 = 7.3
    f = lambda t: t1 - t - mp.sqrt(sum((mp.mpf(b) - (mp.mpf(x0) + mp.mpf(v) * t)) ** 2 for b, x0, v in zip((3, 1, 0), (0.5, 0, 0), (0.4, 0.1, -0.2))))
    ref = float(mp.findroot(f, 3.0))
    assert kinematics.retarded_emission_time(wa, wb, t1) == pytest.approx(ref, abs=1e-12)


def test_mirrored_hyperbola_is_itself():
    w = UniformAcceleration(1.3, dim=2)
    m = w.mirrored()
    t = np.linspace(-3, 3, 7)
    assert np.allclose(m.position_at(t), w.position_at(-t))
    assert np.allclose(m.position_at(t), w.position_at(t))


speeds = st.floats(-0.95, 0.95)


@given(vx=speeds, vy=speeds, t=st.floats(-100, 100))
def test_subluminal_and_dtau_bounds(vx, vy, t):
    if vx * vx + vy * vy >= 0.99:
        return
    for w in (Inertial((vx, vy), (0.0, 0.0)), UniformAcceleration(abs(vx) + 0.1, dim=2), Rest((vx, vy))):
        v = np.atleast_1d(w.velocity_at(t))
        assert np.linalg.norm(v) < 1
        r = float(w.dtau_dt(t))
        assert 0 < r <= 1


@given(t=st.floats(-50, 50), a=st.floats(0.1, 10))
def test_proper_time_roundtrip(t, a):
    for w in (UniformAcceleration(a, dim=1), Inertial((0.5,), (0.0,)), Rest((1.0,))):
        assert float(w.coordinate_time(w.proper_time(t))) == pytest.approx(t, rel=1e-12, abs=1e-12)


@given(t1=st.floats(-20, 60), x=st.floats(-5, 5), v=st.floats(-0.9, 0.9))
def test_retarded_residual(t1, x, v):
    wa, wb = Inertial((v,), (0.0,)), Rest((x,))
    t2 = kinematics.retarded_emission_time(wa, wb, t1)
    assert t2 is not None and t2 <= t1
    resid = t1 - t2 - abs(x - v * t2)
    assert abs(resid) < 1e-12 * max(1.0, abs(t1))
