import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from udwsignal import switching
from udwsignal.errors import DomainError
from udwsignal.kinematics import Inertial, Rest, UniformAcceleration
from udwsignal.switching import ExponentialDecay, Gaussian, Sudden


def test_eta_values():
    assert switching.eta(Sudden(0, 3), 1.0) == 1
    assert switching.eta(Sudden(0, 3), 4.0) == 0
    assert switching.eta(ExponentialDecay(2.0), -2.0) == pytest.approx(math.exp(-1))


def test_chi_values():
    assert switching.chi(Sudden(0, 3), Rest((0.0,)), 1.0) == 1
    assert switching.chi(Sudden(0, 3), Inertial((0.6,), (0.0,)), 2.0) == pytest.approx(0.8)
    w = UniformAcceleration(1.0, dim=1)
    t = np.linspace(-3, 3, 7)
    wide = ExponentialDecay(1e12)
    assert np.allclose(switching.chi(wide, w, t), 1 / np.sqrt(1 + t * t))


def test_support_windows():
    assert switching.support_window(Sudden(0, 3), Rest((0.0,))) == (0, 3)
    lo, hi = switching.support_window(Sudden(0, 3), Inertial((0.6,), (0.0,)))
    assert (lo, hi) == (pytest.approx(0.0), pytest.approx(3.75))
    lo, hi = switching.support_window(ExponentialDecay(1.0), Rest((0.0,)), cutoff=1e-8)
    assert hi == pytest.approx(18.420680743952367) and lo == pytest.approx(-hi)


def test_invalid_profiles():
    with pytest.raises(DomainError):
        Sudden(0, 0)
    with pytest.raises(DomainError):
        Gaussian(0, -1)
    with pytest.raises(DomainError):
        ExponentialDecay(0)


@pytest.mark.parametrize("prof", [Sudden(-1.0, 2.5), ExponentialDecay(1.3), Gaussian(0.4, 0.7)])
@pytest.mark.parametrize("omega", [0.0, 0.8, 3.0])
def test_primitive_matches_quadrature(prof, omega):
    for tau in (-0.5, 0.3, 2.0):
        lo = prof.support(1e-16)[0]
        re = integrate.quad(lambda s: prof.eta(s) * math.cos(omega * s), lo, tau, limit=200, points=[-1.0, 0.0, 1.5] if lo < -1 else None)[0]
        im = integrate.quad(lambda s: prof.eta(s) * math.sin(omega * s), lo, tau, limit=200, points=[-1.0, 0.0, 1.5] if lo < -1 else None)[0]
        assert prof.primitive(omega, tau) == pytest.approx(complex(re, im), abs=1e-9)


@pytest.mark.parametrize("prof", [Sudden(0.5, 2.0), ExponentialDecay(0.9), Gaussian(1.0, 0.5)])
def test_fourier_is_full_primitive(prof):
    assert prof.fourier(1.7) == pytest.approx(prof.primitive(1.7, 1e3), abs=1e-12)


@given(v=st.floats(0, 0.9), t=st.floats(-20, 20))
def test_chi_bounded_by_dtau(v, t):
    w = Inertial((v,), (0.0,))
    for prof in (Sudden(-3, 6), Gaussian(0, 2), ExponentialDecay(1)):
        c = switching.chi(prof, w, t)
        assert 0 <= c <= float(w.dtau_dt(t)) + 1e-15


@pytest.mark.parametrize("w", [Inertial((0.6,), (0.0,)), UniformAcceleration(0.7, dim=1)])
def test_chi_integral_equals_proper_measure(w):
    prof = Gaussian(0.5, 0.8)
    lo, hi = switching.support_window(prof, w, 1e-14)
    val = integrate.quad(lambda t: switching.chi(prof, w, t), lo, hi, epsabs=0, epsrel=1e-12, limit=200)[0]
    assert val == pytest.approx(0.8 * math.sqrt(2 * math.pi), rel=1e-10)
