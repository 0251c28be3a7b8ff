import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwsignal import specfun
from udwsignal.errors import AccuracyError, DomainError, PoleError


def test_gamma_known_values():
    assert specfun.gamma_complex(1) == pytest.approx(1.0, rel=1e-15)
    assert specfun.gamma_complex(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    g = specfun.gamma_complex(1j)
    assert abs(g) ** 2 == pytest.approx(math.pi / math.sinh(math.pi), rel=1e-13)
    assert abs(g) ** 2 == pytest.approx(0.27202905498213, rel=1e-12)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        specfun.gamma_complex(z)


@pytest.mark.parametrize("z", [0.3 + 45j, -2.5 + 0.1j, 3 - 20j, 1e-3j, -0.5j, 12.5 + 3j])
def test_gamma_against_mpmath(z):
    assert specfun.gamma_complex(z) == pytest.approx(complex(mp.gamma(z)), rel=1e-12)
    assert cmath.exp(specfun.log_gamma_complex(z)) == pytest.approx(complex(mp.gamma(z)), rel=1e-12)


def test_log_gamma_far_up_the_imaginary_axis():
    # |Gamma(-i y)| underflows for large y; the log form stays finite
    ref = complex(mp.loggamma(-300j))
    assert specfun.log_gamma_complex(-300j).real == pytest.approx(ref.real, rel=1e-13)


@given(re=st.floats(-8, 8), im=st.floats(-50, 50))
def test_gamma_recurrence(re, im):
    z = complex(re, im)
    if abs(z - round(re)) < 1e-3 and round(re) <= 0 or abs(z + 1 - round(re + 1)) < 1e-3 and round(re + 1) <= 0:
        return
    g, g1 = specfun.gamma_complex(z), specfun.gamma_complex(z + 1)
    if not (np.isfinite(g) and np.isfinite(g1)) or abs(g1) < 1e-280:
        return
    assert g1 == pytest.approx(z * g, rel=1e-12)


def test_incomplete_gamma_values():
    # quad of exp(-t)/t on [1, inf): 0.21938393439552029
    assert specfun.incomplete_gamma_upper(0, 1.0) == pytest.approx(0.21938393439552029, rel=1e-13)
    assert abs(specfun.incomplete_gamma_upper(0, 800.0)) < 1e-300
    z = 1 + 1j
    assert specfun.incomplete_gamma_upper(0, z.conjugate()) == pytest.approx(specfun.incomplete_gamma_upper(0, z).conjugate(), rel=1e-14)
    with pytest.raises(PoleError):
        specfun.incomplete_gamma_upper(0, 0)


@pytest.mark.parametrize("x", [0.01, 0.5 - 2j, 3 + 0.1j, -2 + 0.5j, 25j, 40 - 3j, -0.3 - 5j])
def test_exp1_against_mpmath(x):
    assert specfun.exp1(x) == pytest.approx(complex(mp.e1(x)), rel=1e-12)
    assert specfun.exp1_scaled(x) == pytest.approx(complex(mp.exp(x) * mp.e1(x)), rel=1e-12)


def test_exp1_scaled_large_argument():
    x = 1e5 + 3e4j
    assert specfun.exp1_scaled(x) == pytest.approx(complex(mp.exp(x) * mp.e1(x)), rel=1e-13)


@given(re=st.floats(0.1, 30), im=st.floats(-30, 30))
def test_exp1_derivative(re, im):
    x = complex(re, im)
    h = 1e-5 * max(1.0, abs(x))
    fd = (specfun.exp1(x + h) - specfun.exp1(x - h)) / (2 * h)
    exact = -cmath.exp(-x) / x
    assert abs(fd - exact) <= 1e-6 * abs(exact) + 1e-300


def test_hyp1f2_basics():
    assert specfun.hyp1f2(1, 0.5 + 0.5j, 1 + 0.5j, 0) == 1
    # a1 = b1 reduces to 0F1(; b2; z)
    z = 0.25
    zero_f1 = sum(z**k / (math.factorial(k) ** 2) for k in range(40))
    assert specfun.hyp1f2(2.5, 2.5, 1.0, z) == pytest.approx(zero_f1, rel=1e-15)


def test_hyp1f2_exact_pochhammer():
    a, b1, b2, z = mp.mpf(1), mp.mpc(0.5, 0.5), mp.mpc(1, 0.5), mp.mpf("0.01")
    term, total = mp.mpc(1), mp.mpc(1)
    for k in range(20):
        term *= (a + k) / ((b1 + k) * (b2 + k) * (k + 1)) * z
        total += term
    assert specfun.hyp1f2(1, 0.5 + 0.5j, 1 + 0.5j, 0.01) == pytest.approx(complex(total), rel=1e-15)


@pytest.mark.parametrize("x", [0.3, 2.0, 6.0, 15.0])
@pytest.mark.parametrize("y", [0.2, 1.0, 4.0])
def test_hyp1f2_against_mpmath(x, y):
    args = (1.0, 1 + 0.5j * y, 1.5 + 0.5j * y, x * x / 4)
    assert specfun.hyp1f2(*args) == pytest.approx(complex(mp.hyp1f2(*args)), rel=1e-11)


def test_hyp1f2_bad_parameters():
    with pytest.raises(DomainError):
        specfun.hyp1f2(1, -2, 1, 0.5)


def test_hyp1f2_nonconvergence_reports_partial_sum():
    with pytest.raises(AccuracyError) as info:
        specfun.hyp1f2(1, 1, 1, 1e6, max_terms=10)
    assert info.value.best is not None
