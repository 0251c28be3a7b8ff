import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwsignal import field
from udwsignal.errors import DomainError


def test_commutator_1p1_values():
    assert field.commutator_1p1(0, 0, 2, 1) == 0.5j
    assert field.commutator_1p1(0, 0, 1, 3) == 0
    assert field.commutator_1p1(2, 0, 0, 1) == -0.5j
    # the light cone counts as inside
    assert field.commutator_1p1(0, 0, 1, 1) == 0.5j


def test_commutator_2p1_values():
    assert field.commutator_2p1(0, (0, 0), 2, (0, 0)) == pytest.approx(1j / (4 * math.pi))
    assert field.commutator_2p1(0, (0, 0), 1, (2, 0)) == 0
    assert field.commutator_2p1(2, (0, 0), 0, (0, 0)) == pytest.approx(-1j / (4 * math.pi))


def test_commutator_2p1_on_cone_is_not_a_crash():
    with pytest.raises(DomainError):
        field.commutator_2p1(0, (0, 0), 1, (1, 0))


def test_delta_amplitude():
    assert field.lightcone_delta_amplitude_3p1(1.0) == pytest.approx(1 / (4 * math.pi))
    assert field.lightcone_delta_amplitude_3p1(2.0) == pytest.approx(1 / (8 * math.pi))
    with pytest.raises(DomainError):
        field.lightcone_delta_amplitude_3p1(0.0)


def test_wightman_equal_time_limit():
    vals = [field.wightman_3p1(0.0, (1, 0, 0), 0.0, (0, 0, 0), e) for e in (1e-2, 1e-3, 1e-4)]
    assert abs(vals[-1] - 1 / (4 * math.pi**2)) < 1e-7
    # Richardson in eps^2 with ratio 10
    assert abs((100 * vals[2] - vals[1]) / 99 - 1 / (4 * math.pi**2)) < 1e-12


def test_wightman_hermiticity_and_spacelike_commutator():
    x = (0.3, 0.0, 0.0)
    for dt in (0.1, 1.0, 2.5):
        w = field.wightman_3p1(dt, x, 0.0, (0, 0, 0), 1e-3)
        wm = field.wightman_3p1(-dt, x, 0.0, (0, 0, 0), 1e-3)
        if dt < 0.3:
            # spacelike: the commutator 2i Im W vanishes as eps -> 0
            assert abs(w - wm) < 1e-2
    same = (0, 0, 0)
    assert field.wightman_3p1(-1.3, same, 0, same, 1e-2) == pytest.approx(np.conj(field.wightman_3p1(1.3, same, 0, same, 1e-2)))


def test_wightman_needs_regulator():
    with pytest.raises(DomainError):
        field.wightman_3p1(0, (1, 0, 0), 0, (0, 0, 0), 0.0)


pts = st.tuples(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))


@given(a=pts, b=pts)
def test_pointwise_kernels_antisymmetric_and_causal(a, b):
    t, x, y = a
    tp, xp, yp = b
    k1 = field.commutator_1p1(t, x, tp, xp)
    assert k1 == -field.commutator_1p1(tp, xp, t, x) or (t == tp and x == xp)
    dt, r = tp - t, math.hypot(xp - x, yp - y)
    if abs(abs(dt) - r) < 1e-9:
        return
    k2 = field.commutator_2p1(t, (x, y), tp, (xp, yp))
    assert k2 == pytest.approx(-field.commutator_2p1(tp, (xp, yp), t, (x, y)))
    if r > abs(dt):
        assert k2 == 0 and (abs(xp - x) <= abs(dt) or k1 == 0)
    else:
        assert abs(k2) * math.sqrt(dt * dt - r * r) == pytest.approx(1 / (2 * math.pi))
