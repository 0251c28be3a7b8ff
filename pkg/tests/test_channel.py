import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwsignal import channel as ch
from udwsignal.errors import DomainError, NoSignalError
from udwsignal.signal import SingleDetectorCoefficients

phase = st.floats(-math.pi, math.pi)
small = st.floats(1e-4, 0.05)


def pair(c, pc, d, pd):
    return (c * cmath.exp(1j * pc), d * cmath.exp(1j * pd))




def test_bloch_density_roundtrip():
    r = ch.BlochVector(0.3, -0.4, 0.5)
    st_ = ch.DetectorState.from_bloch(r)
    back = st_.bloch()
    assert np.allclose(back.array, r.array)
    rho = r.density()
    assert np.allclose(rho, st_.density())
    assert np.isclose(np.trace(rho), 1)


def test_state_validation():
    with pytest.raises(DomainError):
        ch.BlochVector(1.0, 0.1, 0.0)
    with pytest.raises(DomainError):
        ch.DetectorState(0.6, 0.6)
    with pytest.raises(DomainError):
        ch.DetectorState(0.5, 0.5, 0.6)
    assert ch.DetectorState.ground_state().bloch().z == -1
    assert ch.DetectorState.excited_state().bloch().pure


@given(c=small, pc=phase, d=small, pd=phase)
def test_svd_decomposition(c, pc, d, pd):
    sc = pair(c, pc, d, pd)
    cm = ch.leading_channel_matrix(sc, ch.DetectorState.ground_state())
    U, O, Diag = ch.svd_channel(cm, *sc)
    assert np.allclose(U @ O @ Diag @ O.T, cm.M, atol=1e-15)
    assert np.allclose(U @ U.T, np.eye(3)) and np.allclose(O @ O.T, np.eye(3))
    sv = np.linalg.svd(cm.M[:2, :2], compute_uv=False)
    assert sv[0] == pytest.approx(c + d, rel=1e-12)
    assert sv[1] == pytest.approx(abs(c - d), rel=1e-9, abs=1e-15)


@given(c=small, pc=phase, d=small, pd=phase)
def test_optimal_alice_states_reach_the_bound(c, pc, d, pd):
    sc = pair(c, pc, d, pd)
    ground = ch.DetectorState.ground_state()
    a, b = ch.optimal_alice_states(sc)
    assert a.pure and np.allclose(b.array, -a.array)
    assert ch.signal_trace_distance(sc, ground) == pytest.approx(c + d, rel=1e-12)


@given(c=small, pc=phase, d=small, pd=phase, kappa=st.floats(0, 1), ang=st.floats(0, 2 * math.pi))
def test_no_input_beats_the_optimum(c, pc, d, pd, kappa, ang):
    sc = pair(c, pc, d, pd)
    bob = ch.optimal_bob_state(sc, kappa)
    assert bob.bloch().pure or kappa in (0.0, 1.0)
    opt = ch.signal_trace_distance(sc, bob)
    assert opt == pytest.approx(c + d, rel=1e-9)
    r = ch.BlochVector(math.cos(ang), math.sin(ang), 0.0)
    assert ch.signal_trace_distance(sc, bob, r) <= opt * (1 + 1e-12)


@given(c=small, pc=phase, d=small, pd=phase, kappa=st.floats(0.05, 0.95))
def test_measurement_basis_is_orthogonal_to_bob(c, pc, d, pd, kappa):
    sc = pair(c, pc, d, pd)
    bob = ch.optimal_bob_state(sc, kappa)
    m, mm = ch.measurement_basis(sc, bob)
    assert abs(np.dot(m.array, bob.bloch().array)) < 1e-12
    cm = ch.leading_channel_matrix(sc, bob)
    alice = ch.optimal_alice_states(sc)[0]
    shift = cm.M @ alice.array
    # the signal displacement lies along the measured axis
    assert np.linalg.norm(np.cross(shift, m.array)) < 1e-12 * max(1.0, np.linalg.norm(shift))


@given(c=small, pc=phase, d=small, pd=phase, rot=phase)
def test_common_phase_rotation(c, pc, d, pd, rot):
    # rotating both phases rotates the optimal inputs about z and leaves D unchanged
    a1 = ch.optimal_alice_states(pair(c, pc, d, pd))[0]
    a2 = ch.optimal_alice_states(pair(c, pc + rot, d, pd + rot))[0]
    ang = math.atan2(a2.y, a2.x) - math.atan2(a1.y, a1.x)
    # the optimal pair is antipodal, so the rotation is fixed up to pi
    assert abs(math.cos(ang - rot)) == pytest.approx(1.0, abs=1e-9)
    g = ch.DetectorState.ground_state()
    assert ch.signal_trace_distance(pair(c, pc + rot, d, pd + rot), g) == pytest.approx(c + d, rel=1e-12)


@given(c=small, pc=phase, d=small, pd=phase)
def test_trace_distance_triangle(c, pc, d, pd):
    sc = pair(c, pc, d, pd)
    assert ch.signal_trace_distance(sc, ch.DetectorState.ground_state()) <= c + d + 1e-15
    u, v, w = (ch.BlochVector(*x) for x in ((0.1, 0.2, 0.3), (-0.5, 0.1, 0.0), (0.0, 0.0, -0.9)))
    assert ch.trace_distance(u, w) <= ch.trace_distance(u, v) + ch.trace_distance(v, w) + 1e-15


def _bloch(rho):
    return np.array([2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])


@given(c=small, pc=phase, d=small, pd=phase, kappa=st.floats(0, 1), dphase=phase, ang=phase, z=st.floats(-0.9, 0.9))
def test_channel_against_density_matrix_construction(c, pc, d, pd, kappa, dphase, ang, z):
    # leading-order update built in matrix form: gamma * [[dD + d*C, (k - p)C], [(k - p)D, -(dD + d*C)]] + h.c.
    c2, d2 = pair(c, pc, d, pd)
    phi = 1 - kappa
    bob = ch.DetectorState(phi, kappa, math.sqrt(kappa * phi) * cmath.exp(1j * dphase))
    rxy = math.sqrt(1 - z * z)
    alice = ch.DetectorState.from_bloch(ch.BlochVector(rxy * math.cos(ang), rxy * math.sin(ang), z))
    g, dl = complex(alice.coherence), complex(bob.coherence)
    diag = dl * d2 + dl.conjugate() * c2
    block = g * np.array([[diag, (kappa - phi) * c2], [(kappa - phi) * d2, -diag]])
    rho = bob.density() + block + block.conj().T
    cm = ch.leading_channel_matrix((c2, d2), bob)
    assert np.allclose(cm.apply(alice.bloch()), _bloch(rho), atol=1e-14)


def test_noise_terms_shift_the_output():
    sc = pair(0.01, 0.0, 0.01, 0.0)
    bob = ch.DetectorState.ground_state()
    single = SingleDetectorCoefficients(0.007 + 0j, -0.29 + 0j, 0j, 0j)
    cm = ch.leading_channel_matrix(sc, bob, single)
    assert cm.v[2] == pytest.approx(-1 + 2 * 0.007)


def test_no_signal():
    with pytest.raises(NoSignalError):
        ch.optimal_alice_states((0j, 0j))
    with pytest.raises(DomainError):
        ch.optimal_bob_state((0.1, 0.1), 1.5)


def test_capacities_report():
    rep = ch.capacities((0.03j, 0.02), p2=0.007)
    D = 0.05
    assert rep.trace_distance == pytest.approx(D)
    assert rep.p_bit == pytest.approx(0.5 + D / 2)
    assert rep.p_bit_upper == pytest.approx(0.5 + D)
    assert rep.shannon == pytest.approx(2 / math.log(2) * D * D)
    assert rep.holevo == pytest.approx(-math.log(0.007) * D * D / (4 * math.log(2)))
    assert rep.valid
    assert not ch.capacities((0.08, 0.08)).valid
    with pytest.warns(UserWarning):
        assert ch.capacities((0.01, 0.01), p2=0.0).holevo is None


@given(c=st.floats(0, 0.4), d=st.floats(0, 0.4))
def test_p_bit_range(c, d):
    rep = ch.capacities((c, d))
    assert 0.5 <= rep.p_bit <= 1.0
    assert rep.shannon >= 0


def test_bac_capacity():
    assert ch.bac_capacity(0.0, 0.0) == pytest.approx(1.0, abs=1e-9)
    assert ch.bac_capacity(0.5, 0.5) == pytest.approx(0.0, abs=1e-12)
    e = 0.11
    bsc = 1 + e * math.log2(e) + (1 - e) * math.log2(1 - e)
    assert ch.bac_capacity(e, e) == pytest.approx(bsc, rel=1e-9)
    # Z channel capacity log2(1 + (1-p) p^{p/(1-p)})
    p = 0.3
    z = math.log2(1 + (1 - p) * p ** (p / (1 - p)))
    assert ch.bac_capacity(0.0, p) == pytest.approx(z, rel=1e-8)
    with pytest.raises(DomainError):
        ch.bac_capacity(-0.1, 0.2)


def test_leading_flip_probabilities():
    assert ch.leading_flip_probabilities((0.03, 0.02)) == pytest.approx((0.475, 0.475))
