import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from scipy.special import comb

from spinxfer import DomainError, PreparationParams, SingleSpinState, SpinSize, coherent_equator, prepare_initial, rotate_x, squeeze, spin_operators
from spinxfer.states import binomial_amplitudes, rotation_x, transverse_variances

angles = st.floats(min_value=-3.2, max_value=3.2)


@pytest.mark.parametrize("n", [1, 2, 5, 10, 40])
def test_binomial_amplitudes(n):
    s = SpinSize(n)
    k = np.arange(n + 1)
    oracle = np.sqrt(comb(n, k)) / 2 ** (n / 2)
    assert np.allclose(binomial_amplitudes(s), oracle, rtol=1e-12)


@pytest.mark.parametrize("n", [1, 3, 10])
def test_coherent_points_along_x(n):
    s = SpinSize(n)
    psi = coherent_equator(s)
    sx, sy, sz = spin_operators(s)
    assert psi.expect(sx).real == pytest.approx(s.S)
    assert abs(psi.expect(sy)) < 1e-12 and abs(psi.expect(sz)) < 1e-12
    a, var = transverse_variances(psi)
    assert np.allclose(var, s.S / 2, atol=1e-10)


def test_squeezing_reduces_a_quadrature():
    s = SpinSize(10)
    st_ = squeeze(coherent_equator(s), 0.05)
    _, var = transverse_variances(st_)
    assert var.min() < s.S / 2 - 0.5
    assert var.max() > s.S / 2


def test_qubit_squeezing_is_global_phase():
    psi0 = coherent_equator(0.5)
    psi = squeeze(psi0, 0.9)
    overlap = np.vdot(psi0.amplitudes, psi.amplitudes)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 12), angles)
def test_rotation_matches_expm(n, th):
    s = SpinSize(n)
    sx, _, _ = spin_operators(s)
    assert np.allclose(rotation_x(s, th), expm(1j * th * sx), atol=1e-11)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 16), angles, angles)
def test_prepared_state_normalized(n, mu, th):
    psi = prepare_initial(SpinSize(n), mu=mu, theta_rot=th)
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_prepare_order_squeeze_then_rotate():
    s = SpinSize(4)
    sx, _, _ = spin_operators(s)
    mu, th = 0.3, 0.7
    oracle = expm(1j * th * sx) @ (np.exp(-1j * mu * s.m**2) * binomial_amplitudes(s))
    assert np.allclose(prepare_initial(s, PreparationParams(mu, th)).amplitudes, oracle, atol=1e-12)


def test_rotation_turns_mean_spin():
    # exp(i th Sx) leaves the x-polarised coherent state invariant up to phase
    s = SpinSize(6)
    psi = rotate_x(coherent_equator(s), 1.1)
    assert abs(np.vdot(coherent_equator(s).amplitudes, psi.amplitudes)) == pytest.approx(1.0)


def test_state_validation():
    with pytest.raises(DomainError):
        SingleSpinState(SpinSize(1), np.array([1.0, 1.0]))
    with pytest.raises(DomainError):
        SingleSpinState(SpinSize(1), np.array([1.0, 0.0, 0.0]))
    with pytest.raises(TypeError):
        prepare_initial(1, PreparationParams(0.1, 0.1), mu=0.2)
