import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from sympy import Rational
from sympy.physics.quantum.cg import CG

from spinxfer import DomainError, SpinSize, clebsch_gordan, spherical_harmonic, spin_operators, tensor_operator, wigner_d
from spinxfer.spin_algebra import tensor_operators, wigner_d_matrix

two_s = st.integers(min_value=1, max_value=14)


def test_spin_size_values():
    s = SpinSize.of(2.5)
    assert s.two_s == 5 and s.dim == 6 and s.S == 2.5
    assert np.allclose(s.m, [2.5, 1.5, 0.5, -0.5, -1.5, -2.5])
    assert s.eps == pytest.approx(1 / 6)
    assert not s.is_integer and SpinSize.of(3).is_integer
    assert s.index(-1.5) == 4


@pytest.mark.parametrize("bad", [0, -1, 0.3, 1.25])
def test_spin_size_rejects(bad):
    with pytest.raises(DomainError):
        SpinSize.of(bad)


@settings(max_examples=20, deadline=None)
@given(two_s)
def test_commutators_and_casimir(n):
    s = SpinSize(n)
    sx, sy, sz = spin_operators(s)
    assert np.allclose(sx @ sy - sy @ sx, 1j * sz, atol=1e-12)
    assert np.allclose(sy @ sz - sz @ sy, 1j * sx, atol=1e-12)
    casimir = sx @ sx + sy @ sy + sz @ sz
    assert np.allclose(casimir, s.S * (s.S + 1) * np.eye(s.dim), atol=1e-11)
    assert np.allclose(np.diag(sz), s.m)


@settings(max_examples=20, deadline=None)
@given(two_s, st.floats(min_value=-6.3, max_value=6.3))
def test_d_matrix_matches_expm(n, beta):
    s = SpinSize(n)
    _, sy, _ = spin_operators(s)
    oracle = expm(-1j * beta * sy)
    assert np.allclose(wigner_d_matrix(s, beta), oracle.real, atol=1e-11)
    assert np.abs(oracle.imag).max() < 1e-11


def test_d_half_closed_form():
    b = 0.83
    d = wigner_d_matrix(0.5, b)
    assert np.allclose(d, [[np.cos(b / 2), -np.sin(b / 2)], [np.sin(b / 2), np.cos(b / 2)]], atol=1e-14)
    assert wigner_d(0.5, 0.5, -0.5, b) == pytest.approx(-np.sin(b / 2))


def test_d_matrix_vectorized():
    betas = np.array([0.1, 1.2, 2.9])
    stack = wigner_d_matrix(3, betas)
    assert stack.shape == (3, 7, 7)
    for k, b in enumerate(betas):
        assert np.allclose(stack[k], wigner_d_matrix(3, b))


def _cg_cases():
    cases = []
    for j1 in (Rational(1, 2), 1, Rational(3, 2), 2):
        for j2 in (Rational(1, 2), 1, Rational(5, 2)):
            J = abs(j1 - j2) + 1
            if J > j1 + j2:
                J = j1 + j2
            cases.append((j1, j1 - 1 if j1 >= 1 else j1, j2, -j2 + 1 if j2 >= 1 else j2, J))
    return cases


@pytest.mark.parametrize("j1,m1,j2,m2,J", _cg_cases())
def test_cg_against_sympy(j1, m1, j2, m2, J):
    M = m1 + m2
    if abs(M) > J:
        pytest.skip("projection outside J")
    expected = float(CG(j1, m1, j2, m2, J, M).doit())
    assert clebsch_gordan(float(j1), float(m1), float(j2), float(m2), float(J), float(M)) == pytest.approx(expected, abs=1e-14)


def test_cg_selection_rules():
    assert clebsch_gordan(1, 1, 1, 0, 2, 0) == 0.0
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == pytest.approx(0.0, abs=1e-15)
    assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(np.sqrt(0.5))


def test_cg_large_spin_sum_rule():
    # sum over m1 of |<j1 m1 j2 M-m1|J M>|^2 = 1
    j1, j2, J, M = 10, 10, 13, 2
    total = sum(clebsch_gordan(j1, m1, j2, M - m1, J, M) ** 2 for m1 in range(-10, 11) if abs(M - m1) <= j2)
    assert total == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
def test_tensor_orthonormal(n):
    s = SpinSize(n)
    T = tensor_operators(s)
    assert len(T) == s.dim**2
    keys = list(T)
    G = np.array([[np.trace(T[a].conj().T @ T[b]) for b in keys] for a in keys])
    assert np.allclose(G, np.eye(len(keys)), atol=1e-12)
    for (L, M), op in T.items():
        assert np.allclose(op.conj().T, (-1) ** M * T[(L, -M)], atol=1e-13)
        assert np.isrealobj(op) or np.abs(op.imag).max() == 0


def test_tensor_low_rank_forms():
    s = SpinSize(4)
    _, _, sz = spin_operators(s)
    assert np.allclose(tensor_operator(s, 0, 0), np.eye(5) / np.sqrt(5))
    norm = np.sqrt(np.trace(sz @ sz))
    assert np.allclose(tensor_operator(s, 1, 0), sz / norm, atol=1e-13)
    with pytest.raises(DomainError):
        tensor_operator(s, 5, 0)
    with pytest.raises(DomainError):
        tensor_operator(s, 2, 3)


def test_tensor_raising_index():
    # T_LM moves |m> to |m + M>
    s = SpinSize(4)
    T = tensor_operator(s, 2, 1)
    rows, cols = np.nonzero(np.abs(T) > 1e-14)
    assert np.all(s.m[rows] - s.m[cols] == 1)


def test_spherical_harmonic_low_order():
    th, ph = 0.7, 1.9
    assert spherical_harmonic(0, 0, th, ph) == pytest.approx(1 / np.sqrt(4 * np.pi))
    assert spherical_harmonic(1, 0, th, ph) == pytest.approx(np.sqrt(3 / (4 * np.pi)) * np.cos(th))
    y11 = -np.sqrt(3 / (8 * np.pi)) * np.sin(th) * np.exp(1j * ph)
    assert spherical_harmonic(1, 1, th, ph) == pytest.approx(y11)
