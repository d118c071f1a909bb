"""Per-site initial states: equatorial coherent state, one-axis squeezing
``exp(-i mu S_z^2)`` and rotation ``exp(i theta S_x)``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ._validation import DomainError
from .spin_algebra import SpinSize, spin_operators


@dataclass(frozen=True, eq=False)
class SingleSpinState:
    spin: SpinSize
    amplitudes: np.ndarray

    def __post_init__(self):
        spin = SpinSize.of(self.spin)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (spin.dim,):
            raise DomainError(f"expected {spin.dim} amplitudes, got shape {amps.shape}")
        if abs(np.vdot(amps, amps).real - 1) > 1e-10:
            raise DomainError("state is not normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "spin", spin)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def populations(self) -> np.ndarray:
        """``|c_m|^2`` in basis order."""
        return np.abs(self.amplitudes) ** 2

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def expect(self, op) -> complex:
        return np.vdot(self.amplitudes, op @ self.amplitudes)


@dataclass(frozen=True)
class PreparationParams:
    """Squeezing strength ``mu`` and rotation angle ``theta_rot`` (radians)."""

    mu: float = 0.0
    theta_rot: float = 0.0


def binomial_amplitudes(s) -> np.ndarray:
    """``gamma_m = 2^-S sqrt((2S)! / ((S-m)! (S+m)!))`` evaluated in log space."""
    s = SpinSize.of(s)
    m, S = s.m, s.S
    log_g = 0.5 * (gammaln(2 * S + 1) - gammaln(S - m + 1) - gammaln(S + m + 1)) - S * np.log(2)
    return np.exp(log_g)


def coherent_equator(s) -> SingleSpinState:
    """Spin coherent state ``|pi/2, 0>`` pointing along +x."""
    s = SpinSize.of(s)
    return SingleSpinState(s, binomial_amplitudes(s))


def squeeze(state: SingleSpinState, mu: float) -> SingleSpinState:
    m = state.spin.m
    return SingleSpinState(state.spin, np.exp(-1j * mu * m**2) * state.amplitudes)


@lru_cache(maxsize=64)
def _sx_eig(two_s):
    sx, _, _ = spin_operators(SpinSize(two_s))
    w, v = np.linalg.eigh(sx)
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def rotation_x(s, theta_rot: float) -> np.ndarray:
    """Unitary ``P(theta) = exp(i theta S_x)`` from the eigendecomposition of S_x."""
    s = SpinSize.of(s)
    w, v = _sx_eig(s.two_s)
    return (v * np.exp(1j * theta_rot * w)) @ v.conj().T


def rotate_x(state: SingleSpinState, theta_rot: float) -> SingleSpinState:
    p = rotation_x(state.spin, theta_rot)
    amps = p @ state.amplitudes
    # unitary up to rounding; renormalize to keep the invariant tight
    amps = amps / np.linalg.norm(amps)
    return SingleSpinState(state.spin, amps)


def prepare_initial(s, params: PreparationParams | None = None, *, mu=None, theta_rot=None) -> SingleSpinState:
    """``exp(i theta S_x) exp(-i mu S_z^2) |pi/2, 0>``.

    Parameters may be given as a :class:`PreparationParams` or as keywords.
    """
    if params is None:
        params = PreparationParams(mu=mu or 0.0, theta_rot=theta_rot or 0.0)
    elif mu is not None or theta_rot is not None:
        raise TypeError("pass either params or mu/theta_rot, not both")
    return rotate_x(squeeze(coherent_equator(s), params.mu), params.theta_rot)


def transverse_variances(state: SingleSpinState, n_angles: int = 721):
    """Variance of ``cos(a) S_y + sin(a) S_z`` over ``a`` in [0, pi).

    Returns ``(angles, variances)``; the minimum is the squeezed quadrature.
    """
    _, sy, sz = spin_operators(state.spin)
    a = np.linspace(0, np.pi, n_angles, endpoint=False)
    psi = state.amplitudes
    ey, ez = np.vdot(psi, sy @ psi).real, np.vdot(psi, sz @ psi).real
    yy = np.vdot(psi, sy @ sy @ psi).real
    zz = np.vdot(psi, sz @ sz @ psi).real
    yz = np.vdot(psi, (sy @ sz + sz @ sy) @ psi).real / 2
    c, s_ = np.cos(a), np.sin(a)
    second = c**2 * yy + s_**2 * zz + 2 * c * s_ * yz
    first = c * ey + s_ * ez
    return a, second - first**2
