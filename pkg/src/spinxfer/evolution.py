"""Exact dynamics of the open Ising chain ``H = sum_j S_z^j S_z^{j+1}``.

``H`` is diagonal in the product S_z basis, so a traced-out neighbour with
populations ``p_k`` multiplies an adjacent coherence ``|m><m'|`` by the
dephasing kernel ``f(m - m', t) = sum_k p_k exp(-i t (m - m') k)``.  One- and
two-site reduced states therefore cost O(S^2) per time point, independent of
the chain length.  The full state vector is kept only as a test oracle.

Sites are numbered from 1 to N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._validation import DomainError, ResourceCapError, check_site, check_times
from .spin_algebra import SpinSize
from .states import PreparationParams, SingleSpinState, prepare_initial

DEFAULT_MAX_AMPLITUDES = 2_000_000


@dataclass(frozen=True)
class ChainSpec:
    n_sites: int
    spin: SpinSize
    site_states: tuple = field(repr=False)

    def __post_init__(self):
        spin = SpinSize.of(self.spin)
        states = tuple(self.site_states)
        if self.n_sites < 2:
            raise DomainError(f"a chain needs at least 2 sites, got {self.n_sites}")
        if len(states) != self.n_sites:
            raise DomainError(f"{len(states)} site states for {self.n_sites} sites")
        for st in states:
            if not isinstance(st, SingleSpinState) or st.spin != spin:
                raise DomainError("every site state must be a SingleSpinState of the chain spin")
        object.__setattr__(self, "spin", spin)
        object.__setattr__(self, "site_states", states)

    @classmethod
    def uniform(cls, n_sites: int, spin, params: PreparationParams | None = None, **kw) -> "ChainSpec":
        """Chain with the same prepared state on every site."""
        spin = SpinSize.of(spin)
        state = prepare_initial(spin, params, **kw)
        return cls(n_sites, spin, (state,) * n_sites)

    def neighbors(self, j: int) -> list[int]:
        check_site(j, self.n_sites)
        return [i for i in (j - 1, j + 1) if 1 <= i <= self.n_sites]

    def state(self, j: int) -> SingleSpinState:
        return self.site_states[check_site(j, self.n_sites) - 1]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform times in units of the inverse coupling."""

    t_start: float = 0.0
    t_end: float = 2 * np.pi
    n_points: int = 201

    def __post_init__(self):
        if self.t_end < self.t_start:
            raise DomainError("t_end must not precede t_start")
        if self.n_points < 1:
            raise DomainError("n_points must be >= 1")

    @property
    def times(self) -> np.ndarray:
        if self.n_points == 1 or self.t_end == self.t_start:
            return np.array([float(self.t_start)])
        return np.linspace(self.t_start, self.t_end, self.n_points)

    @property
    def step(self) -> float:
        t = self.times
        return float(t[1] - t[0]) if t.size > 1 else 0.0


def _kernel_table(state: SingleSpinState, t: np.ndarray, max_delta: int) -> np.ndarray:
    """``f(delta, t)`` for integer ``delta`` in ``[-max_delta, max_delta]``.

    Shape ``(len(t), 2 * max_delta + 1)``; column ``delta + max_delta``.
    """
    # ascending k for a fixed summation order
    k = state.spin.m[::-1]
    p = state.populations[::-1]
    delta = np.arange(-max_delta, max_delta + 1)
    phase = np.exp(-1j * t[:, None, None] * delta[None, :, None] * k[None, None, :])
    return phase @ p


def dephasing_kernel(state: SingleSpinState, delta: int, t):
    """``sum_k |c_k|^2 exp(-i t delta k)`` for an integer ``|delta| <= 2S``."""
    if int(delta) != delta or abs(delta) > state.spin.two_s:
        raise DomainError(f"delta={delta} outside [-2S, 2S] = [-{state.spin.two_s}, {state.spin.two_s}]")
    ts, scalar = check_times(t)
    two_s = state.spin.two_s
    out = _kernel_table(state, ts, two_s)[:, int(delta) + two_s]
    return complex(out[0]) if scalar else out


def _delta_index(spin: SpinSize):
    # m - m' is an integer even for half-integer S; offset by 2S for table lookup
    i = np.arange(spin.dim)
    return (i[None, :] - i[:, None]) + spin.two_s


def reduced_rho_one(chain: ChainSpec, j: int, t):
    """Single-site reduced density matrix ``rho_j(t)`` (stacked if ``t`` is an array)."""
    check_site(j, chain.n_sites)
    ts, scalar = check_times(t)
    spin = chain.spin
    st = chain.state(j)
    rho = np.broadcast_to(st.projector(), (ts.size, spin.dim, spin.dim)).copy()
    idx = _delta_index(spin)
    for nb in chain.neighbors(j):
        f = _kernel_table(chain.state(nb), ts, spin.two_s)
        rho *= f[:, idx]
    return rho[0] if scalar else rho


def reduced_rho_pair(chain: ChainSpec, j: int, j2: int, t):
    """Two-site reduced density matrix on ``H_j (x) H_j2`` for ``j < j2``.

    Rows are indexed by ``(m_j, m_j2)`` with ``m_j2`` running fastest.
    """
    check_site(j, chain.n_sites)
    check_site(j2, chain.n_sites, "j2")
    if not j < j2:
        raise DomainError(f"need j < j2, got ({j}, {j2})")
    ts, scalar = check_times(t)
    spin = chain.spin
    d, two_s = spin.dim, spin.two_s
    m = spin.m
    a, b = chain.state(j).amplitudes, chain.state(j2).amplitudes
    amp = np.outer(a, b)
    idx = _delta_index(spin)  # idx[r, c] = (m_r - m_c) + 2S
    dj = idx[:, None, :, None]
    dk = idx[None, :, None, :]

    outer_left = [nb for nb in chain.neighbors(j) if nb != j2 and nb < j]
    outer_right = [nb for nb in chain.neighbors(j2) if nb != j and nb > j2]
    # rho[t, x, y, x', y'] with x,x' on site j and y,y' on site j2
    if j2 == j + 1:
        # the bond phase acts on the pair amplitudes directly
        psi = amp[None] * np.exp(-1j * ts[:, None, None] * np.multiply.outer(m, m)[None])
        rho = np.einsum("txy,tuv->txyuv", psi, psi.conj())
    else:
        rho = np.einsum("xy,uv->xyuv", amp, amp.conj())[None].repeat(ts.size, axis=0)
    if j2 == j + 2:
        g = _kernel_table(chain.state(j + 1), ts, 2 * two_s)
        # joint kernel of the shared neighbour: delta_j + delta_j2 in [-4S, 4S]
        rho *= g[:, (dj - two_s) + (dk - two_s) + 2 * two_s]
    elif j2 > j + 2:
        for nb in chain.neighbors(j):
            if nb > j:
                rho *= _kernel_table(chain.state(nb), ts, two_s)[:, dj]
        for nb in chain.neighbors(j2):
            if nb < j2:
                rho *= _kernel_table(chain.state(nb), ts, two_s)[:, dk]
    for nb in outer_left:
        rho *= _kernel_table(chain.state(nb), ts, two_s)[:, dj]
    for nb in outer_right:
        rho *= _kernel_table(chain.state(nb), ts, two_s)[:, dk]
    rho = rho.reshape(ts.size, d * d, d * d)
    return rho[0] if scalar else rho


def full_statevector(chain: ChainSpec, t: float, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> np.ndarray:
    """Exact global state; amplitude index is row-major over ``(m_1, ..., m_N)``."""
    d, n = chain.spin.dim, chain.n_sites
    if d**n > max_amplitudes:
        raise ResourceCapError(f"(2S+1)^N = {d}^{n} exceeds the cap of {max_amplitudes} amplitudes")
    m = chain.spin.m
    psi = chain.site_states[0].amplitudes.astype(complex)
    energy = np.zeros(1)
    last_m = m.copy()
    for l in range(1, n):
        psi = np.multiply.outer(psi, chain.site_states[l].amplitudes).ravel()
        energy = (energy[:, None] + np.multiply.outer(last_m, m)).ravel()
        last_m = np.tile(m, d**l)
    return psi * np.exp(-1j * t * energy)


def reduced_from_statevector(psi, keep: Sequence[int], dim: int) -> np.ndarray:
    """Partial trace of ``|psi><psi|`` onto the 1-based sites in ``keep``."""
    psi = np.asarray(psi)
    n = int(round(np.log(psi.size) / np.log(dim)))
    if dim**n != psi.size:
        raise DomainError(f"state of size {psi.size} is not a power of {dim}")
    keep = sorted({check_site(k, n, "keep") for k in keep})
    if not 1 <= len(keep) <= 2:
        raise DomainError("keep must name one or two sites")
    tensor = psi.reshape((dim,) * n)
    kept_axes = [k - 1 for k in keep]
    rest = [a for a in range(n) if a not in kept_axes]
    mat = np.transpose(tensor, kept_axes + rest).reshape(dim ** len(keep), -1)
    return mat @ mat.conj().T
