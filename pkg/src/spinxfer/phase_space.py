"""Stratonovich-Weyl phase space of a spin and the semiclassical chain dynamics.

The kernel ``w(Omega) = 2 sqrt(pi / (2S+1)) sum_LM Y*_LM(Omega) T_LM`` maps an
operator to its symbol ``W_A(Omega) = Tr(A w(Omega))``.  On a sphere grid with
``n_theta >= 2S+1`` Gauss-Legendre nodes in cos(theta) and ``n_phi >= 4S+1``
uniform azimuths every product of two symbols is integrated exactly, so the
overlap identity and the inverse map are exact to rounding.

Semiclassical evolution under the Ising chain keeps every theta and shifts
each azimuth by ``tau * (sum of neighbour cos(theta))``.  Integrating out a
neighbour therefore multiplies the azimuthal mode ``M`` of a site's symbol by
the characteristic function ``chi(M tau)`` of the neighbour's cos(theta)
marginal, which is a polynomial of degree 2S and is integrated against
``exp(-i k u)`` in closed form via spherical Bessel functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import spherical_jn

from ._validation import DomainError, ResolutionError, ResourceCapError, check_site, hermitize
from .evolution import ChainSpec
from .measures import negativity
from .spin_algebra import SpinSize, spherical_harmonic, tensor_operators, wigner_d_matrix
from .states import PreparationParams, SingleSpinState, binomial_amplitudes

# Sign of the azimuthal drift.  Fixed by matching the exact <S_y>(t) of a spin
# next to a neighbour with <S_z> != 0 (see tests/test_phase_space.py).
DRIFT_SIGN = 1.0

DRIFTS = ("leading", "exact")


@dataclass(frozen=True)
class SphereGrid:
    """Gauss-Legendre nodes in cos(theta) times uniform azimuths."""

    n_theta: int
    n_phi: int

    def __post_init__(self):
        if self.n_theta < 1 or self.n_phi < 1:
            raise DomainError("grid sizes must be positive")

    @classmethod
    def for_spin(cls, s, n_theta=None, n_phi=None) -> "SphereGrid":
        s = SpinSize.of(s)
        return cls(n_theta or s.two_s + 2, n_phi or 2 * s.two_s + 4)

    @property
    def cos_theta(self) -> np.ndarray:
        return _gauss(self.n_theta)[0]

    @property
    def theta_weights(self) -> np.ndarray:
        return _gauss(self.n_theta)[1]

    @property
    def theta(self) -> np.ndarray:
        return np.arccos(self.cos_theta)

    @property
    def phi(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights of shape ``(n_theta, n_phi)``; they sum to 4 pi."""
        return np.outer(self.theta_weights, np.full(self.n_phi, 2 * np.pi / self.n_phi))

    def mesh(self):
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def is_exact_for(self, s) -> bool:
        s = SpinSize.of(s)
        return self.n_theta >= s.two_s + 1 and self.n_phi >= 2 * s.two_s + 1

    def check_exact(self, s):
        if not self.is_exact_for(s):
            s = SpinSize.of(s)
            raise ResolutionError(
                f"grid {self.n_theta}x{self.n_phi} is under-resolved for S={s}: "
                f"need n_theta >= {s.two_s + 1} and n_phi >= {2 * s.two_s + 1}"
            )


@lru_cache(maxsize=128)
def _gauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    # descending cos(theta) so theta increases along the axis
    x, w = x[::-1].copy(), w[::-1].copy()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True, eq=False)
class WignerField:
    """Samples of a one- or two-site symbol.

    ``values`` has shape ``(n_theta, n_phi)`` for one site and
    ``(n_theta, n_phi, n_theta2, n_phi2)`` for a pair.
    """

    grids: tuple
    values: np.ndarray
    spin: SpinSize

    def __post_init__(self):
        grids = tuple(self.grids) if isinstance(self.grids, (tuple, list)) else (self.grids,)
        shape = sum(((g.n_theta, g.n_phi) for g in grids), ())
        if np.shape(self.values) != shape:
            raise DomainError(f"values shape {np.shape(self.values)} does not match grids {shape}")
        object.__setattr__(self, "grids", grids)
        object.__setattr__(self, "spin", SpinSize.of(self.spin))

    @property
    def n_sites(self) -> int:
        return len(self.grids)

    @property
    def grid(self) -> SphereGrid:
        if self.n_sites != 1:
            raise DomainError("pair field has two grids")
        return self.grids[0]

    def integrate(self, values=None) -> float:
        """``((2S+1)/(4 pi))^n * integral`` of ``values`` (default: the field)."""
        v = self.values if values is None else values
        c = self.spin.dim / (4 * np.pi)
        if self.n_sites == 1:
            return c * np.sum(self.grid.weights * v)
        w1, w2 = self.grids[0].weights, self.grids[1].weights
        return c * c * np.einsum("ij,ijkl,kl->", w1, v, w2)

    def normalization(self) -> float:
        return float(np.real(self.integrate()))

    def marginal(self, keep=0) -> "WignerField":
        """Integrate out one site of a pair field, keeping site ``keep`` (0 or 1)."""
        if self.n_sites != 2:
            raise DomainError("marginal needs a pair field")
        c = self.spin.dim / (4 * np.pi)
        if keep == 0:
            v = c * np.einsum("ijkl,kl->ij", self.values, self.grids[1].weights)
        else:
            v = c * np.einsum("ij,ijkl->kl", self.grids[0].weights, self.values)
        return WignerField((self.grids[keep],), v, self.spin)


def kernel_matrix(s, theta, phi) -> np.ndarray:
    """Stratonovich-Weyl kernel at a single point of the sphere."""
    s = SpinSize.of(s)
    out = np.zeros((s.dim, s.dim), complex)
    for (L, M), T in tensor_operators(s).items():
        out += np.conj(spherical_harmonic(L, M, theta, phi)) * T
    return 2 * np.sqrt(np.pi / s.dim) * out


@lru_cache(maxsize=32)
def _kernel_grid(two_s, n_theta, n_phi):
    s = SpinSize(two_s)
    grid = SphereGrid(n_theta, n_phi)
    th, ph = grid.mesh()
    items = list(tensor_operators(s).items())
    Y = np.array([np.conj(spherical_harmonic(L, M, th, ph)) for (L, M), _ in items])
    T = np.array([t for _, t in items])
    K = 2 * np.sqrt(np.pi / s.dim) * np.einsum("kij,kab->ijab", Y, T, optimize=True)
    K.setflags(write=False)
    return K


def kernel_on_grid(s, grid: SphereGrid) -> np.ndarray:
    """Kernel matrices at every node, shape ``(n_theta, n_phi, d, d)``."""
    return _kernel_grid(SpinSize.of(s).two_s, grid.n_theta, grid.n_phi)


def _as_real(values, atol=1e-10):
    if np.abs(values.imag).max(initial=0.0) <= atol * max(1.0, np.abs(values).max(initial=0.0)):
        return values.real.copy()
    return values


def wigner_of_operator(a, grid: SphereGrid, s=None) -> WignerField:
    """Symbol ``Tr(A w(Omega))`` of a one-site operator on ``grid``."""
    a = np.asarray(a)
    s = SpinSize.of(s) if s is not None else SpinSize(a.shape[-1] - 1)
    if a.shape != (s.dim, s.dim):
        raise DomainError(f"operator shape {a.shape} does not match S={s}")
    K = kernel_on_grid(s, grid)
    values = np.einsum("ab,ijba->ij", a, K)
    return WignerField((grid,), _as_real(values), s)


def wigner_of_pair_operator(a, grid: SphereGrid, grid2: SphereGrid | None = None, s=None) -> WignerField:
    """Symbol ``Tr(A w(Omega_1) (x) w(Omega_2))`` of a two-site operator."""
    a = np.asarray(a)
    d = int(round(np.sqrt(a.shape[-1])))
    s = SpinSize.of(s) if s is not None else SpinSize(d - 1)
    if a.shape != (s.dim**2, s.dim**2):
        raise DomainError(f"operator shape {a.shape} does not match a pair of S={s}")
    grid2 = grid2 or grid
    K1, K2 = kernel_on_grid(s, grid), kernel_on_grid(s, grid2)
    A = a.reshape(s.dim, s.dim, s.dim, s.dim)
    values = np.einsum("abcd,ijca,kldb->ijkl", A, K1, K2, optimize=True)
    return WignerField((grid, grid2), _as_real(values), s)


def reconstruct_operator(w: WignerField) -> np.ndarray:
    """Inverse map ``(2S+1)/(4 pi) * integral of W(Omega) w(Omega)`` (per site)."""
    s = w.spin
    for g in w.grids:
        g.check_exact(s)
    c = s.dim / (4 * np.pi)
    if w.n_sites == 1:
        K = kernel_on_grid(s, w.grid)
        return c * np.einsum("ij,ij,ijab->ab", w.grid.weights, w.values, K)
    g1, g2 = w.grids
    K1 = kernel_on_grid(s, g1).reshape(-1, s.dim, s.dim)
    K2 = kernel_on_grid(s, g2).reshape(-1, s.dim, s.dim)
    vals = (w.values * g1.weights[:, :, None, None] * g2.weights[None, None]).reshape(K1.shape[0], K2.shape[0])
    rho = c * c * np.einsum("PQ,Pac,Qbd->abcd", vals, K1, K2, optimize=True)
    return rho.reshape(s.dim**2, s.dim**2)


def wigner_initial_approx(s, params: PreparationParams, theta, phi, return_imag=False):
    """Large-S approximation of the initial symbol from d-functions at ``2 Theta``.

    ``(Theta, Phi)`` are the polar angles of the point after rotating the
    frame about x by ``theta_rot``.  Where ``sin(Theta) = 0`` the azimuth is
    taken as 0; the d-matrix is diagonal there so the phase drops out.
    """
    s = SpinSize.of(s)
    theta = np.asarray(theta, float)
    phi = np.asarray(phi, float)
    vt = params.theta_rot
    x = np.sin(theta) * np.cos(phi)
    y = np.sin(theta) * np.sin(phi)
    z = np.cos(theta)
    cos_big = z * np.cos(vt) + y * np.sin(vt)
    sin_phi_sin = y * np.cos(vt) - z * np.sin(vt)
    big_theta = np.arccos(np.clip(cos_big, -1.0, 1.0))
    big_phi = np.arctan2(sin_phi_sin, x)

    m = s.m
    c = binomial_amplitudes(s) * np.exp(-1j * params.mu * m**2)
    n, k = m[:, None], m[None, :]
    coeff = np.conj(c)[:, None] * c[None, :] * np.exp(0.5j * np.pi * (n + k + s.two_s))
    d = wigner_d_matrix(s, 2 * big_theta)
    phase = np.exp(-1j * (n - k) * big_phi[..., None, None])
    total = np.einsum("nk,...nk->...", coeff, phase * d)
    if return_imag:
        return total.real, total.imag
    return total.real


def wigner_initial_approx_field(s, params: PreparationParams, grid: SphereGrid) -> WignerField:
    s = SpinSize.of(s)
    th, ph = grid.mesh()
    return WignerField((grid,), wigner_initial_approx(s, params, th, ph), s)


def wigner_initial_exact_field(s, params: PreparationParams, grid: SphereGrid) -> WignerField:
    from .states import prepare_initial

    s = SpinSize.of(s)
    return wigner_of_operator(prepare_initial(s, params).projector(), grid, s)


@dataclass(frozen=True)
class TrajectoryMap:
    """Backward classical flow of the Ising chain over time ``t``.

    ``drift="leading"`` uses the azimuthal rate ``t / (2 eps) = t (2S+1)/2`` per
    unit neighbour cos(theta); ``drift="exact"`` uses ``2 S (S+1) t / (2S+1)``
    from the bracket acting on the symbol ``S(S+1) sum cos(theta_j) cos(theta_j+1)``.
    """

    t: float
    spin: SpinSize
    drift: str = "leading"

    def __post_init__(self):
        if self.drift not in DRIFTS:
            raise DomainError(f"drift must be one of {DRIFTS}, got {self.drift!r}")
        object.__setattr__(self, "spin", SpinSize.of(self.spin))

    @property
    def tau(self) -> float:
        s = self.spin
        if self.drift == "leading":
            rate = 1 / (2 * s.eps)
        else:
            rate = 2 * s.eps * s.S * (s.S + 1)
        return DRIFT_SIGN * rate * self.t


def hamiltonian_symbol(s, thetas) -> float:
    """``S(S+1) sum_j cos(theta_j) cos(theta_j+1)`` for an open chain."""
    s = SpinSize.of(s)
    c = np.cos(np.asarray(thetas, float))
    return s.S * (s.S + 1) * np.sum(c[:-1] * c[1:], axis=-1)


def backward_trajectory(traj: TrajectoryMap, config) -> np.ndarray:
    """Map final per-site ``(theta, phi)`` rows to their initial values."""
    config = np.asarray(config, float)
    if config.ndim != 2 or config.shape[1] != 2:
        raise DomainError("config must have shape (n_sites, 2)")
    theta = config[:, 0]
    u = np.cos(theta)
    field = np.zeros_like(u)
    field[:-1] += u[1:]
    field[1:] += u[:-1]
    out = config.copy()
    out[:, 1] = config[:, 1] - traj.tau * field
    return out


def theta_marginal(state: SingleSpinState, grid: SphereGrid | None = None) -> np.ndarray:
    """Density of ``u = cos(theta)`` under the exact symbol, on the grid nodes.

    Normalized so that ``sum(grid.theta_weights * p) = 1``.
    """
    grid = grid or SphereGrid.for_spin(state.spin)
    grid.check_exact(state.spin)
    W = wigner_of_operator(state.projector(), grid, state.spin).values
    return state.spin.dim / 2 * W.mean(axis=1).real


def _legendre_coefficients(state: SingleSpinState) -> np.ndarray:
    # marginal is a polynomial of degree 2S in u; its Legendre expansion is exact
    grid = SphereGrid.for_spin(state.spin)
    p = theta_marginal(state, grid)
    L = np.arange(state.spin.two_s + 1)
    P = np.polynomial.legendre.legvander(grid.cos_theta, state.spin.two_s)
    return (2 * L + 1) / 2 * ((grid.theta_weights * p) @ P)


def marginal_characteristic(state: SingleSpinState, kappa) -> np.ndarray:
    """``integral p(u) exp(-i kappa u) du`` for the neighbour's cos(theta) marginal."""
    b = _legendre_coefficients(state)
    kappa = np.asarray(kappa, float)
    L = np.arange(b.size)
    j = spherical_jn(L, np.abs(kappa)[..., None]) * np.where(kappa[..., None] < 0, (-1.0) ** L, 1.0)
    return np.sum(b * 2 * (-1j) ** L * j, axis=-1)


def _modes(values, axis):
    n = values.shape[axis]
    return np.fft.fft(values, axis=axis) / n


def _mode_numbers(n_phi):
    return np.rint(np.fft.fftfreq(n_phi, 1.0 / n_phi)).astype(int)


def evolved_single_wigner(chain: ChainSpec, j: int, t: float, grid: SphereGrid | None = None, drift="leading") -> WignerField:
    """Semiclassical one-site symbol at time ``t`` (neighbours integrated out)."""
    check_site(j, chain.n_sites)
    s = chain.spin
    grid = grid or SphereGrid.for_spin(s)
    grid.check_exact(s)
    tau = TrajectoryMap(t, s, drift).tau
    W0 = wigner_of_operator(chain.state(j).projector(), grid, s).values
    A = _modes(W0, 1)
    M = _mode_numbers(grid.n_phi)
    factor = np.ones(grid.n_phi, complex)
    for nb in chain.neighbors(j):
        factor *= marginal_characteristic(chain.state(nb), M * tau)
    values = np.fft.ifft(A * factor, axis=1) * grid.n_phi
    return WignerField((grid,), values.real, s)


def pair_grid(s, t: float, drift="leading") -> SphereGrid:
    """Grid resolving the ``exp(-i M tau cos(theta))`` coupling of an evolved pair."""
    s = SpinSize.of(s)
    kappa = s.two_s * abs(TrajectoryMap(t, s, drift).tau)
    n_theta = max(s.two_s + 2, int(np.ceil((2 * s.two_s + kappa + 21) / 2)) + 8)
    return SphereGrid(n_theta, 2 * s.two_s + 4)


def evolved_pair_wigner(chain: ChainSpec, j: int, t: float, grids=None, drift="leading") -> WignerField:
    """Semiclassical symbol of the adjacent pair ``(j, j+1)`` at time ``t``."""
    check_site(j, chain.n_sites)
    if j + 1 > chain.n_sites:
        raise DomainError(f"pair ({j}, {j + 1}) is outside the chain")
    s = chain.spin
    if grids is None:
        g = pair_grid(s, t, drift)
        grids = (g, g)
    elif isinstance(grids, SphereGrid):
        grids = (grids, grids)
    g1, g2 = grids
    g1.check_exact(s)
    g2.check_exact(s)
    tau = TrajectoryMap(t, s, drift).tau
    M1, M2 = _mode_numbers(g1.n_phi), _mode_numbers(g2.n_phi)
    A = _modes(wigner_of_operator(chain.state(j).projector(), g1, s).values, 1)
    B = _modes(wigner_of_operator(chain.state(j + 1).projector(), g2, s).values, 1)
    chi_left = np.ones(g1.n_phi, complex)
    chi_right = np.ones(g2.n_phi, complex)
    if j - 1 >= 1:
        chi_left = marginal_characteristic(chain.state(j - 1), M1 * tau)
    if j + 2 <= chain.n_sites:
        chi_right = marginal_characteristic(chain.state(j + 2), M2 * tau)
    # site j drifts with cos(theta_{j+1}) and vice versa
    couple1 = np.exp(-1j * tau * np.multiply.outer(M1, g2.cos_theta))  # (M1, i2)
    couple2 = np.exp(-1j * tau * np.multiply.outer(g1.cos_theta, M2))  # (i1, M2)
    modes = np.einsum("am,bn,mb,an->ambn", A * chi_left, B * chi_right, couple1, couple2, optimize=True)
    values = np.fft.ifft(np.fft.ifft(modes, axis=1), axis=3) * (g1.n_phi * g2.n_phi)
    return WignerField((g1, g2), values.real, s)


def evolved_pair_operator(chain: ChainSpec, j: int, t: float, grids=None, drift="leading") -> np.ndarray:
    """``reconstruct_operator(evolved_pair_wigner(...))`` without the 4-D field.

    The evolved pair symbol is a sum of products of one-site factors per
    azimuthal mode pair, so the double quadrature separates into one-site
    matrix integrals.
    """
    check_site(j, chain.n_sites)
    if j + 1 > chain.n_sites:
        raise DomainError(f"pair ({j}, {j + 1}) is outside the chain")
    s = chain.spin
    if grids is None:
        g = pair_grid(s, t, drift)
        grids = (g, g)
    elif isinstance(grids, SphereGrid):
        grids = (grids, grids)
    g1, g2 = grids
    g1.check_exact(s)
    g2.check_exact(s)
    tau = TrajectoryMap(t, s, drift).tau
    M1, M2 = _mode_numbers(g1.n_phi), _mode_numbers(g2.n_phi)
    keep1, keep2 = np.abs(M1) <= s.two_s, np.abs(M2) <= s.two_s
    M1, M2 = M1[keep1], M2[keep2]
    A = _modes(wigner_of_operator(chain.state(j).projector(), g1, s).values, 1)[:, keep1]
    B = _modes(wigner_of_operator(chain.state(j + 1).projector(), g2, s).values, 1)[:, keep2]
    if j - 1 >= 1:
        A = A * marginal_characteristic(chain.state(j - 1), M1 * tau)
    if j + 2 <= chain.n_sites:
        B = B * marginal_characteristic(chain.state(j + 2), M2 * tau)
    # (1/n) sum_k exp(i M phi_k) w(theta_i, phi_k): the kernel component paired with mode M
    K1 = np.fft.ifft(kernel_on_grid(s, g1), axis=1)[:, keep1]
    K2 = np.fft.ifft(kernel_on_grid(s, g2), axis=1)[:, keep2]
    couple1 = np.exp(-1j * tau * np.multiply.outer(M1, g2.cos_theta))
    couple2 = np.exp(-1j * tau * np.multiply.outer(g1.cos_theta, M2))
    X = np.einsum("i,im,in,imab->mnab", g1.theta_weights, A, couple2, K1, optimize=True)
    Y = np.einsum("j,jn,mj,jncd->mncd", g2.theta_weights, B, couple1, K2, optimize=True)
    c = s.dim / (4 * np.pi) * 2 * np.pi
    rho = c * c * np.einsum("mnab,mncd->acbd", X, Y, optimize=True)
    return rho.reshape(s.dim**2, s.dim**2)


def semiclassical_purity(w: WignerField) -> float:
    """``(2S+1)/(4 pi) * integral W^2`` of a one-site field."""
    if w.n_sites != 1:
        raise DomainError("semiclassical purity needs a one-site field")
    return float(w.integrate(w.values**2).real)


def semiclassical_negativity_full(w_pair: WignerField, s=None) -> float:
    """Raw negativity of the operator reconstructed from a pair symbol."""
    s = SpinSize.of(s) if s is not None else w_pair.spin
    rho = hermitize(reconstruct_operator(w_pair))
    rho = rho / np.trace(rho).real
    return float(negativity(rho, s, raw=True))


def _refine_phi(values, axis, n_new):
    # symbols are band-limited in phi, so zero-padding the modes resamples exactly
    n = values.shape[axis]
    if n_new == n:
        return values
    F = np.fft.fft(values, axis=axis)
    M = _mode_numbers(n)
    shape = list(values.shape)
    shape[axis] = n_new
    G = np.zeros(shape, complex)
    idx = [slice(None)] * values.ndim
    for col, mm in enumerate(M):
        if abs(mm) >= n_new / 2 or (n % 2 == 0 and abs(mm) == n // 2):
            continue
        src = list(idx)
        src[axis] = col
        dst = list(idx)
        dst[axis] = mm % n_new
        G[tuple(dst)] = F[tuple(src)]
    return (np.fft.ifft(G, axis=axis) * (n_new / n)).real


def transposed_symbol(w_pair: WignerField, phi_oversample: int = 1) -> WignerField:
    """Symbol of the partial transpose on the first site.

    The tensor operators are real, so ``w(theta, phi)^T = w(theta, -phi)`` and
    transposing site 1 reflects its azimuth.
    """
    g1, g2 = w_pair.grids
    v = w_pair.values
    if phi_oversample > 1:
        n1, n2 = g1.n_phi * phi_oversample, g2.n_phi * phi_oversample
        v = _refine_phi(_refine_phi(v, 1, n1), 3, n2)
        g1, g2 = SphereGrid(g1.n_theta, n1), SphereGrid(g2.n_theta, n2)
    reflect = (-np.arange(g1.n_phi)) % g1.n_phi
    return WignerField((g1, g2), v[:, reflect], w_pair.spin)


def semiclassical_negativity_approx(x, s=None, grid: SphereGrid | None = None, phi_oversample: int = 4) -> float:
    """``((2S+1)/(4 pi))^2 * integral |W^{T_1}| - 1`` for a pair field or a density matrix.

    A density matrix is first mapped to its symbol on ``grid`` (default: four
    times the exactness bound in each direction).
    """
    if isinstance(x, WignerField):
        if x.n_sites != 2:
            raise DomainError("approximate negativity needs a pair field")
        wt = transposed_symbol(x, phi_oversample)
    else:
        rho = np.asarray(x)
        s = SpinSize.of(s) if s is not None else SpinSize(int(round(np.sqrt(rho.shape[0]))) - 1)
        grid = grid or SphereGrid(4 * s.dim, 8 * s.dim)
        wt = transposed_symbol(wigner_of_pair_operator(rho, grid, grid, s), 1)
    return float(wt.integrate(np.abs(wt.values)).real - 1)


def semiclassical_concurrence(chain: ChainSpec, j: int, times, grid=None, drift="leading") -> np.ndarray:
    s = chain.spin
    out = []
    for t in np.atleast_1d(times):
        p = semiclassical_purity(evolved_single_wigner(chain, j, float(t), grid, drift))
        out.append(s.dim / s.two_s * (1 - p))
    return np.array(out)


DEFAULT_MAX_PAIR_NODES = 4_000_000


def semiclassical_negativity(chain: ChainSpec, j: int, times, method="full", drift="leading",
                             max_pair_nodes=DEFAULT_MAX_PAIR_NODES) -> np.ndarray:
    """Raw semiclassical negativity of the pair ``(j, j+1)`` along ``times``.

    ``method="full"`` reconstructs the pair operator; ``"approx"`` integrates
    the modulus of the partially transposed symbol and needs the full pair
    field, whose node count is capped by ``max_pair_nodes``.
    """
    if method not in ("full", "approx"):
        raise DomainError(f"method must be 'full' or 'approx', got {method!r}")
    s = chain.spin
    out = []
    for t in np.atleast_1d(times):
        t = float(t)
        if method == "full":
            rho = hermitize(evolved_pair_operator(chain, j, t, drift=drift))
            out.append(float(negativity(rho / np.trace(rho).real, s, raw=True)))
            continue
        g = pair_grid(s, t, drift)
        nodes = (g.n_theta * g.n_phi * 4) ** 2
        if nodes > max_pair_nodes:
            raise ResourceCapError(
                f"pair field at t={t:g} needs {nodes} nodes (cap {max_pair_nodes})"
            )
        out.append(semiclassical_negativity_approx(evolved_pair_wigner(chain, j, t, drift=drift)))
    return np.array(out)
