"""Spin operators, Wigner d-functions, Clebsch-Gordan coefficients,
irreducible tensor operators and spherical harmonics.

Every matrix in the package uses the S_z eigenbasis ordered by descending
magnetic number, ``m = S, S-1, ..., -S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import sph_harm_y

from ._validation import DomainError, check_half_integer


@dataclass(frozen=True)
class SpinSize:
    """Spin quantum number stored as ``two_s = 2S`` so half-integers stay exact."""

    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, (int, np.integer)) or isinstance(self.two_s, bool):
            raise DomainError(f"two_s must be an integer, got {self.two_s!r}")
        if self.two_s < 1:
            raise DomainError(f"two_s must be >= 1, got {self.two_s}")
        object.__setattr__(self, "two_s", int(self.two_s))

    @classmethod
    def of(cls, s) -> "SpinSize":
        """Coerce ``s`` (a SpinSize, or a number such as 0.5, 3, 7/2) to a SpinSize."""
        if isinstance(s, SpinSize):
            return s
        return cls(check_half_integer(s, "spin"))

    @property
    def S(self) -> float:
        return self.two_s / 2

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def eps(self) -> float:
        """Semiclassical parameter 1 / (2S + 1)."""
        return 1.0 / self.dim

    @property
    def is_integer(self) -> bool:
        return self.two_s % 2 == 0

    @property
    def m(self) -> np.ndarray:
        """Magnetic numbers in basis order (descending)."""
        return (self.two_s - 2 * np.arange(self.dim)) / 2

    def index(self, m) -> int:
        """Basis index of magnetic number ``m``."""
        two_m = check_half_integer(m, "m")
        if abs(two_m) > self.two_s or (self.two_s - two_m) % 2:
            raise DomainError(f"m={m} is not a valid projection for S={self.S}")
        return (self.two_s - two_m) // 2

    def __str__(self):
        return str(self.two_s // 2) if self.is_integer else f"{self.two_s}/2"


def spin_operators(s):
    """Return ``(S_x, S_y, S_z)`` as dense complex matrices."""
    s = SpinSize.of(s)
    m = s.m
    S = s.S
    # <m+1|S_+|m> sits just above the diagonal in descending order
    up = np.sqrt(S * (S + 1) - m[1:] * (m[1:] + 1))
    s_plus = np.diag(up, 1).astype(complex)
    s_minus = s_plus.T.copy()
    sx = 0.5 * (s_plus + s_minus)
    sy = -0.5j * (s_plus - s_minus)
    sz = np.diag(m).astype(complex)
    return sx, sy, sz


@lru_cache(maxsize=64)
def _sy_eig(two_s):
    _, sy, _ = spin_operators(SpinSize(two_s))
    w, v = np.linalg.eigh(sy)
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def wigner_d_matrix(s, beta):
    """Matrix ``d[n, k] = <n| exp(-i beta S_y) |k>``; ``beta`` may be an array.

    The result has shape ``beta.shape + (2S+1, 2S+1)`` and is real.
    """
    s = SpinSize.of(s)
    w, v = _sy_eig(s.two_s)
    beta = np.asarray(beta, dtype=float)
    phases = np.exp(-1j * beta[..., None] * w)
    d = np.einsum("ij,...j,kj->...ik", v, phases, v.conj())
    return d.real


def wigner_d(s, n, k, beta):
    """Single element ``d^S_{nk}(beta)`` of the y-rotation."""
    s = SpinSize.of(s)
    try:
        a, b = s.index(n), s.index(k)
    except DomainError as exc:
        raise DomainError(f"wigner_d: {exc}") from None
    return float(wigner_d_matrix(s, beta)[a, b])


@lru_cache(maxsize=None)
def _cg_doubled(j1, m1, j2, m2, J, M):
    # Racah formula in exact rational arithmetic; arguments are doubled values
    if m1 + m2 != M or abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return 0.0
    if not abs(j1 - j2) <= J <= j1 + j2 or (j1 + j2 + J) % 2:
        return 0.0
    if (j1 - m1) % 2 or (j2 - m2) % 2 or (J - M) % 2:
        return 0.0

    def fact(x):
        return factorial(x // 2)

    pref = Fraction(
        (J + 1) * fact(j1 + j2 - J) * fact(j1 - j2 + J) * fact(-j1 + j2 + J),
        fact(j1 + j2 + J + 2),
    )
    pref *= fact(J + M) * fact(J - M) * fact(j1 - m1) * fact(j1 + m1) * fact(j2 - m2) * fact(j2 + m2)
    total = Fraction(0)
    for k in range(0, j1 + j2 - J + 1, 2):
        args = (k, j1 + j2 - J - k, j1 - m1 - k, j2 + m2 - k, J - j2 + m1 + k, J - j1 - m2 + k)
        if min(args) < 0:
            continue
        den = 1
        for x in args:
            den *= fact(x)
        total += Fraction(-1 if (k // 2) % 2 else 1, den)
    if total == 0:
        return 0.0
    sign = 1.0 if total > 0 else -1.0
    return sign * float(pref * total * total) ** 0.5


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """Condon-Shortley coefficient ``<j1 m1; j2 m2 | J M>``."""
    args = [check_half_integer(x) for x in (j1, m1, j2, m2, J, M)]
    return _cg_doubled(*args)


@lru_cache(maxsize=32)
def _tensor_table(two_s):
    s = SpinSize(two_s)
    d = s.dim
    two_m = two_s - 2 * np.arange(d)
    table = {}
    for L in range(two_s + 1):
        norm = np.sqrt((2 * L + 1) / d)
        for M in range(-L, L + 1):
            T = np.zeros((d, d))
            for b in range(d):
                a = b - M  # row index of m_b + M in descending order
                if 0 <= a < d:
                    T[a, b] = norm * _cg_doubled(two_s, int(two_m[b]), 2 * L, 2 * M, two_s, int(two_m[a]))
            T.setflags(write=False)
            table[L, M] = T
    return table


def tensor_operator(s, L, M):
    """Irreducible tensor operator ``T_LM`` (real matrix, Tr T T^dagger = 1)."""
    s = SpinSize.of(s)
    if not (isinstance(L, (int, np.integer)) and isinstance(M, (int, np.integer))):
        raise DomainError("L and M must be integers")
    if not 0 <= L <= s.two_s or abs(M) > L:
        raise DomainError(f"invalid (L, M) = ({L}, {M}) for S={s}")
    return _tensor_table(s.two_s)[int(L), int(M)]


def tensor_operators(s):
    """All ``T_LM`` for ``0 <= L <= 2S`` as a read-only ``{(L, M): matrix}`` mapping."""
    s = SpinSize.of(s)
    return dict(_tensor_table(s.two_s))


def spherical_harmonic(L, M, theta, phi):
    """Orthonormal ``Y_LM(theta, phi)`` with the Condon-Shortley phase."""
    if abs(M) > L:
        raise DomainError(f"|M| > L for (L, M) = ({L}, {M})")
    return sph_harm_y(L, M, np.asarray(theta, float), np.asarray(phi, float))
