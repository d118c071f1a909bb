"""Purity, I-concurrence, partial transpose, trace norm and negativity.

The scalar functions also accept stacks of matrices (leading axes), which the
series drivers use to evaluate a whole time grid at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ._validation import DomainError, check_finite, check_square, hermitize
from .evolution import ChainSpec, TimeGrid, reduced_rho_one, reduced_rho_pair
from .spin_algebra import SpinSize

KINDS = ("i_concurrence", "negativity", "purity")


@dataclass(frozen=True, eq=False)
class MeasureSeries:
    times: np.ndarray
    values: np.ndarray
    kind: str
    target: Union[int, tuple]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown measure kind {self.kind!r}")
        if np.shape(self.times) != np.shape(self.values):
            raise DomainError("times and values differ in length")
        check_finite(self.values, "values")

    def __len__(self):
        return len(self.times)


def purity(rho):
    rho = check_square(rho, "rho")
    return np.einsum("...ij,...ji->...", rho, rho).real


def i_concurrence(rho_j, s):
    """``(2S+1)/(2S) * (1 - Tr rho_j^2)``; 0 for pure states, 1 when maximally mixed.

    Rounding below zero is clipped.
    """
    s = SpinSize.of(s)
    rho_j = check_square(rho_j, "rho_j", s.dim)
    return np.maximum(s.dim / s.two_s * (1 - purity(rho_j)), 0.0)


def partial_transpose(rho_pair, which="first", s=None):
    """Transpose one tensor factor of a two-spin operator in the product S_z basis."""
    rho_pair = check_square(rho_pair, "rho_pair")
    d = int(round(np.sqrt(rho_pair.shape[-1])))
    if s is not None and SpinSize.of(s).dim != d or d * d != rho_pair.shape[-1]:
        raise DomainError(f"dimension {rho_pair.shape[-1]} is not (2S+1)^2")
    lead = rho_pair.shape[:-2]
    r = rho_pair.reshape(lead + (d, d, d, d))
    if which == "first":
        r = np.swapaxes(r, -4, -2)
    elif which == "second":
        r = np.swapaxes(r, -3, -1)
    else:
        raise DomainError(f"which must be 'first' or 'second', got {which!r}")
    return r.reshape(lead + (d * d, d * d))


def _centro_blocks(a):
    # A = J A J with J the exchange matrix splits into symmetric and
    # antisymmetric blocks of half size, built from index pairs (i, n-1-i)
    n = a.shape[-1]
    k = n // 2
    top = a[..., :k, :k]
    flip = a[..., :k, ::-1][..., :k]
    sym = top + flip
    if n % 2:
        col = np.sqrt(2) * a[..., :k, k:k + 1]
        sym = np.concatenate([
            np.concatenate([sym, col], axis=-1),
            np.concatenate([np.conj(np.swapaxes(col, -1, -2)), a[..., k:k + 1, k:k + 1]], axis=-1),
        ], axis=-2)
    return sym, top - flip


def trace_norm(m):
    """Sum of absolute eigenvalues of the Hermitized input.

    Centrosymmetric inputs (invariant under reversing the basis order, as the
    partial transposes of x-symmetric chains are) are split into two blocks.
    """
    m = hermitize(check_finite(check_square(m, "m"), "m"))
    n = m.shape[-1]
    scale = max(1.0, np.abs(m).max(initial=0.0))
    if n >= 8 and np.abs(m - m[..., ::-1, ::-1]).max() <= 1e-13 * scale:
        return sum(np.abs(np.linalg.eigvalsh(b)).sum(axis=-1) for b in _centro_blocks(m))
    return np.abs(np.linalg.eigvalsh(m)).sum(axis=-1)


def negativity(rho_pair, s, raw=False):
    """``(2S+1)/(2S) * (||rho^{T_1}||_1 - 1)``; ``raw=True`` drops the prefactor."""
    s = SpinSize.of(s)
    pt = partial_transpose(check_square(rho_pair, "rho_pair", s.dim**2), "first", s)
    value = np.maximum(trace_norm(pt) - 1, 0.0)
    return value if raw else s.dim / s.two_s * value


def _parse_target(kind, target, n_sites):
    if kind == "negativity":
        if not (isinstance(target, tuple) and len(target) == 2):
            raise DomainError(f"negativity needs a site pair, got {target!r}")
        j, j2 = sorted(target)
        return (j, j2)
    if not isinstance(target, (int, np.integer)):
        raise DomainError(f"{kind} needs a single site, got {target!r}")
    return int(target)


def measure_values(chain: ChainSpec, times, kind: str, target, raw=False) -> np.ndarray:
    """Exact values of a measure at each time."""
    times = np.atleast_1d(np.asarray(times, float))
    target = _parse_target(kind, target, chain.n_sites)
    if kind == "negativity":
        rho = reduced_rho_pair(chain, target[0], target[1], times)
        return negativity(rho, chain.spin, raw=raw)
    rho = reduced_rho_one(chain, target, times)
    if kind == "purity":
        return purity(rho)
    return i_concurrence(rho, chain.spin)


def measure_series(chain: ChainSpec, grid: TimeGrid, kind: str, target, raw=False) -> MeasureSeries:
    if kind not in KINDS:
        raise DomainError(f"unknown measure kind {kind!r}")
    t = grid.times
    values = measure_values(chain, t, kind, target, raw=raw)
    return MeasureSeries(t, np.asarray(values, float), kind, _parse_target(kind, target, chain.n_sites))
