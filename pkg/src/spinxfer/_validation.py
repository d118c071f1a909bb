"""Input validation helpers shared by every module."""

from __future__ import annotations

import numbers

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceCapError(RuntimeError):
    """A requested computation exceeds a configured size cap."""


class ResolutionError(ValueError):
    """A quadrature grid is too coarse for exact integration at this spin."""


def check_half_integer(value, name="value"):
    """Return ``2 * value`` as an int, raising if ``value`` is not a half-integer."""
    if isinstance(value, bool):
        raise DomainError(f"{name} must be numeric, got bool")
    doubled = 2 * value
    rounded = int(round(float(doubled)))
    if abs(float(doubled) - rounded) > 1e-9:
        raise DomainError(f"{name}={value!r} is not an integer or half-integer")
    return rounded


def check_square(matrix, name="matrix", dim=None):
    a = np.asarray(matrix)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DomainError(f"{name} must be square, got shape {a.shape}")
    if dim is not None and a.shape[-1] != dim:
        raise DomainError(f"{name} has dimension {a.shape[-1]}, expected {dim}")
    return a


def check_finite(a, name="array"):
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} contains non-finite entries")
    return a


def hermitize(a):
    a = np.asarray(a)
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def check_density_matrix(rho, dim=None, atol=1e-10, name="rho"):
    """Validate Hermiticity, unit trace and positivity within ``atol``."""
    rho = check_finite(check_square(rho, name, dim), name)
    if not np.allclose(rho, np.conj(rho.T), atol=atol, rtol=0):
        raise DomainError(f"{name} is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise DomainError(f"{name} does not have unit trace")
    if np.linalg.eigvalsh(hermitize(rho)).min() < -atol:
        raise DomainError(f"{name} has negative eigenvalues")
    return rho


def check_site(j, n_sites, name="site"):
    """Sites are 1-based, ``1 <= j <= n_sites``."""
    if not isinstance(j, numbers.Integral) or isinstance(j, bool):
        raise DomainError(f"{name} must be an integer, got {j!r}")
    if not 1 <= j <= n_sites:
        raise DomainError(f"{name}={j} outside 1..{n_sites}")
    return int(j)


def check_times(t):
    """Return ``t`` as a float array plus a flag telling whether it was scalar."""
    arr = np.asarray(t, dtype=float)
    check_finite(arr, "t")
    return np.atleast_1d(arr), arr.ndim == 0
