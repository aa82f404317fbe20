"""Pseudohyperbolic and hyperbolic geometry of the unit disc.

All distance functions accept Python scalars or numpy arrays and broadcast.
The hyperbolic distance follows the normalisation

    beta(z, w) = log((1 + rho) / (1 - rho)) = 2 * atanh(rho)

while curve lengths use the density ``|dz| / (1 - |z|^2)``, so a geodesic
segment has length ``beta / 2``.  Neither convention is rescaled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Points with modulus at or above this are rejected.
BOUNDARY_GUARD = 1.0 - 1e-15


class DiscPoint(complex):
    """A complex number strictly inside the unit disc."""

    def __new__(cls, value=0.0, imag=None):
        z = complex(value) if imag is None else complex(value, imag)
        if not np.isfinite(z.real) or not np.isfinite(z.imag):
            raise ValueError(f"non-finite disc point {z!r}")
        if abs(z) >= BOUNDARY_GUARD:
            raise ValueError(f"point {z!r} is not strictly inside the unit disc")
        return super().__new__(cls, z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self)

    def __repr__(self):
        return f"DiscPoint({complex(self)!r})"


def check_inside(z, name: str = "z"):
    """Validate that every entry of ``z`` lies strictly inside the disc.

    Returns ``z`` as a complex scalar or complex ndarray.
    """
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if arr.size and np.max(np.abs(arr)) >= BOUNDARY_GUARD:
        raise ValueError(f"{name} has points on or outside the unit circle")
    return complex(arr) if arr.ndim == 0 else arr


def one_minus_abs2(z):
    """Compute 1 - |z|^2 without cancellation in the factor 1 - |z|."""
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def _bracket(z, a):
    return (a - z) / (1.0 - np.conj(a) * z)


def mobius_bracket(z, a):
    """Complex pseudohyperbolic distance ``[z, a] = (a - z) / (1 - conj(a) z)``.

    For fixed ``a`` this is a disc automorphism in ``z`` which swaps ``z`` and
    ``a`` with 0.
    """
    z = check_inside(z, "z")
    a = check_inside(a, "a")
    return _bracket(z, a)


def _pseudo_parts(z, w):
    # rho and 1 - rho^2 computed separately so that beta stays accurate
    # close to the boundary.
    den = np.abs(1.0 - np.conj(w) * z)
    rho = np.abs(w - z) / den
    one_minus_rho2 = one_minus_abs2(z) * one_minus_abs2(w) / den**2
    return rho, one_minus_rho2


def pseudo_dist(z, w):
    """Pseudohyperbolic distance ``rho(z, w) = |[z, w]|``, in [0, 1)."""
    z = check_inside(z, "z")
    w = check_inside(w, "w")
    rho = np.abs(_bracket(z, w))
    return float(rho) if np.ndim(rho) == 0 else rho


def _hyp_dist(z, w):
    rho, one_minus_rho2 = _pseudo_parts(z, w)
    # atanh is exact near 0; the factored 1 - rho^2 avoids cancellation near 1
    with np.errstate(divide="ignore"):
        far = 2.0 * np.log1p(rho) - np.log(one_minus_rho2)
    near = 2.0 * np.arctanh(np.minimum(rho, 0.5))
    return np.maximum(np.where(rho < 0.5, near, far), 0.0)


def hyp_dist(z, w):
    """Hyperbolic distance ``log((1 + rho) / (1 - rho))``."""
    z = check_inside(z, "z")
    w = check_inside(w, "w")
    beta = _hyp_dist(z, w)
    return float(beta) if np.ndim(beta) == 0 else beta


def rho_from_beta(beta):
    """Invert ``beta = 2 atanh(rho)``."""
    return np.tanh(np.asarray(beta) / 2.0)


def pairwise_hyp_dist(points) -> np.ndarray:
    """Full symmetric matrix of hyperbolic distances."""
    z = np.asarray(check_inside(points, "points"), dtype=complex).ravel()
    return _hyp_dist(z[:, None], z[None, :])


@dataclass(frozen=True)
class HyperbolicPath:
    """Polyline approximation of a curve in the disc."""

    samples: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.samples, dtype=complex)).ravel()
        if z.size < 2:
            raise ValueError("a path needs at least 2 samples")
        check_inside(z, "samples")
        if np.any(z[1:] == z[:-1]):
            raise ValueError("consecutive path samples must be distinct")
        object.__setattr__(self, "samples", z)


def hyp_length(path: HyperbolicPath) -> float:
    """Length of ``path`` for the density ``|dz| / (1 - |z|^2)``.

    Each segment contributes its Euclidean length times the density at the
    segment midpoint.
    """
    z = path.samples
    mid = 0.5 * (z[1:] + z[:-1])
    return float(np.sum(np.abs(np.diff(z)) / one_minus_abs2(mid)))


def geodesic_path(z, w, n: int = 1000) -> HyperbolicPath:
    """Sample the hyperbolic geodesic from ``z`` to ``w`` at ``n`` points."""
    z = complex(check_inside(z, "z"))
    w = complex(check_inside(w, "w"))
    if z == w:
        raise ValueError("geodesic endpoints coincide")
    # [., z] is an involution sending z to 0; the geodesic from 0 is radial.
    c = _bracket(w, z)
    t = np.linspace(0.0, 1.0, n)
    radial = np.tanh(t * np.arctanh(abs(c))) * (c / abs(c))
    return HyperbolicPath(_bracket(radial, z))


def hyperbolic_lattice(spacing: float, radius: float, center=0.0) -> np.ndarray:
    """Points of concentric hyperbolic circles about ``center``.

    Rings sit at hyperbolic radii 0, spacing, 2*spacing, ... up to and
    including ``radius``; each ring carries enough points that neighbours are
    at most ``spacing`` apart along the ring (ring length is 2*pi*sinh(t) in
    the beta metric).
    """
    if spacing <= 0 or radius < 0:
        raise ValueError("spacing must be positive and radius non-negative")
    n_rings = int(np.floor(radius / spacing + 1e-9))
    radii = list(spacing * np.arange(1, n_rings + 1))
    if not radii or radius - radii[-1] > 1e-9 * max(radius, 1.0):
        if radius > 0:
            radii.append(radius)
    pts = [np.zeros(1, dtype=complex)]
    for t in radii:
        count = max(int(np.ceil(2.0 * np.pi * np.sinh(t) / spacing)), 3)
        theta = 2.0 * np.pi * np.arange(count) / count
        pts.append(np.tanh(t / 2.0) * np.exp(1j * theta))
    lattice = np.concatenate(pts)
    center = complex(check_inside(center, "center"))
    if center != 0:
        lattice = _bracket(lattice, center)
    return lattice
