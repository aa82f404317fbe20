"""Finite Blaschke products, hyperbolic derivatives and outer functions.

An "evaluable self-map" throughout the package is any callable taking a
complex scalar or ndarray and returning values in the closed unit disc.  If
it also provides a ``derivative`` method that is used; otherwise derivatives
come from a Cauchy integral on a small circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateBoundaryError, InvalidBoundaryData
from .hyperbolic import check_inside, one_minus_abs2


@dataclass(frozen=True)
class ScaledBlaschke:
    """``rotation * scale * prod_j b_j(z)`` with normalised Blaschke factors.

    A factor with zero ``a != 0`` is ``(|a|/a) (a - z) / (1 - conj(a) z)``; a
    zero at the origin contributes the plain factor ``z``.
    """

    rotation: complex = 1.0
    scale: complex = 1.0
    zeros: tuple = ()

    def __post_init__(self):
        rotation = complex(self.rotation)
        if abs(abs(rotation) - 1.0) > 1e-14:
            raise ValueError(f"rotation {rotation!r} is not unimodular")
        scale = complex(self.scale)
        if abs(scale) > 1.0 + 1e-15:
            raise ValueError(f"scale {scale!r} exceeds 1 in modulus")
        zeros = tuple(complex(a) for a in np.atleast_1d(np.asarray(self.zeros, dtype=complex)))
        if zeros:
            check_inside(np.array(zeros), "zeros")
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "zeros", zeros)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def constant(self) -> complex:
        return self.rotation * self.scale

    def _factors(self, z):
        out = []
        for a in self.zeros:
            if a == 0:
                out.append(z + 0j)
            else:
                out.append((abs(a) / a) * (a - z) / (1.0 - np.conj(a) * z))
        return out

    def _factor_derivs(self, z):
        out = []
        for a in self.zeros:
            if a == 0:
                out.append(np.ones_like(z, dtype=complex))
            else:
                out.append((abs(a) / a) * (abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * z) ** 2)
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        val = np.full(z.shape, self.constant, dtype=complex)
        for b in self._factors(z):
            val = val * b
        return val[()] if val.ndim == 0 else val

    def derivative(self, z):
        """Closed-form derivative by the product rule over factors."""
        z = np.asarray(z, dtype=complex)
        factors = self._factors(z)
        derivs = self._factor_derivs(z)
        total = np.zeros(z.shape, dtype=complex)
        for j, d in enumerate(derivs):
            term = d
            for i, b in enumerate(factors):
                if i != j:
                    term = term * b
            total = total + term
        total = self.constant * total
        return total[()] if total.ndim == 0 else total


def automorphism(a, rotation=1.0) -> ScaledBlaschke:
    """Degree-one Blaschke product vanishing at ``a``."""
    return ScaledBlaschke(rotation=rotation, scale=1.0, zeros=(complex(a),))


def blaschke_eval(f: ScaledBlaschke, z):
    """Evaluate ``f`` at interior point(s) ``z``."""
    return f(check_inside(z))


def blaschke_deriv(f: ScaledBlaschke, z):
    return f.derivative(check_inside(z))


def numeric_derivative(f: Callable, z, nodes: int = 32):
    """Derivative of an analytic ``f`` by the trapezoid rule on a Cauchy circle.

    The circle radius shrinks with the distance to the boundary so that it
    stays inside the disc.
    """
    z = np.asarray(z, dtype=complex)
    r = np.minimum(1e-2, 0.25 * (1.0 - np.abs(z)))
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    u = np.exp(1j * theta)
    zz = z[..., None] + r[..., None] * u
    vals = np.asarray(f(zz), dtype=complex)
    d = np.mean(vals * np.conj(u), axis=-1) / r
    return d[()] if d.ndim == 0 else d


def derivative(f: Callable, z):
    """``f'(z)``, using ``f.derivative`` when available."""
    if hasattr(f, "derivative"):
        return f.derivative(z)
    return numeric_derivative(f, z)


def hyp_deriv(f: Callable, z, tol: float = 1e-14):
    """Hyperbolic derivative ``(1 - |z|^2) f'(z) / (1 - |f(z)|^2)``.

    Raises DegenerateBoundaryError when ``|f(z)|`` is within ``tol`` of 1.
    """
    z = check_inside(z)
    fz = np.asarray(f(z), dtype=complex)
    den = one_minus_abs2(fz)
    if np.any(den <= tol):
        raise DegenerateBoundaryError("|f(z)| reaches 1; hyperbolic derivative undefined")
    out = one_minus_abs2(z) * np.asarray(derivative(f, z)) / den
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class BoundaryModulus:
    """Positive boundary weight ``w(theta)`` sampled on a uniform grid.

    Samples below ``floor`` are clipped up to it before taking logs; negative
    or non-finite samples are rejected.
    """

    sampler: Callable
    node_count: int = 4096
    floor: float = 1e-12

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be positive")

    @cached_property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.node_count) / self.node_count

    @cached_property
    def samples(self) -> np.ndarray:
        try:
            w = np.asarray(self.sampler(self.theta), dtype=float)
            if w.shape != self.theta.shape:
                raise ValueError
        except (TypeError, ValueError):
            w = np.array([float(self.sampler(t)) for t in self.theta])
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidBoundaryData("boundary weight must be finite and non-negative")
        return w

    @cached_property
    def clipped_count(self) -> int:
        return int(np.count_nonzero(self.samples < self.floor))

    @cached_property
    def log_samples(self) -> np.ndarray:
        w = np.maximum(self.samples, self.floor)
        if np.any(w <= 0):
            raise InvalidBoundaryData("boundary weight is not positive after clipping")
        return np.log(w)

    @classmethod
    def from_self_map(cls, f: Callable, node_count: int = 4096, floor: float = 1e-12):
        """Weight ``1 - |f(e^{i theta})|`` for a map continuous up to the circle."""
        return cls(lambda t: 1.0 - np.abs(f(np.exp(1j * np.asarray(t)))), node_count, floor)


def outer_eval(m: BoundaryModulus, z, margin: float = 1e-2, chunk: int = 512):
    """Outer function with boundary modulus ``m`` via the Herglotz integral.

    Composite trapezoid rule on the uniform grid of ``m``.  Points with
    ``|z| > 1 - margin`` are refused since the kernel is under-resolved there.
    """
    z = np.asarray(check_inside(z), dtype=complex)
    if z.size and np.max(np.abs(z)) > 1.0 - margin:
        raise ValueError(f"|z| exceeds 1 - margin = {1.0 - margin}")
    u = np.exp(1j * m.theta)
    logw = m.log_samples
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for s in range(0, flat.size, chunk):
        zz = flat[s : s + chunk, None]
        kernel = (u + zz) / (u - zz)
        out[s : s + chunk] = np.exp(np.mean(kernel * logw, axis=-1))
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class OuterFunction:
    """Callable outer function backed by a BoundaryModulus."""

    boundary: BoundaryModulus
    margin: float = 1e-2

    def __call__(self, z):
        return outer_eval(self.boundary, z, self.margin)


def make_test_family(seed: int, count: int, max_degree: int, beta_radius: float = 3.0,
                     scale_range: Sequence[float] = (0.3, 1.0)) -> list[ScaledBlaschke]:
    """Deterministic family of random scaled Blaschke products.

    Degrees are uniform on ``0..max_degree``; zeros are uniform for hyperbolic
    area in the disc of beta-radius ``beta_radius`` about 0; scale moduli are
    uniform on ``scale_range`` and all phases uniform.
    """
    if count < 1 or max_degree < 0:
        raise ValueError("count must be >= 1 and max_degree >= 0")
    rng = np.random.default_rng(seed)
    family = []
    cosh_r = math.cosh(beta_radius)
    for _ in range(count):
        degree = int(rng.integers(0, max_degree + 1))
        # hyperbolic area element is proportional to sinh(t) dt dphi
        t = np.arccosh(1.0 + rng.random(degree) * (cosh_r - 1.0))
        zeros = np.tanh(t / 2.0) * np.exp(2j * np.pi * rng.random(degree))
        scale = rng.uniform(*scale_range) * np.exp(2j * np.pi * rng.random())
        rotation = np.exp(2j * np.pi * rng.random())
        family.append(ScaledBlaschke(rotation, scale, tuple(zeros)))
    return family
