"""Verifiable pieces of the multi-sequence interpolation construction.

Given an interpolant ``f1`` on a separated subsequence ``Z1`` (zeros of the
Blaschke product ``B1``) and the outer function ``E1`` with boundary modulus
``1 - |f1|``, the remaining nodes are handled through auxiliary values

    w~ = (f1(z) - w) / (B1(z) E1(z))

and any ``f~`` interpolating them yields ``f = f1 - B1 E1 f~``.  The
necessity side is exercised by :func:`necessity_stress`, which builds data
that are compatible on every ``n``-subset of a tight cluster of ``n + 1``
points but not on the whole cluster.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .blaschke import BoundaryModulus, OuterFunction, ScaledBlaschke
from .errors import PoleError
from .hyperbolic import _bracket, _hyp_dist, check_inside, hyperbolic_lattice
from .quotients import _as_nodes

POLE_TOL = 1e-9


@dataclass(frozen=True)
class AssemblyInputs:
    f1: Callable
    B1: ScaledBlaschke
    E1: Callable
    f_tilde: Callable = lambda z: np.zeros_like(np.asarray(z, dtype=complex))

    @property
    def Z1(self) -> np.ndarray:
        return np.asarray(self.B1.zeros, dtype=complex)


def outer_for(f1: Callable, node_count: int = 4096, margin: float = 1e-2) -> OuterFunction:
    """Outer function with boundary modulus ``1 - |f1(e^{i theta})|``."""
    return OuterFunction(BoundaryModulus.from_self_map(f1, node_count), margin)


def nearest_pairing(nodes, Z1) -> np.ndarray:
    """Index of the hyperbolically nearest point of ``Z1`` (lowest index on ties)."""
    z = np.atleast_1d(np.asarray(nodes, dtype=complex))
    d = _hyp_dist(z[:, None], np.asarray(Z1, dtype=complex)[None, :])
    return np.argmin(d, axis=1)


@dataclass(frozen=True)
class AuxiliaryValues:
    w_tilde: np.ndarray
    h_part: np.ndarray
    t_part: np.ndarray
    pairing: np.ndarray

    @property
    def split_residual(self) -> float:
        return float(np.max(np.abs(self.w_tilde - 0.5 * (self.h_part + self.t_part)), initial=0.0))


def auxiliary_values(inputs: AssemblyInputs, nodes, values, pairing=None,
                     z1_values=None) -> AuxiliaryValues:
    """Auxiliary data for the nodes outside ``Z1``, with its two-part split.

    ``h_part = 2 (f1(z) - f1(z1)) / (B1 E1)`` and ``t_part = 2 (w1 - w) / (B1 E1)``
    use the paired point ``z1`` of ``Z1`` and its value ``w1`` (by default
    ``f1(z1)``, which is what ``f1`` interpolates).
    """
    z = np.atleast_1d(np.asarray(check_inside(np.asarray(nodes, dtype=complex), "nodes"), dtype=complex))
    w = np.atleast_1d(np.asarray(values, dtype=complex))
    if w.shape != z.shape:
        raise ValueError("nodes and values differ in length")
    Z1 = inputs.Z1
    if Z1.size:
        gap = np.min(_hyp_dist(z[:, None], Z1[None, :]), axis=1)
        if np.any(gap < POLE_TOL):
            raise PoleError(f"node {int(np.argmin(gap))} sits on a zero of B1")
    pairing = nearest_pairing(z, Z1) if pairing is None else np.asarray(pairing, dtype=int)
    w1 = np.asarray(inputs.f1(Z1), dtype=complex) if z1_values is None else np.asarray(z1_values, dtype=complex)
    divisor = np.asarray(inputs.B1(z), dtype=complex) * np.asarray(inputs.E1(z), dtype=complex)
    f1z = np.asarray(inputs.f1(z), dtype=complex)
    w_tilde = (f1z - w) / divisor
    if Z1.size:
        h_part = 2.0 * (f1z - np.asarray(inputs.f1(Z1[pairing]), dtype=complex)) / divisor
        t_part = 2.0 * (w1[pairing] - w) / divisor
    else:
        h_part = 2.0 * f1z / divisor
        t_part = -2.0 * w / divisor
    return AuxiliaryValues(w_tilde, h_part, t_part, pairing)


@dataclass(frozen=True)
class AssembledSolution:
    """``f = f1 - B1 E1 f~``."""

    inputs: AssemblyInputs

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        i = self.inputs
        b = np.asarray(i.B1(z), dtype=complex)
        out = np.asarray(i.f1(z), dtype=complex) - b * np.asarray(i.E1(z)) * np.asarray(i.f_tilde(z))
        # exact cancellation on the zero set of B1
        out = np.where(b == 0, np.asarray(i.f1(z), dtype=complex), out)
        return out[()] if out.ndim == 0 else out


def assemble_solution(inputs: AssemblyInputs) -> AssembledSolution:
    return AssembledSolution(inputs)


def grid_sup(f: Callable, radius_beta: float = 4.0, step_beta: float = 0.1) -> float:
    """Largest ``|f|`` on a hyperbolic lattice about the origin."""
    return float(np.max(np.abs(f(hyperbolic_lattice(step_beta, radius_beta)))))


@dataclass(frozen=True)
class F1Audit:
    prop1_constant: float
    prop2_constant: float
    excluded_prop1: int
    grid_points: int


def audit_f1_properties(f1: Callable, Z1: Sequence, eta1: float, eps: float,
                        grid_radius_beta: float = 3.0, grid_step_beta: float = 0.1,
                        local_step_beta: float | None = None, node_count: int = 4096,
                        E1: Callable | None = None) -> F1Audit:
    """Empirical constants for the lower bound on ``|E1|`` and the local Lipschitz bound.

    ``prop1_constant`` is the grid minimum of ``|E1(z)| / (1 - |f1(z)|)``
    (points with denominator below 1e-9 are skipped and counted);
    ``prop2_constant`` is the maximum of
    ``beta(f1(z), f1(z_i)) / (eps beta(z, z_i))`` over hyperbolic discs of
    radius ``eta1`` about each ``z_i``.
    """
    E1 = outer_for(f1, node_count) if E1 is None else E1
    grid = hyperbolic_lattice(grid_step_beta, grid_radius_beta)
    den = 1.0 - np.abs(np.asarray(f1(grid), dtype=complex))
    keep = den >= 1e-9
    prop1 = float(np.min(np.abs(np.asarray(E1(grid[keep]))) / den[keep])) if keep.any() else float("nan")

    Z1 = np.atleast_1d(np.asarray(Z1, dtype=complex))
    step = local_step_beta or eta1 / 10.0
    local = hyperbolic_lattice(step, eta1)[1:]
    prop2 = 0.0
    for zi in Z1:
        pts = _bracket(local, zi)
        fz = np.asarray(f1(pts), dtype=complex)
        ratio = _hyp_dist(fz, complex(f1(zi))) / (eps * _hyp_dist(pts, zi))
        prop2 = max(prop2, float(np.max(ratio)))
    return F1Audit(prop1, prop2, int(np.count_nonzero(~keep)), int(grid.size))


@dataclass(frozen=True)
class StressCase:
    """Values for a cluster of ``n + 1`` points.

    ``values`` follow the input order; ``order`` lists input indices in the
    relabelled order ``z_1, ..., z_{n+1}`` used to build them.
    """

    values: np.ndarray
    order: tuple
    x: complex
    eps: float
    C: float


def necessity_stress(cluster, eps: float, C: float) -> StressCase:
    """Data vanishing on ``n`` cluster points and equal to ``eps * x`` on the last.

    After relabelling, ``z_{n+1}`` is the point nearest to ``z_1`` (the first
    input point) and ``z_n`` is the point farthest from ``z_{n+1}``; then
    ``x = C * prod_{j < n} [z_{n+1}, z_j]``, which leaves out the largest
    factor.
    """
    z = _as_nodes(cluster)
    if z.size < 2:
        raise ValueError("cluster needs at least two points")
    if not 0 < C < 1:
        raise ValueError("C must lie in (0, 1)")
    n = z.size - 1
    rest = list(range(1, z.size))
    last = min(rest, key=lambda j: (_hyp_dist(z[0], z[j]), j))
    others = [j for j in range(z.size) if j != last]
    far = max(others, key=lambda j: (_hyp_dist(z[j], z[last]), -j))
    order = [j for j in others if j != far] + [far, last]
    x = complex(C)
    for j in order[: n - 1]:
        x *= _bracket(z[last], z[j])
    values = np.zeros(z.size, dtype=complex)
    values[last] = eps * x
    return StressCase(values, tuple(order), x, eps, C)
