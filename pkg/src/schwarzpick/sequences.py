"""Geometry of node sequences: separation, Carleson-square layers, density.

Layer ``m`` of a Carleson square ``Q`` is the half-open band

    2^{-m-1} l(Q) < 1 - |z| <= 2^{-m} l(Q)

inside ``Q``.  A sequence passes the density audit with exponent ``alpha``
when the worst layer count scaled by ``2^{-alpha m}`` does not grow with
``m`` over the audited layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hyperbolic import _hyp_dist, check_inside, hyperbolic_lattice

DEFAULT_ALPHA_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))


def _points(Z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(Z, dtype=complex)).ravel()
    if z.size:
        check_inside(z, "Z")
    return z


def separation_constant(Z) -> float:
    """Smallest pairwise hyperbolic distance."""
    z = _points(Z)
    if z.size < 2:
        raise ValueError("separation needs at least two points")
    d = _hyp_dist(z[:, None], z[None, :])
    iu = np.triu_indices(z.size, 1)
    return float(np.min(d[iu]))


def decompose_separated(Z, eta_target: float) -> tuple[list[list[int]], int]:
    """Greedy split of ``Z`` into parts with separation at least ``eta_target``.

    First-fit colouring over points sorted by decreasing ``1 - |z|``; the part
    count is an upper bound on the minimum.
    """
    z = _points(Z)
    if z.size == 0:
        return [], 0
    d = _hyp_dist(z[:, None], z[None, :])
    order = sorted(range(z.size), key=lambda i: (-(1.0 - abs(z[i])), i))
    parts: list[list[int]] = []
    for i in order:
        for part in parts:
            if np.all(d[i, part] >= eta_target):
                part.append(i)
                break
        else:
            parts.append([i])
    return [sorted(p) for p in parts], len(parts)


def clique_lower_bound(Z, eta_target: float) -> int:
    """Size of the largest hyperbolic ball of radius ``eta_target/2`` about a point.

    All points in such a ball are pairwise closer than ``eta_target``, so no
    two can share a part: this bounds the minimal part count from below.
    """
    z = _points(Z)
    if z.size == 0:
        return 0
    d = _hyp_dist(z[:, None], z[None, :])
    return int(np.max(np.sum(d < eta_target / 2.0, axis=1)))


@dataclass(frozen=True)
class CarlesonSquare:
    """``{r e^{i theta}: 0 < 1 - r < side, |theta - theta0| < side}``."""

    theta0: float
    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("side must be positive")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        depth = 1.0 - np.abs(z)
        dtheta = np.angle(z) - self.theta0
        # wrap into (-pi, pi]
        dtheta = np.pi - np.mod(np.pi - dtheta, 2.0 * np.pi)
        return (depth > 0) & (depth < self.side) & (np.abs(dtheta) < self.side)


def layer_index(z, side: float) -> np.ndarray:
    """Layer ``m`` with ``2^{-m-1} side < 1 - |z| <= 2^{-m} side`` (any integer)."""
    depth = 1.0 - np.abs(np.asarray(z, dtype=complex))
    m = np.floor(np.log2(side / depth)).astype(int)
    # correct floating log2 at exact band edges
    m = np.where(depth > side * 2.0 ** (-m), m - 1, m)
    m = np.where(depth <= side * 2.0 ** (-m - 1), m + 1, m)
    return m


def carleson_layer_counts(Z, Q: CarlesonSquare, m_max: int) -> list[int]:
    """Counts for layers ``m = 1..m_max``; entry ``m - 1`` holds layer ``m``."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    z = _points(Z)
    inside = z[Q.contains(z)] if z.size else z
    counts = [0] * m_max
    if inside.size:
        for m in layer_index(inside, Q.side):
            if 1 <= m <= m_max:
                counts[m - 1] += 1
    return counts


def square_family(Z, depth: int) -> list[CarlesonSquare]:
    """Dyadic squares down to level ``depth`` plus squares centred on each point's angle."""
    squares = []
    for level in range(depth + 1):
        side = 2.0 * np.pi * 2.0 ** -level
        for j in range(2 ** level):
            squares.append(CarlesonSquare(2.0 * np.pi * j * 2.0 ** -level, side))
    z = _points(Z)
    for theta in np.unique(np.round(np.angle(z), 15)) if z.size else ():
        for level in range(depth + 1):
            squares.append(CarlesonSquare(float(theta), 2.0 * np.pi * 2.0 ** -level))
    return squares


def layer_sup(Z, depth: int) -> np.ndarray:
    """Worst count per layer ``m = 1..depth`` over the audited square family."""
    z = _points(Z)
    sup = np.zeros(depth, dtype=int)
    if z.size == 0:
        return sup
    for Q in square_family(z, depth):
        sup = np.maximum(sup, carleson_layer_counts(z, Q, depth))
    return sup


def density_constant(Z, alpha: float, depth: int) -> float:
    """``max_{Q, m} count_m(Q) 2^{-alpha m}`` over the audited family."""
    sup = layer_sup(Z, depth)
    m = np.arange(1, depth + 1)
    return float(np.max(sup * 2.0 ** (-alpha * m))) if depth else 0.0


def _admits(scaled: np.ndarray) -> bool:
    # finite-depth stand-in for boundedness: the deeper half of the layers
    # may not exceed the shallower half
    half = max(len(scaled) // 2, 1)
    head, tail = scaled[:half], scaled[half:]
    if tail.size == 0:
        return True
    return float(np.max(tail)) <= float(np.max(head)) * (1.0 + 1e-12)


def fit_density(Z, square_family_depth: int = 8,
                alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID) -> tuple[float, float]:
    """Smallest grid ``alpha`` whose scaled layer counts stay bounded, with its ``M``.

    Returns ``(inf, inf)`` when no grid value is admitted.
    """
    grid = sorted(float(a) for a in alpha_grid)
    if any(not 0 < a < 1 for a in grid):
        raise ValueError("alpha grid must lie in (0, 1)")
    depth = square_family_depth
    sup = layer_sup(Z, depth)
    m = np.arange(1, depth + 1)
    for alpha in grid:
        scaled = sup * 2.0 ** (-alpha * m)
        if _admits(scaled):
            return float(np.max(scaled)) if scaled.size else 0.0, alpha
    return math.inf, math.inf


def r_density(Z, probe_radius_beta: float, grid_step_beta: float, chunk: int = 4096) -> float:
    """Largest distance from a probe point to its nearest point of ``Z``.

    Probes form a hyperbolic lattice of spacing ``grid_step_beta`` over the
    disc of beta-radius ``probe_radius_beta`` about the origin.
    """
    z = _points(Z)
    if z.size == 0:
        raise ValueError("Z is empty")
    probes = hyperbolic_lattice(grid_step_beta, probe_radius_beta)
    worst = 0.0
    for s in range(0, probes.size, chunk):
        p = probes[s : s + chunk]
        d = _hyp_dist(p[:, None], z[None, :])
        worst = max(worst, float(np.max(np.min(d, axis=1))))
    return worst


@dataclass(frozen=True)
class SequenceReport:
    separation_eta: float | None
    parts: list
    part_count: int
    clique_bound: int
    carleson_M: float
    carleson_alpha: float
    condition_a: bool
    condition_b: bool
    order: int
    depth: int
    density_R: float | None = None
    probe_radius_beta: float | None = None
    notes: list = field(default_factory=list)


def order_check(Z, n: int, eta_target: float, depth: int = 8,
                alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
                probe_radius_beta: float | None = None,
                grid_step_beta: float = 0.1) -> SequenceReport:
    """Audit ``Z`` as an interpolating sequence of order ``n - 1``.

    Condition (a) passes when the greedy split needs at most ``n`` parts; it
    fails outright only when the clique bound exceeds ``n``.  Condition (b)
    passes when a grid ``alpha < 1`` is admitted.
    """
    z = _points(Z)
    parts, count = decompose_separated(z, eta_target)
    clique = clique_lower_bound(z, eta_target)
    M, alpha = fit_density(z, depth, alpha_grid)
    notes = [
        "density audited on dyadic squares plus squares centred at point angles",
        "part_count is a greedy upper bound; clique_bound is a lower bound",
    ]
    if count > n >= clique:
        notes.append("condition (a) undecided: greedy count exceeds n but clique bound does not")
    R = None
    if probe_radius_beta is not None:
        R = r_density(z, probe_radius_beta, grid_step_beta)
        notes.append(f"R-density probed only within beta-radius {probe_radius_beta}")
    return SequenceReport(
        separation_eta=separation_constant(z) if z.size >= 2 else None,
        parts=parts,
        part_count=count,
        clique_bound=clique,
        carleson_M=M,
        carleson_alpha=alpha,
        condition_a=count <= n,
        condition_b=alpha < 1.0,
        order=n - 1,
        depth=depth,
        density_R=R,
        probe_radius_beta=probe_radius_beta,
        notes=notes,
    )
