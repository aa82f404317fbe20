"""Sampling-constant estimates for analytic self-maps of the disc.

``N(f) = sup |f^h|`` is estimated by a maximum over a hyperbolic lattice, so
every reported value is a lower bound for the true supremum.  The sampling
constant is only ever estimated over a finite family of test maps and is
therefore an upper bound for the constant of the sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .blaschke import hyp_deriv, make_test_family
from .errors import DegenerateBoundaryError
from .hyperbolic import _hyp_dist, check_inside, hyperbolic_lattice

__all__ = ["CapacityEstimate", "SamplingReport", "capacity", "make_test_family", "sampling_constant",
           "sampling_ratio"]

CAPACITY_RADIUS = 8.0
CAPACITY_STEP = 0.05
CAPACITY_FLOOR = 1e-6


@dataclass(frozen=True)
class CapacityEstimate:
    value: float
    at: complex
    grid_radius_beta: float
    grid_step_beta: float
    grid_points: int

    def __float__(self):
        return self.value


def capacity(f: Callable, grid_radius_beta: float = CAPACITY_RADIUS,
             grid_step_beta: float = CAPACITY_STEP, chunk: int = 1 << 18) -> CapacityEstimate:
    """Grid maximum of ``|f^h|`` over a hyperbolic lattice about the origin."""
    grid = hyperbolic_lattice(grid_step_beta, grid_radius_beta)
    best, at = -1.0, 0j
    for s in range(0, grid.size, chunk):
        z = grid[s : s + chunk]
        h = np.abs(hyp_deriv(f, z))
        i = int(np.argmax(h))
        if h[i] > best:
            best, at = float(h[i]), complex(z[i])
    return CapacityEstimate(best, at, grid_radius_beta, grid_step_beta, int(grid.size))


class _NodeDistances:
    """Row blocks of the upper-triangular node distance matrix, computed once."""

    def __init__(self, z: np.ndarray, rows: int = 256):
        self.z = z
        self.blocks = []
        for s in range(0, z.size - 1, rows):
            i = np.arange(s, min(s + rows, z.size - 1))
            # entries j > i only; padded entries are +inf so ratios vanish there
            d = _hyp_dist(z[i, None], z[None, :])
            d[np.arange(z.size)[None, :] <= i[:, None]] = np.inf
            self.blocks.append((i, d))

    def sup_ratio(self, fz: np.ndarray) -> tuple[float, tuple[int, int]]:
        # beta(f_i, f_j) <= r_i + r_j with r = beta(., f_0) bounds every ratio
        # from above; pairs whose bound cannot beat the running maximum are
        # skipped, so the result is still the exact maximum.
        radius = _hyp_dist(fz, fz[0])
        best, pair = -1.0, (0, 1)
        for i, d in self.blocks:
            bound = (radius[i, None] + radius[None, :]) / d
            rows, cols = np.nonzero(bound > best)
            if rows.size == 0:
                continue
            ratio = _hyp_dist(fz[i[rows]], fz[cols]) / d[rows, cols]
            k = int(np.argmax(ratio))
            if ratio[k] > best:
                best, pair = float(ratio[k]), (int(i[rows[k]]), int(cols[k]))
        return max(best, 0.0), pair


def _as_sequence(Z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(Z, dtype=complex)).ravel()
    if z.size < 2:
        raise ValueError("need at least two points")
    check_inside(z, "Z")
    if np.unique(z).size != z.size:
        raise ValueError("points must be pairwise distinct")
    return z


def sampling_ratio(Z, f: Callable) -> tuple[float, tuple[int, int]]:
    """``sup_{n != m} beta(f(z_n), f(z_m)) / beta(z_n, z_m)`` with its argmax pair."""
    z = _as_sequence(Z)
    return _NodeDistances(z).sup_ratio(np.asarray(f(z), dtype=complex))


@dataclass(frozen=True)
class SamplingReport:
    """Family-restricted sampling constant.

    ``n_of_f``, ``sup_ratio`` and ``ratio_witness`` belong to the family
    member that attains ``c_estimate``.
    """

    n_of_f: float
    sup_ratio: float
    ratio_witness: tuple
    c_estimate: float
    family_size: int
    member: int
    members: list
    excluded: list
    grid_radius_beta: float
    grid_step_beta: float
    notes: list = field(default_factory=list)


def sampling_constant(Z, family: Sequence[Callable], grid_radius_beta: float = CAPACITY_RADIUS,
                      grid_step_beta: float = CAPACITY_STEP,
                      floor: float = CAPACITY_FLOOR) -> SamplingReport:
    """Minimum over ``family`` of ``sup_ratio(Z, f) / N(f)``.

    Members whose capacity estimate is at most ``floor``, or which touch the
    unit circle on the grid, are excluded and listed in ``excluded``.
    """
    z = _as_sequence(Z)
    pairs = _NodeDistances(z)
    members, excluded = [], []
    best = None
    for idx, f in enumerate(family):
        try:
            cap = capacity(f, grid_radius_beta, grid_step_beta)
        except DegenerateBoundaryError as exc:
            excluded.append({"index": idx, "reason": str(exc)})
            continue
        if cap.value <= floor:
            excluded.append({"index": idx, "reason": f"capacity {cap.value!r} <= {floor!r}"})
            continue
        ratio, pair = pairs.sup_ratio(np.asarray(f(z), dtype=complex))
        c = ratio / cap.value
        members.append({"index": idx, "capacity": cap.value, "sup_ratio": ratio,
                        "witness": list(pair), "ratio": c})
        if best is None or c < best[0]:
            best = (c, idx, cap.value, ratio, pair)
    if best is None:
        raise ValueError("every family member was excluded")
    c, idx, cap, ratio, pair = best
    notes = [
        "c_estimate is an upper bound: the infimum runs over the supplied family only",
        f"N(f) is a grid maximum over beta-radius {grid_radius_beta} with step {grid_step_beta}",
    ]
    return SamplingReport(cap, ratio, pair, c, len(family), idx, members, excluded,
                          grid_radius_beta, grid_step_beta, notes)
