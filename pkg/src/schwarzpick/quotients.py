"""Triangles of hyperbolic difference quotients.

For nodes ``z_1..z_n`` and values ``w_1..w_n`` the triangle is

    D^0_j = w_j,
    D^k_j = [D^{k-1}_j, D^{k-1}_k] / [z_j, z_k],   1 <= k < j <= n,

with the bracket ``[a, b] = (b - a) / (1 - conj(b) a)``.  Internally the
table is stored 0-based as ``table[k, r]`` with row ``r = j - 1 >= k``.
Entries of modulus at least ``1 - SATURATION_TOL`` are *saturated*: their
descendants are *poisoned* (left as NaN) rather than computed, since a
bracket against a unimodular pivot collapses to that pivot.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateNodesError, LimitDivergenceError
from .hyperbolic import _bracket, _hyp_dist, check_inside

SATURATION_TOL = 1e-12
DIAGONAL_TOL = 1e-9
DEFAULT_PERMUTATION_BUDGET = 5040
DEFAULT_DRAWS = 10_000


def _as_nodes(nodes) -> np.ndarray:
    z = np.atleast_1d(np.asarray(check_inside(np.asarray(nodes, dtype=complex), "nodes"), dtype=complex))
    if z.ndim != 1:
        raise ValueError("nodes must be a flat list")
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    if z.size > 1 and np.min(d) == 0.0:
        i, j = np.argwhere(d == 0.0)[0]
        raise DegenerateNodesError(f"nodes {i} and {j} coincide")
    return z


def _as_values(values, n: int) -> np.ndarray:
    w = np.atleast_1d(np.asarray(values, dtype=complex))
    if w.shape != (n,):
        raise ValueError(f"expected {n} values, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise ValueError("values contain non-finite entries")
    if np.any(np.abs(w) > 1.0 + 1e-15):
        raise ValueError("values must lie in the closed unit disc")
    return w


def _build_tables(z: np.ndarray, w: np.ndarray):
    """Vectorised triangle construction over a leading batch axis.

    ``z`` and ``w`` have shape (P, n).  Returns ``table`` of shape (P, n, n)
    (NaN where undefined or poisoned), and boolean ``saturated`` and
    ``poisoned`` masks of the same shape.
    """
    P, n = z.shape
    table = np.full((P, n, n), np.nan + 0j)
    saturated = np.zeros((P, n, n), dtype=bool)
    poisoned = np.zeros((P, n, n), dtype=bool)
    table[:, 0, :] = w
    saturated[:, 0, :] = np.abs(w) >= 1.0 - SATURATION_TOL
    for k in range(1, n):
        prev = table[:, k - 1, k:]
        pivot = table[:, k - 1, k - 1][:, None]
        bad_parent = (
            saturated[:, k - 1, k:] | poisoned[:, k - 1, k:]
            | saturated[:, k - 1, k - 1][:, None] | poisoned[:, k - 1, k - 1][:, None]
        )
        with np.errstate(invalid="ignore", divide="ignore"):
            den = 1.0 - np.conj(pivot) * prev
            bad = bad_parent | (np.abs(den) == 0.0) | ~np.isfinite(den)
            val = ((pivot - prev) / den) / _bracket(z[:, k:], z[:, k - 1][:, None])
        val = np.where(bad, np.nan + 0j, val)
        table[:, k, k:] = val
        poisoned[:, k, k:] = bad
        saturated[:, k, k:] = ~bad & (np.abs(val) >= 1.0 - SATURATION_TOL)
    return table, saturated, poisoned


@dataclass(frozen=True)
class QuotientTriangle:
    """Lower-triangular table of hyperbolic difference quotients.

    Access entries with :meth:`entry` using the 1-based ``(k, j)`` indexing
    ``0 <= k < j <= n``.
    """

    nodes: np.ndarray
    values: np.ndarray
    table: np.ndarray
    saturated: np.ndarray
    poisoned: np.ndarray

    @property
    def n(self) -> int:
        return self.nodes.size

    def entry(self, k: int, j: int) -> complex:
        if not 0 <= k < j <= self.n:
            raise IndexError(f"entry ({k}, {j}) outside the triangle of size {self.n}")
        return complex(self.table[k, j - 1])

    def is_saturated(self, k: int, j: int) -> bool:
        return bool(self.saturated[k, j - 1])

    def is_poisoned(self, k: int, j: int) -> bool:
        return bool(self.poisoned[k, j - 1])

    def diagonal(self) -> np.ndarray:
        """``D^k_{k+1}`` for k = 0..n-1."""
        return np.array([self.table[k, k] for k in range(self.n)])

    def defined_mask(self, min_level: int = 0) -> np.ndarray:
        mask = np.triu(np.ones((self.n, self.n), dtype=bool))
        mask[:min_level, :] = False
        return mask

    def max_modulus(self, min_level: int = 0) -> float:
        """Largest modulus among computed entries at levels >= ``min_level``."""
        mask = self.defined_mask(min_level) & ~self.poisoned
        if not mask.any():
            return 0.0
        return float(np.max(np.abs(self.table[mask])))

    @property
    def any_poisoned(self) -> bool:
        return bool(np.any(self.poisoned & self.defined_mask()))

    def entries(self):
        """Yield ``(k, j, value, saturated, poisoned)`` in row-major order."""
        for j in range(1, self.n + 1):
            for k in range(j):
                yield k, j, complex(self.table[k, j - 1]), bool(self.saturated[k, j - 1]), bool(self.poisoned[k, j - 1])


def build_triangle(nodes, values) -> QuotientTriangle:
    """Build the triangle of hyperbolic difference quotients for the data."""
    z = _as_nodes(nodes)
    w = _as_values(values, z.size)
    table, sat, poi = _build_tables(z[None, :], w[None, :])
    return QuotientTriangle(z, w, table[0], sat[0], poi[0])


# -- quotients of functions ------------------------------------------------

def _function_quotient(f: Callable, base: np.ndarray, z, k: int):
    """Off-diagonal ``D^k f(z; base[:k])`` straight from the recursive definition."""
    cache: dict = {}

    def level(m: int, x):
        if m == 0:
            return np.asarray(f(x), dtype=complex)
        key = m
        if key not in cache:
            cache[key] = complex(level(m - 1, base[m - 1]))
        pivot = cache[key]
        return _bracket(level(m - 1, x), pivot) / _bracket(x, base[m - 1])

    return level(k, z)


def _richardson_limit(g: Callable, centre: complex, h0: float = 1e-3, steps: int = 3,
                      tol: float = 1e-6) -> complex:
    # symmetric averages have an even error expansion, so each refinement by
    # a factor 10 in h removes a factor 100 from the leading term
    u = np.exp(0.3j)
    hs = h0 * min(1.0, 1.0 - abs(centre)) * 10.0 ** -np.arange(steps)
    col = [0.5 * (complex(g(centre + h * u)) + complex(g(centre - h * u))) for h in hs]
    tableau = [col]
    for m in range(1, steps):
        prev = tableau[-1]
        fac = 100.0 ** m
        tableau.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    best = tableau[-1][0]
    spread = abs(best - tableau[-2][-1])
    if not np.isfinite(best) or spread > tol * max(1.0, abs(best)):
        raise LimitDivergenceError(f"diagonal limit did not converge (spread {spread:.3g})")
    return best


def delta_k_of_function(f: Callable, base_nodes: Sequence, z, k: int) -> complex:
    """``D^k f(z; z_1, ..., z_k)`` for an evaluable self-map ``f``.

    When ``z`` lies within 1e-9 of one of the first ``k`` base nodes the value
    is the diagonal limit, obtained by Richardson extrapolation of symmetric
    off-diagonal quotients.
    """
    base = _as_nodes(base_nodes)
    if not 0 <= k <= base.size:
        raise ValueError(f"k={k} must lie in [0, {base.size}]")
    z = complex(check_inside(z))
    if k and np.min(np.abs(base[:k] - z)) < DIAGONAL_TOL:
        centre = complex(base[:k][np.argmin(np.abs(base[:k] - z))])
        return _richardson_limit(lambda x: _function_quotient(f, base, x, k), centre)
    return complex(_function_quotient(f, base, z, k))


def verify_estab(f: Callable, nodes) -> float:
    """Largest gap between the data triangle of ``f`` and its function quotients."""
    z = _as_nodes(nodes)
    tri = build_triangle(z, np.asarray(f(z), dtype=complex))
    worst = 0.0
    for k, j, val, sat, poi in tri.entries():
        if poi:
            continue
        other = delta_k_of_function(f, z, z[j - 1], k)
        worst = max(worst, abs(val - other))
    return worst


# -- compatibility sweeps --------------------------------------------------

def _permutation_batch(m: int, budget: int, draws: int, rng) -> tuple[np.ndarray, bool]:
    if math.factorial(m) <= budget:
        return np.array(list(itertools.permutations(range(m))), dtype=int).reshape(-1, m), True
    return np.array([rng.permutation(m) for _ in range(draws)], dtype=int), False


def resolve_permutations(mode, m: int, budget: int = DEFAULT_PERMUTATION_BUDGET,
                         draws: int = DEFAULT_DRAWS, seed: int = 0) -> tuple[np.ndarray, bool]:
    """Permutation batch for ``"all"``, ``"identity"`` or a sample count."""
    rng = np.random.default_rng(seed)
    if mode == "identity":
        return np.arange(m)[None, :], math.factorial(m) == 1
    if mode == "all" or mode is None:
        return _permutation_batch(m, budget, draws, rng)
    count = int(mode)
    if count >= math.factorial(m):
        return np.array(list(itertools.permutations(range(m))), dtype=int).reshape(-1, m), True
    return np.array([np.arange(m)] + [rng.permutation(m) for _ in range(count - 1)], dtype=int), False


@dataclass(frozen=True)
class CompatibilityReport:
    """Worst ratio ``beta(D^k_i, D^k_j) / beta(z_i, z_j)`` over a sweep.

    ``worst_witness`` is ``(k, i, j, order)`` with 1-based positions ``i < j``
    inside ``order``, a tuple of original node indices.
    """

    epsilon_min: float
    worst_witness: tuple | None
    permutations_checked: int
    exhaustive: bool
    infinite: bool = False
    per_level: dict = field(default_factory=dict)


def _ratio_sweep(z: np.ndarray, w: np.ndarray, orders: np.ndarray):
    zp, wp = z[orders], w[orders]
    table, sat, poi = _build_tables(zp, wp)
    P, m = orders.shape
    best, witness, infinite = 0.0, None, False
    per_level = {}
    for k in range(max(m - 1, 0)):
        rows = np.arange(k, m)
        vals = table[:, k, k:]
        bad = sat[:, k, k:] | poi[:, k, k:]
        if bad.any():
            p, r = np.argwhere(bad)[0]
            infinite = True
            per_level[k] = math.inf
            if witness is None or best != math.inf:
                best = math.inf
                witness = (k, int(rows[r]) + 1, int(rows[r]) + 1, tuple(int(x) for x in orders[p]))
            continue
        if rows.size < 2:
            continue
        iu, ju = np.triu_indices(rows.size, 1)
        num = _hyp_dist(vals[:, iu], vals[:, ju])
        den = _hyp_dist(zp[:, rows[iu]], zp[:, rows[ju]])
        ratio = num / den
        idx = np.unravel_index(np.argmax(ratio), ratio.shape)
        level_max = float(ratio[idx])
        per_level[k] = level_max
        if level_max > best:
            best = level_max
            witness = (k, int(rows[iu[idx[1]]]) + 1, int(rows[ju[idx[1]]]) + 1,
                       tuple(int(x) for x in orders[idx[0]]))
    return best, witness, infinite, per_level


def epsilon_of(nodes, values, subset_size: int | None = None,
               permutation_budget: int = DEFAULT_PERMUTATION_BUDGET,
               draws: int = DEFAULT_DRAWS, seed: int = 0) -> CompatibilityReport:
    """Smallest epsilon making the data epsilon-compatible on the sweep.

    Every subset of ``subset_size`` nodes is checked in every order when
    ``subset_size!`` fits in ``permutation_budget``; otherwise ``draws``
    seeded random orders per subset are used.  Levels ``k = 0..m-2`` of each
    ``m``-node triangle enter the ratio.
    """
    z = _as_nodes(nodes)
    w = _as_values(values, z.size)
    m = z.size if subset_size is None else int(subset_size)
    if not 2 <= m <= z.size:
        raise ValueError(f"subset_size must be in [2, {z.size}]")
    rng = np.random.default_rng(seed)
    local, exhaustive = _permutation_batch(m, permutation_budget, draws, rng)
    best, witness, infinite, checked = 0.0, None, False, 0
    per_level: dict = {}
    for subset in itertools.combinations(range(z.size), m):
        orders = np.asarray(subset)[local]
        val, wit, inf, levels = _ratio_sweep(z, w, orders)
        checked += orders.shape[0]
        infinite |= inf
        for k, v in levels.items():
            per_level[k] = max(per_level.get(k, 0.0), v)
        if wit is not None and (witness is None or val > best):
            best, witness = val, wit
    return CompatibilityReport(best, witness, checked, exhaustive, infinite, per_level)


def column_condition_check(nodes, values, eps: float, permutations="all",
                           seed: int = 0, rtol: float = 0.0):
    """Check ``|D^k_j| <= eps`` for all ``k >= 1`` over the requested orders.

    ``permutations`` is ``"all"``, ``"identity"`` or a number of orders
    (identity first, then seeded random ones).  Returns ``(ok, witness)``;
    the witness ``(k, j, order, modulus)`` names the largest entry found, or
    a saturated/poisoned entry (modulus ``inf``) when one exists.
    """
    z = _as_nodes(nodes)
    w = _as_values(values, z.size)
    n = z.size
    if n < 2:
        return True, None
    orders, _ = resolve_permutations(permutations, n, seed=seed)
    table, sat, poi = _build_tables(z[orders], w[orders])
    mask = np.triu(np.ones((n, n), dtype=bool))
    mask[0, :] = False
    mod = np.where(poi | sat, np.inf, np.abs(table))
    mod = np.where(mask[None], mod, -np.inf)
    p, k, r = np.unravel_index(np.argmax(mod), mod.shape)
    worst = float(mod[p, k, r])
    witness = (int(k), int(r) + 1, tuple(int(x) for x in orders[p]), worst)
    return worst <= eps * (1.0 + rtol), witness
