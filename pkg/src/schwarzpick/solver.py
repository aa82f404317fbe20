"""Finite Nevanlinna-Pick problems: solvability tests and Schur-chain solutions.

Three independent tests decide whether the data admit infinitely many
solutions in the unit ball of H-infinity:

* the diagonal ``D^k_{k+1}`` of the quotient triangle is strictly inside the disc,
* every triangle entry is strictly inside the disc,
* the Pick matrix ``(1 - w_i conj(w_j)) / (1 - z_i conj(z_j))`` is positive semidefinite.

Solutions are built from the triangle diagonal by the nested Moebius
recursion ``g_k = [[z, z_{n+1-k}] g_{k-1}, D^{n-k}_{n+1-k}]`` starting from a
constant ``g_0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SolverRefusal
from .hyperbolic import _bracket, check_inside, hyperbolic_lattice
from .quotients import QuotientTriangle, _as_nodes, _as_values, build_triangle

DEGENERACY_BAND = 1e-6
PICK_TOL = 1e-10

INFINITELY_MANY = "InfinitelyMany"
BOUNDARY = "Boundary"
UNSOLVABLE = "Unsolvable"


@dataclass(frozen=True)
class SolvabilityVerdict:
    status: str
    criteria: dict
    margin: float
    max_modulus: float
    pick_min_eigenvalue: float

    @property
    def solvable(self) -> bool:
        return self.status == INFINITELY_MANY


def pick_matrix(nodes, values) -> np.ndarray:
    z = _as_nodes(nodes)
    w = _as_values(values, z.size)
    return (1.0 - w[:, None] * np.conj(w[None, :])) / (1.0 - z[:, None] * np.conj(z[None, :]))


def pick_psd(nodes, values, tol: float = PICK_TOL) -> tuple[bool, float]:
    """Positive semidefiniteness of the Pick matrix by its smallest eigenvalue."""
    lam = float(np.linalg.eigvalsh(pick_matrix(nodes, values))[0])
    return lam >= -tol, lam


def _strict(tri: QuotientTriangle, mask: np.ndarray) -> bool:
    mask = mask & tri.defined_mask()
    if np.any(tri.poisoned[mask]):
        return False
    return bool(np.all(np.abs(tri.table[mask]) < 1.0))


def solvability(nodes, values, band: float = DEGENERACY_BAND,
                triangle: QuotientTriangle | None = None) -> SolvabilityVerdict:
    """Classify the data as InfinitelyMany, Boundary or Unsolvable.

    The status follows the largest computed triangle entry modulus: below
    ``1 - band`` the problem is strictly solvable, above ``1 + band`` it is
    unsolvable, and in between it is a Boundary case.  A Boundary case whose
    Pick matrix is clearly indefinite is downgraded to Unsolvable, since
    poisoned entries can hide the violating quotient.
    """
    tri = build_triangle(nodes, values) if triangle is None else triangle
    n = tri.n
    diag_mask = np.zeros((n, n), dtype=bool)
    diag_mask[np.arange(n), np.arange(n)] = True
    is_psd, lam = pick_psd(tri.nodes, tri.values)
    criteria = {
        "diagonal_strict": _strict(tri, diag_mask),
        "all_entries_strict": _strict(tri, np.ones((n, n), dtype=bool)),
        "pick_psd": is_psd,
    }
    mx = tri.max_modulus()
    if mx > 1.0 + band:
        status = UNSOLVABLE
    elif mx >= 1.0 - band or tri.any_poisoned:
        status = BOUNDARY if is_psd else UNSOLVABLE
    else:
        status = INFINITELY_MANY
    return SolvabilityVerdict(status, criteria, 1.0 - mx, mx, lam)


@dataclass(frozen=True)
class SchurChain:
    """Interpolant from the Schur recursion.

    ``nodes`` are kept in problem order and ``diagonal[k]`` is ``D^k_{k+1}``;
    evaluation consumes them from the last node back to the first.
    """

    nodes: np.ndarray
    diagonal: np.ndarray
    g0: complex = 0j
    level_constant: float | None = field(default=None, compare=False)

    @property
    def initial_tag(self) -> str:
        return "zero" if self.g0 == 0 else f"constant({self.g0.real!r}, {self.g0.imag!r})"

    def levels(self, z) -> list:
        """``[g_0, g_1, ..., g_n]`` at ``z``; ``g_n`` is the interpolant."""
        z = np.asarray(z, dtype=complex)
        g = np.full(z.shape, self.g0, dtype=complex)
        out = [g]
        n = self.nodes.size
        for k in range(1, n + 1):
            m = n - k
            d = self.diagonal[m]
            g = _bracket(_bracket(z, self.nodes[m]) * g, d)
            out.append(g)
        return out

    def __call__(self, z):
        g = self.levels(z)[-1]
        return g[()] if g.ndim == 0 else g


def _level_constant(chain: SchurChain, tri: QuotientTriangle, grid: np.ndarray) -> float | None:
    n = tri.n
    if n < 2:
        return None
    eps = tri.max_modulus(min_level=1)
    if eps == 0.0:
        return None
    levels = chain.levels(grid)[1:n]
    return float(max(np.max(np.abs(g)) for g in levels) / eps)


def schur_solve(nodes, values, g0: complex = 0j, grid: np.ndarray | None = None) -> SchurChain:
    """Construct an interpolant of strictly solvable data.

    ``g0`` is the constant seed (``|g0| <= 1``).  The returned chain records
    ``level_constant``: the sup over ``grid`` of the intermediate levels
    ``|g_1|, ..., |g_{n-1}|`` divided by the largest ``|D^k_j|`` with ``k >= 1``.
    """
    g0 = complex(g0)
    if abs(g0) > 1.0:
        raise ValueError("g0 must lie in the closed unit disc")
    tri = build_triangle(nodes, values)
    verdict = solvability(tri.nodes, tri.values, triangle=tri)
    if not verdict.solvable:
        raise SolverRefusal(verdict)
    chain = SchurChain(tri.nodes, tri.diagonal(), g0)
    if grid is None:
        grid = hyperbolic_lattice(0.5, 4.0)
    return SchurChain(chain.nodes, chain.diagonal, g0, _level_constant(chain, tri, grid))


def eval_chain(chain: SchurChain, z):
    return chain(check_inside(z))


@dataclass(frozen=True)
class DenjoyResult:
    partial_sums: list
    terms: list
    saturated: bool
    saturated_at: int | None


def denjoy_sum(nodes, values, tol: float = 1e-12) -> DenjoyResult:
    """Partial sums of ``sum_n (1 - |z_n|) / (1 - |D^{n-1}_n|)`` in node order.

    Summation stops at the first diagonal entry of modulus ``>= 1 - tol``
    (or a poisoned one); ``saturated_at`` is its 1-based index.
    """
    tri = build_triangle(nodes, values)
    if tri.n < 2:
        raise ValueError("need at least two nodes")
    terms, sums, total = [], [], 0.0
    for k in range(tri.n):
        d = tri.table[k, k]
        if tri.poisoned[k, k] or abs(d) >= 1.0 - tol:
            return DenjoyResult(sums, terms, True, k + 1)
        term = (1.0 - abs(tri.nodes[k])) / (1.0 - abs(d))
        total += term
        terms.append(float(term))
        sums.append(float(total))
    return DenjoyResult(sums, terms, False, None)
