"""Write a matrix as an explicit convex combination of the 24 Clifford rotations.

The feasibility problem ``sum_i w_i C_i = M, sum_i w_i = 1, w >= 0`` is tiny
(24 variables, 10 equality rows), so it is solved with a dense phase-one
simplex under Bland's rule rather than an external LP package. The polytope
is highly symmetric and degenerate pivots are common; Bland's rule makes the
method terminate regardless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .clifford import clifford_stack
from .exceptions import SolverFailure
from .facets import MembershipVerdict, polytope_membership

MAX_PIVOTS = 10_000
FEAS_TOL = 1e-8
PIVOT_TOL = 1e-11
WEIGHT_FLOOR = -1e-9
BOUNDARY_BAND = 1e-7


class SimplexResult(NamedTuple):
    x: np.ndarray
    objective: float
    pivots: int


def phase_one(a_eq: np.ndarray, b_eq: np.ndarray, max_pivots: int = MAX_PIVOTS) -> SimplexResult:
    """Minimize the artificial-variable sum for ``A x = b, x >= 0``.

    Returns the basic solution over the original variables, the optimal
    artificial sum (zero up to rounding iff the system is feasible) and the
    number of pivots taken. Entering and leaving variables follow Bland's
    lowest-index rule.
    """
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, n = a.shape
    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1

    # tableau columns: n originals, m artificials, rhs
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    # reduced-cost row of sum(artificials) expressed in the non-basic variables
    tab[m, :n] = -a.sum(axis=0)
    tab[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    pivots = 0
    while True:
        cost = tab[m, : n + m]
        entering = next((j for j in range(n + m) if cost[j] < -PIVOT_TOL), None)
        if entering is None:
            break
        col = tab[:m, entering]
        rows = [i for i in range(m) if col[i] > PIVOT_TOL]
        if not rows:
            # cannot happen in phase one (objective bounded below by zero)
            raise SolverFailure("phase-one objective reported unbounded")
        ratios = [tab[i, -1] / col[i] for i in rows]
        best = min(ratios)
        ties = [i for i, r in zip(rows, ratios) if r <= best + PIVOT_TOL * max(1.0, abs(best))]
        leave = min(ties, key=lambda i: basis[i])
        _pivot(tab, leave, entering)
        basis[leave] = entering
        pivots += 1
        if pivots > max_pivots:
            raise SolverFailure(f"simplex exceeded {max_pivots} pivots")

    x = np.zeros(n)
    for row, var in enumerate(basis):
        if var < n:
            x[var] = tab[row, -1]
    return SimplexResult(x, -tab[m, -1], pivots)


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i] -= tab[i, col] * tab[row]


def _constraints(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    verts = clifford_stack().reshape(24, 9).T.astype(float)
    a_eq = np.vstack([verts, np.ones((1, 24))])
    b_eq = np.concatenate([np.asarray(m, dtype=float).ravel(), [1.0]])
    return a_eq, b_eq


@dataclass(frozen=True)
class Decomposition:
    feasible: bool
    weights: np.ndarray | None
    reconstruction_error: float | None
    phase_one_objective: float
    pivots: int

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "weights": None if self.weights is None else [float(w) for w in self.weights],
            "reconstruction_error": self.reconstruction_error,
        }


def decompose(m, max_pivots: int = MAX_PIVOTS) -> Decomposition:
    """Convex weights over the canonical Clifford order reproducing ``m``, or an infeasible verdict.

    Raises :class:`SolverFailure` when the pivot cap is hit.
    """
    m = np.asarray(m, dtype=float).reshape(3, 3)
    a_eq, b_eq = _constraints(m)
    x, obj, pivots = phase_one(a_eq, b_eq, max_pivots)
    if obj > FEAS_TOL:
        return Decomposition(False, None, None, float(obj), pivots)
    if x.min() < WEIGHT_FLOOR:
        return Decomposition(False, None, None, float(obj), pivots)
    w = np.maximum(x, 0.0)
    recon = np.tensordot(w, clifford_stack().astype(float), axes=1)
    err = float(np.abs(recon - m).max())
    return Decomposition(True, w, err, float(obj), pivots)


@dataclass(frozen=True)
class CrossCheck:
    status: str  # agree-inside | agree-outside | boundary-ambiguous | disagree
    facet: MembershipVerdict
    lp: Decomposition

    @property
    def agrees(self) -> bool:
        return self.status.startswith("agree")


def membership_cross_check(m, band: float = BOUNDARY_BAND) -> CrossCheck:
    """Compare the facet test against the LP decomposition for one matrix.

    A mismatch is reported as ``boundary-ambiguous`` (not a failure) when the
    largest facet value sits within ``band`` of 1.
    """
    facet = polytope_membership(np.asarray(m, dtype=float))
    lp = decompose(m)
    if facet.inside == lp.feasible:
        status = "agree-inside" if facet.inside else "agree-outside"
    elif abs(facet.value - 1.0) < band:
        status = "boundary-ambiguous"
    else:
        status = "disagree"
    return CrossCheck(status, facet, lp)
