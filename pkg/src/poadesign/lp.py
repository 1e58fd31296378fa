"""Dense two-phase simplex for small linear programs.

Problems are maximizations over nonnegative variables with equality and
greater-or-equal rows.  Sizes here stay tiny (a few hundred variables), so
the solver favors robustness and determinism over speed: dense tableau,
Bland's anti-cycling pivot rule, fixed tolerances.  Identical inputs produce
bitwise-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_TOL = 1e-10
FEASIBILITY_TOL = 1e-8
MAX_PIVOTS = 1_000_000


class NumericalFailure(RuntimeError):
    """Pivoting exceeded the iteration cap; the instance is ill-posed."""


Row = tuple[Sequence[float], float]


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x  s.t.  eq rows hold with equality,
    ge rows hold with >=, and x >= 0 componentwise."""

    num_vars: int
    objective: tuple[float, ...]
    eq_constraints: tuple[tuple[tuple[float, ...], float], ...]
    ge_constraints: tuple[tuple[tuple[float, ...], float], ...]

    def __init__(
        self,
        num_vars: int,
        objective: Sequence[float],
        eq_constraints: Sequence[Row] = (),
        ge_constraints: Sequence[Row] = (),
    ):
        if num_vars < 1:
            raise ValueError("need at least one variable")
        objective = tuple(float(c) for c in objective)
        if len(objective) != num_vars:
            raise ValueError(f"objective has {len(objective)} entries for {num_vars} vars")

        def freeze(rows: Sequence[Row], kind: str):
            out = []
            for row, rhs in rows:
                row = tuple(float(c) for c in row)
                if len(row) != num_vars:
                    raise ValueError(f"{kind} row has {len(row)} entries for {num_vars} vars")
                out.append((row, float(rhs)))
            return tuple(out)

        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "eq_constraints", freeze(eq_constraints, "eq"))
        object.__setattr__(self, "ge_constraints", freeze(ge_constraints, "ge"))


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: float | None = None
    point: tuple[float, ...] | None = None


def _objective_row(tableau: np.ndarray, costs: np.ndarray, basis: list[int]) -> None:
    """Rewrite the bottom row as reduced costs z_j - c_j for the given basis."""
    tableau[-1, :] = 0.0
    tableau[-1, : costs.size] = -costs
    for i, bi in enumerate(basis):
        cb = costs[bi]
        if cb != 0.0:
            tableau[-1, :] += cb * tableau[i, :]


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row, :] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row, :])


def _simplex(tableau: np.ndarray, basis: list[int]) -> str:
    """Bland's rule: lowest eligible entering column, lowest basic-variable
    index among tied leaving rows.  Terminates on every well-posed input."""
    m = tableau.shape[0] - 1
    for _ in range(MAX_PIVOTS):
        reduced = tableau[-1, :-1]
        candidates = np.nonzero(reduced < -PIVOT_TOL)[0]
        if candidates.size == 0:
            return OPTIMAL
        col = int(candidates[0])
        column = tableau[:m, col]
        rhs = tableau[:m, -1]
        best_row = -1
        best_ratio = np.inf
        for i in range(m):
            if column[i] > PIVOT_TOL:
                ratio = rhs[i] / column[i]
                if ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[best_row]
                ):
                    best_ratio = ratio
                    best_row = i
        if best_row < 0:
            return UNBOUNDED
        _pivot(tableau, best_row, col)
        basis[best_row] = col
    raise NumericalFailure(f"no convergence within {MAX_PIVOTS} pivots")


def lp_solve(lp: LinearProgram) -> LpSolution:
    """Global optimum of ``lp`` or the correct infeasible/unbounded status."""
    nv = lp.num_vars
    n_eq = len(lp.eq_constraints)
    n_ge = len(lp.ge_constraints)
    m = n_eq + n_ge
    ncols = nv + n_ge  # structural variables plus one surplus per ge row

    if m == 0:
        # Only the nonnegativity cone: optimum at the origin unless some
        # objective coefficient points outward.
        if any(c > PIVOT_TOL for c in lp.objective):
            return LpSolution(UNBOUNDED)
        point = (0.0,) * nv
        return LpSolution(OPTIMAL, 0.0, point)

    body = np.zeros((m, ncols))
    rhs = np.zeros(m)
    for i, (row, b) in enumerate(lp.eq_constraints):
        body[i, :nv] = row
        rhs[i] = b
    for j, (row, b) in enumerate(lp.ge_constraints):
        i = n_eq + j
        body[i, :nv] = row
        body[i, nv + j] = -1.0
        rhs[i] = b
    negative = rhs < 0.0
    body[negative] *= -1.0
    rhs[negative] *= -1.0

    # Phase one: drive an identity of artificial columns out of the basis.
    tableau = np.zeros((m + 1, ncols + m + 1))
    tableau[:m, :ncols] = body
    tableau[:m, ncols : ncols + m] = np.eye(m)
    tableau[:m, -1] = rhs
    basis = list(range(ncols, ncols + m))
    costs1 = np.zeros(ncols + m)
    costs1[ncols:] = -1.0
    _objective_row(tableau, costs1, basis)
    status = _simplex(tableau, basis)
    if status != OPTIMAL:  # pragma: no cover - phase-one objective is bounded
        raise NumericalFailure("phase one reported an unbounded direction")
    if tableau[-1, -1] < -FEASIBILITY_TOL:
        return LpSolution(INFEASIBLE)

    # Pivot remaining artificials (at level zero) out of the basis; rows that
    # offer no pivot are redundant and can be dropped.
    drop: list[int] = []
    for i in range(m):
        if basis[i] >= ncols:
            structural = np.nonzero(np.abs(tableau[i, :ncols]) > PIVOT_TOL)[0]
            if structural.size:
                _pivot(tableau, i, int(structural[0]))
                basis[i] = int(structural[0])
            else:
                drop.append(i)
    if drop:
        keep = [i for i in range(m) if i not in drop]
        tableau = tableau[keep + [m], :]
        basis = [basis[i] for i in keep]
        m = len(keep)

    # Phase two on the original objective, artificial columns removed.
    tableau = np.hstack([tableau[:, :ncols], tableau[:, -1:]])
    costs2 = np.zeros(ncols)
    costs2[:nv] = lp.objective
    _objective_row(tableau, costs2, basis)
    status = _simplex(tableau, basis)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED)

    point = np.zeros(nv)
    for i, bi in enumerate(basis):
        if bi < nv:
            point[bi] = tableau[i, -1]
    value = float(np.dot(np.asarray(lp.objective), point))
    return LpSolution(OPTIMAL, value, tuple(float(v) for v in point))
