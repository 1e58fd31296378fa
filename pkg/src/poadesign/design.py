"""Class-level price-of-anarchy programs and optimal utility synthesis.

The worst case over a whole family of games with a fixed curve pair reduces
to a linear program over aggregated resource masses indexed by triples
(a, x, b): per resource, the counts of players selecting it only at
equilibrium, at both equilibrium and optimum, and only at optimum.  The
inverse of the program's optimal value is the family's price of anarchy.
Transposing the same program with the utility curve freed yields the curve
that maximizes the guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .game import BasisPair, UncertaintyLevel, as_uncertainty
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    NumericalFailure,
    lp_solve,
)

METHOD_PRIMAL = "primal_lp"
METHOD_DUAL = "dual_lp"
METHOD_CLOSED_FORM = "closed_form"

PROVENANCE_DESIGN_LP = "design_lp"
PROVENANCE_SETCOVER_RECURSION = "setcover_recursion"
PROVENANCE_SETCOVER_LIMIT = "setcover_limit"


@dataclass(frozen=True, order=True)
class TripleIndex:
    """Per-resource player counts: equilibrium-only, shared, optimum-only."""

    a: int
    x: int
    b: int


@dataclass(frozen=True)
class PoaReport:
    """A price-of-anarchy value with the certificate that produced it."""

    poa: float
    method: str
    certificate: dict

    def to_dict(self) -> dict:
        return {"poa": self.poa, "method": self.method, "certificate": self.certificate}


@dataclass(frozen=True)
class UtilityDesign:
    """A utility curve u over coverage 0..n with u[0] = 0 and u[1] = 1."""

    u: tuple[float, ...]
    provenance: str

    def __post_init__(self) -> None:
        if len(self.u) < 2:
            raise ValueError("a design needs at least coverage levels 0 and 1")
        if self.u[0] != 0.0:
            raise ValueError("u[0] must be 0")
        if self.u[1] != 1.0:
            raise ValueError("u[1] must be exactly 1 (normalize before constructing)")

    @property
    def n(self) -> int:
        return len(self.u) - 1

    def to_dict(self) -> dict:
        return {"u": list(self.u), "provenance": self.provenance}


def _amplification(delta: UncertaintyLevel) -> float:
    return (1.0 + delta.delta) / (1.0 - delta.delta)


def enumerate_triples(n: int) -> list[TripleIndex]:
    """All (a, x, b) with 1 <= a+x+b <= n, lexicographic; C(n+3,3) - 1 many."""
    if n < 1:
        raise ValueError(f"player count must be >= 1, got {n}")
    return [
        TripleIndex(a, x, b)
        for a in range(n + 1)
        for x in range(n + 1 - a)
        for b in range(n + 1 - a - x)
        if a + x + b >= 1
    ]


def build_primal_lp(basis: BasisPair, delta: UncertaintyLevel | float) -> LinearProgram:
    """Mass program whose optimal value is the inverse class guarantee.

    Variables are nonnegative masses theta(a, x, b).  The objective is the
    optimum-side welfare, the single >= row is the summed equilibrium
    condition with the amplification factor (1+delta)/(1-delta) on the
    staying side, and the equality row pins the equilibrium-side welfare
    to one.
    """
    delta = as_uncertainty(delta)
    big = _amplification(delta)
    w, u, n = basis.w, basis.u, basis.n
    triples = enumerate_triples(n)
    objective = [w[t.b + t.x] for t in triples]
    # When b >= 1 the deviation index a+x+1 never exceeds n, so u is only
    # ever read in range.
    nash_row = [
        big * t.a * u[t.a + t.x] - (t.b * u[t.a + t.x + 1] if t.b else 0.0)
        for t in triples
    ]
    eq_row = [w[t.a + t.x] for t in triples]
    return LinearProgram(
        num_vars=len(triples),
        objective=objective,
        eq_constraints=[(eq_row, 1.0)],
        ge_constraints=[(nash_row, 0.0)],
    )


def poa_class(basis: BasisPair, delta: UncertaintyLevel | float) -> PoaReport:
    """Tight price-of-anarchy guarantee for the family with this curve pair.

    An unbounded mass program means the guarantee is vacuous (reported as 0).
    Infeasibility cannot occur: unit mass on the shared-coverage triple
    (0, 1, 0) is always feasible, so the optimal value is at least 1.
    """
    delta = as_uncertainty(delta)
    sol = lp_solve(build_primal_lp(basis, delta))
    if sol.status == UNBOUNDED:
        return PoaReport(0.0, METHOD_PRIMAL, {"unbounded": True})
    if sol.status != OPTIMAL:  # pragma: no cover - see docstring
        raise NumericalFailure(f"mass program reported {sol.status}")
    triples = enumerate_triples(basis.n)
    theta = {
        f"{t.a},{t.x},{t.b}": v
        for t, v in zip(triples, sol.point)
        if v != 0.0
    }
    return PoaReport(1.0 / sol.value, METHOD_PRIMAL, {"value": sol.value, "theta": theta})


def _normalize_welfare(w: Sequence[float], n: int) -> tuple[float, ...]:
    w = tuple(float(v) for v in w)
    if len(w) != n + 1:
        raise ValueError(f"w must have n+1={n + 1} entries, got {len(w)}")
    if w[0] != 0.0:
        raise ValueError("w[0] must be 0")
    if w[1] <= 0.0:
        raise ValueError("w[1] must be positive")
    w = tuple(v / w[1] for v in w)
    if any(v <= 0.0 for v in w[1:]):
        raise ValueError("w[k] must be positive for all k >= 1")
    return w


def build_design_lp(
    w: Sequence[float], n: int, delta: UncertaintyLevel | float
) -> LinearProgram:
    """Synthesis program: free variables u(1..n) and mu, minimize mu.

    One inequality per triple keeps every aggregated game's optimum-side
    welfare below mu times its equilibrium-side welfare; u(1) is pinned to 1.
    Free variables are encoded as differences of nonnegative pairs, laid out
    as [u1+, u1-, ..., un+, un-, mu+, mu-].
    """
    delta = as_uncertainty(delta)
    w = _normalize_welfare(w, n)
    big = _amplification(delta)
    num_vars = 2 * n + 2
    mu_pos, mu_neg = 2 * n, 2 * n + 1

    def u_cols(k: int) -> tuple[int, int]:
        return 2 * (k - 1), 2 * (k - 1) + 1

    ge_rows = []
    for t in enumerate_triples(n):
        row = [0.0] * num_vars
        row[mu_pos] += w[t.a + t.x]
        row[mu_neg] -= w[t.a + t.x]
        if t.a:
            pos, neg = u_cols(t.a + t.x)
            row[pos] -= big * t.a
            row[neg] += big * t.a
        if t.b:
            pos, neg = u_cols(t.a + t.x + 1)
            row[pos] += t.b
            row[neg] -= t.b
        ge_rows.append((row, w[t.b + t.x]))

    norm_row = [0.0] * num_vars
    norm_row[0], norm_row[1] = 1.0, -1.0

    objective = [0.0] * num_vars
    objective[mu_pos], objective[mu_neg] = -1.0, 1.0
    return LinearProgram(
        num_vars=num_vars,
        objective=objective,
        eq_constraints=[(norm_row, 1.0)],
        ge_constraints=ge_rows,
    )


def _round_sig(value: float, digits: int = 12) -> float:
    if value == 0.0:
        return 0.0
    return float(f"{value:.{digits}g}")


def optimal_design(
    w: Sequence[float], n: int, delta: UncertaintyLevel | float
) -> tuple[UtilityDesign, PoaReport]:
    """Utility curve maximizing the class guarantee for welfare curve ``w``.

    Returns the curve and a report with poa = 1/mu*.  The synthesized curve
    satisfies poa_class(w, u*, delta) == 1/mu* (they are the same program in
    primal and transposed form).
    """
    delta = as_uncertainty(delta)
    lp = build_design_lp(w, n, delta)
    sol = lp_solve(lp)
    if sol.status == INFEASIBLE:
        raise ValueError(
            "no utility curve admits a guarantee for this welfare curve "
            "(it must not grow faster than coverage)"
        )
    if sol.status != OPTIMAL:
        raise NumericalFailure(f"synthesis program reported {sol.status}")
    mu = sol.point[2 * n] - sol.point[2 * n + 1]
    raw = [sol.point[2 * (k - 1)] - sol.point[2 * (k - 1) + 1] for k in range(1, n + 1)]
    scale = raw[0]
    u = (0.0,) + tuple(_round_sig(v / scale) for v in raw)
    design = UtilityDesign(u, PROVENANCE_DESIGN_LP)
    report = PoaReport(1.0 / mu, METHOD_DUAL, {"mu": mu, "u": list(u)})
    return design, report
