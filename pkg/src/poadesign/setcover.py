"""Closed forms for set covering games under bounded valuation uncertainty.

For the welfare that simply counts covered value, everything is explicit:
the guarantee of an arbitrary utility curve, the optimal curve for any
player count (by a downward recursion and in closed form), its infinite-
player limit with guarantee 1 - exp(-1/B), the degradation when the curve
is designed for the wrong uncertainty level, and a concrete worst-case game
generator whose equilibrium attains the bound.  B denotes the amplification
factor (1+delta)/(1-delta) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .design import (
    PROVENANCE_SETCOVER_LIMIT,
    PROVENANCE_SETCOVER_RECURSION,
    UtilityDesign,
)
from .game import Allocation, BasisPair, GameInstance, UncertaintyLevel, as_uncertainty
from .oracle import extremal_valuations

SERIES_REL_TOL = 1e-14
MAX_FINITE_PLAYERS = 20  # factorial growth; beyond this the closed form overflows
MAX_WORSTCASE_PLAYERS = 8  # resource count grows factorially in the player count


class SizeExceeded(ValueError):
    """Requested instance is beyond the supported factorial growth range."""


@dataclass(frozen=True)
class Amplification:
    """Worst-case ratio between an over- and under-estimate of one value."""

    b_factor: float

    def __post_init__(self) -> None:
        if self.b_factor < 1.0:
            raise ValueError("amplification factor is always >= 1")


@dataclass(frozen=True)
class MismatchReport:
    """Guarantee achieved when the design targets the wrong uncertainty."""

    delta_design: UncertaintyLevel
    delta_true: UncertaintyLevel
    poa: float
    regime: str

    def to_dict(self) -> dict:
        return {
            "delta_design": self.delta_design.delta,
            "delta_true": self.delta_true.delta,
            "poa": self.poa,
            "regime": self.regime,
        }


def amplification(delta: UncertaintyLevel | float) -> Amplification:
    delta = as_uncertainty(delta)
    return Amplification((1.0 + delta.delta) / (1.0 - delta.delta))


def _curve(u: UtilityDesign | Sequence[float]) -> tuple[float, ...]:
    values = tuple(u.u) if isinstance(u, UtilityDesign) else tuple(float(v) for v in u)
    if len(values) < 2 or values[0] != 0.0 or values[1] != 1.0:
        raise ValueError("utility curve must start with u[0]=0, u[1]=1")
    return values


def setcover_poa(
    u: UtilityDesign | Sequence[float],
    delta: UncertaintyLevel | float,
    n: int | None = None,
) -> float:
    """Guarantee of curve ``u`` over set covering games with n players.

    The binding quantity is the largest over j in 1..n-1 of three candidate
    constraint values; the guarantee is its inverse.
    """
    values = _curve(u)
    if n is None:
        n = len(values) - 1
    if n < 2:
        raise ValueError("need at least two players")
    if len(values) < n + 1:
        raise ValueError(f"curve has {len(values) - 1} coverage levels, need {n}")
    big = amplification(delta).b_factor
    worst = -math.inf
    for j in range(1, n):
        worst = max(
            worst,
            big * (j + 1) * values[j + 1],
            big * j * values[j + 1] + 1.0,
            big * j * values[j] - values[j + 1] + 1.0,
        )
    return 1.0 / worst


def optimal_poa_finite(n: int, delta: UncertaintyLevel | float) -> float:
    """Best achievable set covering guarantee with exactly n players."""
    if not 2 <= n <= MAX_FINITE_PLAYERS:
        raise SizeExceeded(f"player count must be in [2, {MAX_FINITE_PLAYERS}], got {n}")
    big = amplification(delta).b_factor
    denom = 1.0 / (big**n * (n - 1) * math.factorial(n - 1))
    denom += sum(big**-k / math.factorial(k) for k in range(n))
    return 1.0 - 1.0 / denom


def optimal_design_finite(
    n: int, delta: UncertaintyLevel | float
) -> tuple[UtilityDesign, float]:
    """Optimal curve for n players, generated by the downward recursion.

    The recursion starts from the top coverage level and balances each
    binding constraint pair; normalizing the result to u(1)=1 gives the
    curve, and its guarantee equals :func:`optimal_poa_finite`.
    """
    if not 2 <= n <= MAX_FINITE_PLAYERS:
        raise SizeExceeded(f"player count must be in [2, {MAX_FINITE_PLAYERS}], got {n}")
    big = amplification(delta).b_factor
    raw = [0.0] * (n + 1)
    raw[n] = 1.0
    for j in range(n - 1, 0, -1):
        raw[j] = raw[j + 1] / (big * j) + (n - 1) * raw[n] / j
    scale = raw[1]
    u = (0.0,) + tuple(raw[k] / scale for k in range(1, n + 1))
    return UtilityDesign(u, PROVENANCE_SETCOVER_RECURSION), optimal_poa_finite(n, delta)


def optimal_design_closed_form(n: int, delta: UncertaintyLevel | float) -> tuple[float, ...]:
    """The same curve as :func:`optimal_design_finite`, evaluated directly.

    u(j) is a partial exponential-series tail scaled by B^(j-1) (j-1)! and a
    small top-level correction; the recursion and this expression agree to
    full precision.  Kept separate so the two routes can check each other.
    """
    if not 2 <= n <= MAX_FINITE_PLAYERS:
        raise SizeExceeded(f"player count must be in [2, {MAX_FINITE_PLAYERS}], got {n}")
    big = amplification(delta).b_factor

    def tail(j: int) -> float:
        correction = 1.0 / (big**n * (n - 1) * math.factorial(n - 1))
        return correction + sum(big**-k / math.factorial(k) for k in range(j, n))

    denom = tail(1)
    u = [0.0] + [
        big ** (j - 1) * math.factorial(j - 1) * tail(j) / denom for j in range(1, n + 1)
    ]
    u[1] = 1.0
    return tuple(u)


def optimal_design_limit(delta: UncertaintyLevel | float, j_max: int) -> UtilityDesign:
    """Infinite-player optimal curve, evaluated at coverage 1..j_max.

    Each entry is the series sum_{k>=j} (j-1)! / (B^(k-j+1) (e^(1/B)-1) k!),
    truncated once a term drops below 1e-14 of the running sum.  The j=1
    entry telescopes to exactly 1; the computed curve is normalized by it so
    the identity holds bit-for-bit.
    """
    if j_max < 1:
        raise ValueError("need at least one coverage level")
    big = amplification(delta).b_factor
    scale = math.exp(1.0 / big) - 1.0

    def series(j: int) -> float:
        term = 1.0 / (big * j)  # k = j term: (j-1)!/(B * j!)
        total = term
        k = j
        while True:
            k += 1
            term /= big * k
            total += term
            if term < SERIES_REL_TOL * total:
                return total

    values = [series(j) / scale for j in range(1, j_max + 1)]
    first = values[0]
    u = (0.0,) + tuple(v / first for v in values)
    return UtilityDesign(u, PROVENANCE_SETCOVER_LIMIT)


def optimal_poa_limit(delta: UncertaintyLevel | float) -> float:
    """Best set covering guarantee over any number of players: 1 - e^(-1/B)."""
    big = amplification(delta).b_factor
    return 1.0 - math.exp(-1.0 / big)


def mismatch_poa(
    delta_design: UncertaintyLevel | float, delta_true: UncertaintyLevel | float
) -> MismatchReport:
    """Guarantee of the curve designed for one uncertainty under another.

    With B the design-side and B_t the realized amplification factor and
    D = 1/(e^(1/B) - 1), the inverse guarantee is
    (B_t/B - 1) u*(2) + (B_t/B) D + 1 when the design underestimates and
    (B_t/B) D + 1 when it overestimates; both branches coincide at equality
    and reproduce 1 - e^(-1/B) there.
    """
    delta_design = as_uncertainty(delta_design)
    delta_true = as_uncertainty(delta_true)
    big = amplification(delta_design).b_factor
    big_true = amplification(delta_true).b_factor
    depth = 1.0 / (math.exp(1.0 / big) - 1.0)
    ratio = big_true / big
    if delta_design.delta <= delta_true.delta:
        u2 = optimal_design_limit(delta_design, 2).u[2]
        inverse = (ratio - 1.0) * u2 + ratio * depth + 1.0
        regime = "underestimate"
    else:
        inverse = ratio * depth + 1.0
        regime = "overestimate"
    return MismatchReport(delta_design, delta_true, 1.0 / inverse, regime)


def _worstcase_labels(n: int) -> list[tuple[int, ...]]:
    """Distinct-player sequences, first player never index 0, lexicographic."""
    labels: list[tuple[int, ...]] = []
    for k in range(1, n + 1):
        labels.extend(p for p in permutations(range(n), k) if p[0] != 0)
    return labels


def build_worstcase_game(n: int, delta: UncertaintyLevel | float) -> GameInstance:
    """Explicit set covering game whose equilibrium attains the n-player bound.

    Resources come in groups 0..n of true value B^k.  Group 0 is a single
    resource selected by player 0 in both of its actions and by everyone in
    the equilibrium action.  A group-k resource carries a length-k label of
    distinct players (never starting with player 0): the label's last player
    selects it in the optimum action, the players outside the label select
    it in the equilibrium action.  Valuations sit at the admissible interval
    endpoints: overvalued where a resource is held only at equilibrium,
    undervalued where it is held only at the optimum.

    Each player has exactly two actions, index 0 the equilibrium one and
    index 1 the optimum one.  The instance carries the optimal utility curve
    for (n, delta), so its measured price of anarchy matches
    :func:`optimal_poa_finite`.
    """
    delta = as_uncertainty(delta)
    if not 2 <= n <= MAX_WORSTCASE_PLAYERS:
        raise SizeExceeded(
            f"player count must be in [2, {MAX_WORSTCASE_PLAYERS}], got {n}"
        )
    big = amplification(delta).b_factor

    values = [1.0]
    ne_sets: list[set[int]] = [{0} for _ in range(n)]  # group-0 resource for everyone
    opt_sets: list[set[int]] = [set() for _ in range(n)]
    opt_sets[0].add(0)
    for label in _worstcase_labels(n):
        r = len(values)
        values.append(big ** len(label))
        opt_sets[label[-1]].add(r)
        members = set(label)
        for i in range(n):
            if i not in members:
                ne_sets[i].add(r)

    design, _ = optimal_design_finite(n, delta)
    basis = BasisPair.set_covering(n, design.u)
    skeleton = GameInstance(
        basis,
        values,
        [(frozenset(ne_sets[i]), frozenset(opt_sets[i])) for i in range(n)],
        [values] * n,
    )
    return extremal_valuations(
        skeleton, Allocation((0,) * n), Allocation((1,) * n), delta
    )
