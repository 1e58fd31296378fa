"""Brute-force verification tools independent of the program machinery.

These sweeps and witnesses exist to check the class-level guarantees the
hard way: enumerate explicit small games, pick the adversarial valuations,
and measure every equilibrium directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .game import (
    Allocation,
    BasisPair,
    BudgetExceeded,
    EQUILIBRIUM_TOL,
    GameInstance,
    NO_EQUILIBRIUM,
    UncertaintyLevel,
    as_uncertainty,
    game_to_json,
    is_equilibrium,
    poa_of_instance,
    utility,
)

DEFAULT_SWEEP_BUDGET = 2_000_000


def extremal_valuations(
    game: GameInstance,
    a_ne: Allocation,
    a_opt: Allocation,
    delta: UncertaintyLevel | float,
) -> GameInstance:
    """Adversarial valuations for a candidate equilibrium/optimum pair.

    Each player overvalues to the interval endpoint what it holds only in
    ``a_ne``, undervalues what it holds only in ``a_opt`` and estimates
    everything else correctly.  This is the assignment that tightens the
    summed equilibrium condition the most, so it is the right adversary when
    probing how bad an instance of the class can get.
    """
    delta = as_uncertainty(delta)
    over = 1.0 + delta.delta
    under = 1.0 - delta.delta
    valuations = []
    for i in range(game.n):
        ne_action = game.action_sets[i][a_ne.choices[i]]
        opt_action = game.action_sets[i][a_opt.choices[i]]
        row = []
        for r, true_value in enumerate(game.true_values):
            in_ne = r in ne_action
            in_opt = r in opt_action
            if in_ne and not in_opt:
                row.append(over * true_value)
            elif in_opt and not in_ne:
                row.append(under * true_value)
            else:
                row.append(true_value)
        valuations.append(tuple(row))
    return replace(game, valuations=tuple(valuations))


def _all_subsets(m: int) -> list[frozenset[int]]:
    return [
        frozenset(c)
        for size in range(m + 1)
        for c in itertools.combinations(range(m), size)
    ]


def _interval_grids(
    game: GameInstance, delta: UncertaintyLevel
) -> Iterable[GameInstance]:
    """Every combination of endpoint/true valuations, for skepticism runs."""
    levels = [1.0 - delta.delta, 1.0, 1.0 + delta.delta]
    cells = [(i, r) for i in range(game.n) for r in range(game.m)]
    for combo in itertools.product(levels, repeat=len(cells)):
        valuations = [list(game.true_values) for _ in range(game.n)]
        for (i, r), factor in zip(cells, combo):
            valuations[i][r] = factor * game.true_values[r]
        yield replace(game, valuations=tuple(tuple(row) for row in valuations))


def brute_force_class_poa(
    basis: BasisPair,
    delta: UncertaintyLevel | float,
    m: int,
    value_grid: Sequence[float],
    budget: int = DEFAULT_SWEEP_BUDGET,
    full_valuation_grid: bool = False,
    tol: float = EQUILIBRIUM_TOL,
) -> tuple[float, GameInstance]:
    """Worst instance over all two-action games on ``m`` resources.

    Action pairs range over all subsets, resource values over the grid.  For
    each candidate the equilibrium/optimum roles are fixed, valuations are
    set adversarially (or swept over all interval endpoints when
    ``full_valuation_grid`` is set), and candidates whose designated action
    profile fails the equilibrium check are discarded.  Returns the minimum
    measured price of anarchy and its witness; ties break toward the
    lexicographically smallest serialized witness so runs are reproducible.
    """
    delta = as_uncertainty(delta)
    n = basis.n
    if n > 3 or m > 4:
        raise ValueError("sweep is limited to n <= 3 players and m <= 4 resources")
    subsets = _all_subsets(m)
    pair_count = len(subsets) ** 2
    total = (pair_count**n) * (len(value_grid) ** m)
    if full_valuation_grid:
        total *= 3 ** (n * m)
    if total > budget:
        raise BudgetExceeded(f"sweep would evaluate {total} games, budget is {budget}")

    a_ne = Allocation((0,) * n)
    a_opt = Allocation((1,) * n)
    worst: tuple[float, str] | None = None
    witness: GameInstance | None = None

    for values in itertools.product(value_grid, repeat=m):
        for assignment in itertools.product(range(pair_count), repeat=n):
            actions = []
            for code in assignment:
                ne_action = subsets[code // len(subsets)]
                opt_action = subsets[code % len(subsets)]
                actions.append((ne_action, opt_action))
            skeleton = GameInstance(basis, values, actions, [values] * n)
            if full_valuation_grid:
                candidates = _interval_grids(skeleton, delta)
            else:
                candidates = (extremal_valuations(skeleton, a_ne, a_opt, delta),)
            for game in candidates:
                if not is_equilibrium(game, a_ne, tol):
                    continue
                poa = poa_of_instance(game, tol=tol)
                assert poa is not NO_EQUILIBRIUM
                key = (poa, game_to_json(game))
                if worst is None or key < worst:
                    worst = key
                    witness = game
    assert worst is not None and witness is not None
    return worst[0], witness


def no_pne_example(d: float) -> GameInstance:
    """Two players, four unit resources, sole-coverage utility, no equilibrium.

    The players hold mirrored over/under estimates of alternating resources
    and their two actions split the resources in crossing pairs, which sets
    up a best-response cycle for any 0 < d < 1.
    """
    if not 0.0 < d < 1.0:
        raise ValueError(f"deviation must be in (0, 1), got {d}")
    basis = BasisPair(2, (0.0, 1.0, 1.0), (0.0, 1.0, 0.0))
    return GameInstance(
        basis,
        (1.0, 1.0, 1.0, 1.0),
        [({0, 1}, {2, 3}), ({0, 3}, {1, 2})],
        [(1 + d, 1 - d, 1 + d, 1 - d), (1 - d, 1 + d, 1 - d, 1 + d)],
    )


@dataclass(frozen=True)
class BestResponseRun:
    """Trace of sequential best responses from a starting allocation."""

    path: tuple[Allocation, ...]
    reached_equilibrium: bool

    @property
    def cycled(self) -> bool:
        return not self.reached_equilibrium

    @property
    def steps(self) -> int:
        return len(self.path) - 1


def best_response_path(
    game: GameInstance,
    start: Allocation,
    max_steps: int = 1000,
    tol: float = EQUILIBRIUM_TOL,
) -> BestResponseRun:
    """Iterate best responses until an equilibrium or a revisited state.

    Each step moves the lowest-indexed player with a strictly improving
    deviation to its best response (lowest action index on ties), so the
    trace is deterministic.
    """
    current = start
    path = [current]
    seen = {current.choices}
    for _ in range(max_steps):
        mover = None
        best_choice = None
        for i in range(game.n):
            base = utility(game, i, current)
            best_value = base
            choice = None
            for alt in range(len(game.action_sets[i])):
                if alt == current.choices[i]:
                    continue
                candidate = Allocation(
                    current.choices[:i] + (alt,) + current.choices[i + 1 :]
                )
                value = utility(game, i, candidate)
                if value > best_value + tol:
                    best_value = value
                    choice = alt
            if choice is not None:
                mover, best_choice = i, choice
                break
        if mover is None:
            return BestResponseRun(tuple(path), reached_equilibrium=True)
        current = Allocation(
            current.choices[:mover] + (best_choice,) + current.choices[mover + 1 :]
        )
        path.append(current)
        if current.choices in seen:
            return BestResponseRun(tuple(path), reached_equilibrium=False)
        seen.add(current.choices)
    return BestResponseRun(tuple(path), reached_equilibrium=False)
