"""Explicit resource allocation games with player-specific valuations.

A game couples a resource-agnostic basis pair (welfare curve ``w``, utility
curve ``u`` over coverage counts) with concrete resources, per-player action
sets (subsets of resources) and per-player valuation vectors.  Welfare is
always measured at the true resource values; each player's utility is
measured at that player's own valuations, which is what lets the players'
views of the world disagree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EQUILIBRIUM_TOL = 1e-9
DEFAULT_ALLOCATION_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """Joint action space larger than the enumeration budget."""


class NoEquilibrium:
    """Marker returned by :func:`poa_of_instance` when no equilibrium exists."""

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "NO_EQUILIBRIUM"


NO_EQUILIBRIUM = NoEquilibrium()


@dataclass(frozen=True)
class BasisPair:
    """Resource-agnostic welfare/utility curves over coverage counts 0..n.

    Both curves are normalized so that ``w[1] == u[1] == 1``; the constructor
    rescales raw inputs and rejects curves whose value at coverage one is not
    positive (they cannot be normalized by a positive factor).
    """

    n: int
    w: tuple[float, ...]
    u: tuple[float, ...]

    def __init__(self, n: int, w: Sequence[float], u: Sequence[float]):
        if n < 1:
            raise ValueError(f"player count must be >= 1, got {n}")
        w = tuple(float(v) for v in w)
        u = tuple(float(v) for v in u)
        if len(w) != n + 1 or len(u) != n + 1:
            raise ValueError(
                f"w and u must have n+1={n + 1} entries (coverage 0..n), "
                f"got {len(w)} and {len(u)}"
            )
        if w[0] != 0.0 or u[0] != 0.0:
            raise ValueError("w[0] and u[0] must be 0 (empty coverage)")
        if w[1] <= 0.0:
            raise ValueError(f"w[1] must be positive, got {w[1]}")
        if u[1] <= 0.0:
            raise ValueError(f"u[1] must be positive to normalize, got {u[1]}")
        w = tuple(v / w[1] for v in w)
        u = tuple(v / u[1] for v in u)
        if any(v <= 0.0 for v in w[1:]):
            raise ValueError("w[k] must be positive for all k >= 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "u", u)

    @classmethod
    def set_covering(cls, n: int, u: Sequence[float]) -> "BasisPair":
        """Basis with w == 1 for every covered resource (set covering)."""
        return cls(n, (0.0,) + (1.0,) * n, u)


@dataclass(frozen=True)
class UncertaintyLevel:
    """Maximum relative deviation of any valuation from the true value."""

    delta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"uncertainty level must be in [0, 1), got {self.delta}")


def as_uncertainty(value: "UncertaintyLevel | float") -> UncertaintyLevel:
    if isinstance(value, UncertaintyLevel):
        return value
    return UncertaintyLevel(float(value))


@dataclass(frozen=True)
class Allocation:
    """One chosen action index per player."""

    choices: tuple[int, ...]

    def __init__(self, choices: Iterable[int]):
        choices = tuple(int(c) for c in choices)
        if any(c < 0 for c in choices):
            raise ValueError("action indices must be nonnegative")
        object.__setattr__(self, "choices", choices)


@dataclass(frozen=True)
class GameInstance:
    """An explicit finite game.

    ``action_sets[i]`` is a nonempty tuple of resource subsets available to
    player ``i`` (empty subsets are legal actions).  ``valuations[i][r]`` is
    player ``i``'s estimate of resource ``r``'s value; ``true_values[r]`` is
    the ground truth used for welfare.
    """

    basis: BasisPair
    true_values: tuple[float, ...]
    action_sets: tuple[tuple[frozenset[int], ...], ...]
    valuations: tuple[tuple[float, ...], ...]

    def __init__(
        self,
        basis: BasisPair,
        true_values: Sequence[float],
        action_sets: Sequence[Sequence[Iterable[int]]],
        valuations: Sequence[Sequence[float]],
    ):
        true_values = tuple(float(v) for v in true_values)
        action_sets = tuple(
            tuple(frozenset(int(r) for r in action) for action in player_actions)
            for player_actions in action_sets
        )
        valuations = tuple(tuple(float(v) for v in row) for row in valuations)
        m = len(true_values)
        n = basis.n
        if len(action_sets) != n or len(valuations) != n:
            raise ValueError(
                f"need action sets and valuations for all {n} players, "
                f"got {len(action_sets)} and {len(valuations)}"
            )
        if any(v <= 0.0 for v in true_values):
            raise ValueError("true resource values must be positive")
        for i, row in enumerate(valuations):
            if len(row) != m:
                raise ValueError(f"valuation row {i} has {len(row)} entries, expected {m}")
            if any(v <= 0.0 for v in row):
                raise ValueError(f"player {i} valuations must be positive")
        for i, player_actions in enumerate(action_sets):
            if not player_actions:
                raise ValueError(f"player {i} has an empty action collection")
            for action in player_actions:
                if any(not 0 <= r < m for r in action):
                    raise ValueError(f"player {i} action references invalid resource index")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "true_values", true_values)
        object.__setattr__(self, "action_sets", action_sets)
        object.__setattr__(self, "valuations", valuations)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def m(self) -> int:
        return len(self.true_values)

    # Dense per-action membership rows make coverage counting a vector sum,
    # which keeps the big generated instances (tens of thousands of
    # resources) tractable.
    @cached_property
    def _w_arr(self) -> np.ndarray:
        return np.asarray(self.basis.w, dtype=float)

    @cached_property
    def _u_arr(self) -> np.ndarray:
        return np.asarray(self.basis.u, dtype=float)

    @cached_property
    def _true_arr(self) -> np.ndarray:
        return np.asarray(self.true_values, dtype=float)

    @cached_property
    def _val_arr(self) -> np.ndarray:
        return np.asarray(self.valuations, dtype=float)

    @cached_property
    def _membership(self) -> tuple[np.ndarray, ...]:
        rows = []
        for player_actions in self.action_sets:
            mat = np.zeros((len(player_actions), self.m), dtype=np.int64)
            for k, action in enumerate(player_actions):
                if action:
                    mat[k, sorted(action)] = 1
            rows.append(mat)
        return tuple(rows)

    @cached_property
    def _action_indices(self) -> tuple[tuple[np.ndarray, ...], ...]:
        return tuple(
            tuple(np.fromiter(sorted(action), dtype=np.int64, count=len(action))
                  for action in player_actions)
            for player_actions in self.action_sets
        )


def _check_alloc(game: GameInstance, alloc: Allocation) -> None:
    if len(alloc.choices) != game.n:
        raise ValueError(f"allocation has {len(alloc.choices)} choices for {game.n} players")
    for i, c in enumerate(alloc.choices):
        if c >= len(game.action_sets[i]):
            raise ValueError(f"player {i} has no action index {c}")


def _coverage(game: GameInstance, alloc: Allocation) -> np.ndarray:
    cov = np.zeros(game.m, dtype=np.int64)
    for i, c in enumerate(alloc.choices):
        cov += game._membership[i][c]
    return cov


def coverage_count(game: GameInstance, alloc: Allocation, r: int) -> int:
    """Number of players whose chosen action contains resource ``r``."""
    _check_alloc(game, alloc)
    if not 0 <= r < game.m:
        raise ValueError(f"resource index {r} out of range")
    return int(_coverage(game, alloc)[r])


def welfare(game: GameInstance, alloc: Allocation) -> float:
    """System welfare of an allocation, always at the TRUE resource values."""
    _check_alloc(game, alloc)
    cov = _coverage(game, alloc)
    return float(game._true_arr @ game._w_arr[cov])


def utility(game: GameInstance, i: int, alloc: Allocation) -> float:
    """Player ``i``'s utility, evaluated at its OWN valuations."""
    _check_alloc(game, alloc)
    cov = _coverage(game, alloc)
    idx = game._action_indices[i][alloc.choices[i]]
    if idx.size == 0:
        return 0.0
    return float(game._val_arr[i, idx] @ game._u_arr[cov[idx]])


def uncertainty_of(game: GameInstance) -> float:
    """Largest relative deviation of any player's valuation from the truth."""
    if game.m == 0:
        return 0.0
    return float(np.max(np.abs(game._val_arr - game._true_arr) / game._true_arr))


def _deviation_utility(
    game: GameInstance, i: int, cov: np.ndarray, current: int, alt: int
) -> float:
    """Utility of player ``i`` after unilaterally switching to action ``alt``.

    ``cov`` is the coverage vector of the undisturbed allocation; only the
    resources inside ``alt`` matter for the deviator's utility.
    """
    idx = game._action_indices[i][alt]
    if idx.size == 0:
        return 0.0
    new_cov = cov[idx] - game._membership[i][current][idx] + 1
    return float(game._val_arr[i, idx] @ game._u_arr[new_cov])


def is_equilibrium(
    game: GameInstance, alloc: Allocation, tol: float = EQUILIBRIUM_TOL
) -> bool:
    """True when no player can gain more than ``tol`` by a unilateral switch."""
    _check_alloc(game, alloc)
    cov = _coverage(game, alloc)
    for i, current in enumerate(alloc.choices):
        base = _deviation_utility(game, i, cov, current, current)
        for alt in range(len(game.action_sets[i])):
            if alt == current:
                continue
            if _deviation_utility(game, i, cov, current, alt) > base + tol:
                return False
    return True


def _iter_allocations(game: GameInstance, budget: int) -> Iterable[Allocation]:
    total = 1
    for player_actions in game.action_sets:
        total *= len(player_actions)
    if total > budget:
        raise BudgetExceeded(
            f"joint action space has {total} allocations, budget is {budget}"
        )
    for combo in itertools.product(*(range(len(a)) for a in game.action_sets)):
        yield Allocation(combo)


def enumerate_equilibria(
    game: GameInstance,
    budget: int = DEFAULT_ALLOCATION_BUDGET,
    tol: float = EQUILIBRIUM_TOL,
) -> list[Allocation]:
    """All pure equilibria, in lexicographic order of action indices."""
    return [a for a in _iter_allocations(game, budget) if is_equilibrium(game, a, tol)]


def poa_of_instance(
    game: GameInstance,
    budget: int = DEFAULT_ALLOCATION_BUDGET,
    tol: float = EQUILIBRIUM_TOL,
) -> float | NoEquilibrium:
    """Worst equilibrium welfare over best welfare, at true values.

    Returns ``NO_EQUILIBRIUM`` when the instance has no pure equilibrium.
    A game whose best allocation covers nothing has price of anarchy 1 by
    convention (there is nothing to lose).
    """
    best = -np.inf
    worst_eq = None
    for alloc in _iter_allocations(game, budget):
        value = welfare(game, alloc)
        if value > best:
            best = value
        if is_equilibrium(game, alloc, tol):
            if worst_eq is None or value < worst_eq:
                worst_eq = value
    if worst_eq is None:
        return NO_EQUILIBRIUM
    if best <= 0.0:
        return 1.0
    return worst_eq / best


def game_to_dict(game: GameInstance) -> dict:
    """Interchange form: zero-based resource indices, coverage-indexed curves."""
    return {
        "n": game.n,
        "resources": [{"value": v} for v in game.true_values],
        "actions": [
            [sorted(action) for action in player_actions]
            for player_actions in game.action_sets
        ],
        "valuations": [list(row) for row in game.valuations],
        "w": list(game.basis.w),
        "u": list(game.basis.u),
    }


def game_from_dict(data: dict) -> GameInstance:
    basis = BasisPair(int(data["n"]), data["w"], data["u"])
    return GameInstance(
        basis,
        [res["value"] for res in data["resources"]],
        data["actions"],
        data["valuations"],
    )


def game_to_json(game: GameInstance) -> str:
    return json.dumps(game_to_dict(game), sort_keys=True)


def game_from_json(text: str) -> GameInstance:
    return game_from_dict(json.loads(text))


def with_basis(game: GameInstance, basis: BasisPair) -> GameInstance:
    """Same resources, actions and valuations under a different curve pair."""
    if basis.n != game.n:
        raise ValueError("replacement basis must keep the player count")
    return replace(game, basis=basis)
