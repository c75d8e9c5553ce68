"""
Explicit-state simple stochastic game and the value containers shared by all solvers.

A game is immutable once built. Exact probabilities are kept as Fractions;
the float transition matrix used by the iterative solvers is derived lazily.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from ..constants import OWNER_MAX, OWNER_MIN

logger = logging.getLogger(__name__)

Number = Union[float, Fraction]
ValueVector = List[Number]


class Player(str, Enum):
    MAX = OWNER_MAX
    MIN = OWNER_MIN


class Action(NamedTuple):
    """One available action: a name and ordered (successor, probability) pairs."""

    name: str
    successors: Tuple[Tuple[int, Fraction], ...]

    @property
    def post(self) -> FrozenSet[int]:
        return frozenset(s for s, _ in self.successors)


@dataclass(frozen=True)
class StochasticGame:
    owners: Tuple[Player, ...]
    actions: Tuple[Tuple[Action, ...], ...]
    initial: int
    targets: FrozenSet[int]

    @property
    def num_states(self) -> int:
        return len(self.owners)

    @property
    def states(self) -> range:
        return range(len(self.owners))

    def is_max(self, s: int) -> bool:
        return self.owners[s] is Player.MAX

    def available(self, s: int) -> Tuple[Action, ...]:
        return self.actions[s]

    def action_label(self, s: int, a: int) -> str:
        """Action name made unique by prefixing the owning state."""
        return f"{s}.{self.actions[s][a].name}"

    def post(self, s: int, a: int) -> FrozenSet[int]:
        return self.actions[s][a].post

    @cached_property
    def max_states(self) -> Tuple[int, ...]:
        return tuple(s for s in self.states if self.owners[s] is Player.MAX)

    @cached_property
    def min_states(self) -> Tuple[int, ...]:
        return tuple(s for s in self.states if self.owners[s] is Player.MIN)

    @cached_property
    def successors(self) -> Tuple[Tuple[int, ...], ...]:
        """Sorted successor states of the underlying graph."""
        return tuple(
            tuple(sorted(set().union(*(act.post for act in acts))))
            for acts in self.actions
        )

    @cached_property
    def predecessors(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """For every state w, the (state, action) pairs with w in their support."""
        preds: List[List[Tuple[int, int]]] = [[] for _ in self.states]
        for s, acts in enumerate(self.actions):
            for a, act in enumerate(acts):
                for t, _ in act.successors:
                    preds[t].append((s, a))
        return tuple(tuple(p) for p in preds)

    @cached_property
    def choice_offsets(self) -> np.ndarray:
        """Row offsets of each state's actions in the transition matrix."""
        counts = [len(acts) for acts in self.actions]
        return np.concatenate(([0], np.cumsum(counts))).astype(np.int64)

    @cached_property
    def transition_matrix(self) -> sparse.csr_matrix:
        """Float matrix with one row per state-action pair."""
        rows, cols, data = [], [], []
        row = 0
        for acts in self.actions:
            for act in acts:
                for t, p in act.successors:
                    rows.append(row)
                    cols.append(t)
                    data.append(float(p))
                row += 1
        return sparse.csr_matrix(
            (np.array(data, dtype=float), (np.array(rows), np.array(cols))),
            shape=(row, self.num_states),
        )

    @cached_property
    def max_mask(self) -> np.ndarray:
        return np.array([o is Player.MAX for o in self.owners], dtype=bool)

    @cached_property
    def target_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_states, dtype=bool)
        mask[list(self.targets)] = True
        return mask

    @cached_property
    def choice_state(self) -> np.ndarray:
        """Owning state of every transition-matrix row."""
        counts = np.diff(self.choice_offsets)
        return np.repeat(np.arange(self.num_states), counts)

    @property
    def num_choices(self) -> int:
        return int(self.choice_offsets[-1])

    def action_count_stats(self) -> Tuple[int, float]:
        counts = [len(acts) for acts in self.actions]
        return max(counts), sum(counts) / len(counts)


class Strategy:
    """Memoryless deterministic choice of an action index for one player's states."""

    __slots__ = ("player", "_choices")

    def __init__(self, player: Player, choices: Mapping[int, int]):
        self.player = player
        self._choices = dict(sorted(choices.items()))

    def __getitem__(self, s: int) -> int:
        return self._choices[s]

    def __contains__(self, s: int) -> bool:
        return s in self._choices

    def __iter__(self):
        return iter(self._choices)

    def __len__(self) -> int:
        return len(self._choices)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Strategy)
            and self.player is other.player
            and self._choices == other._choices
        )

    def __hash__(self) -> int:
        return hash((self.player, tuple(self._choices.items())))

    def __repr__(self) -> str:
        return f"Strategy({self.player.value}, {self._choices})"

    def items(self):
        return self._choices.items()

    def as_dict(self) -> Dict[int, int]:
        return dict(self._choices)

    def with_choices(self, changes: Mapping[int, int]) -> "Strategy":
        merged = dict(self._choices)
        merged.update(changes)
        return Strategy(self.player, merged)

    def validate(self, game: StochasticGame) -> None:
        owned = game.max_states if self.player is Player.MAX else game.min_states
        if set(self._choices) != set(owned):
            raise ValueError(f"{self.player.value} strategy must cover exactly the {self.player.value} states")
        for s, a in self._choices.items():
            if not 0 <= a < len(game.actions[s]):
                raise ValueError(f"action index {a} not available in state {s}")

    def names(self, game: StochasticGame) -> Dict[int, str]:
        return {s: game.actions[s][a].name for s, a in self._choices.items()}


@dataclass(frozen=True)
class InducedChain:
    """Markov chain obtained by fixing both players' strategies."""

    game: StochasticGame
    choices: Tuple[int, ...]
    rows: Tuple[Tuple[Tuple[int, Fraction], ...], ...]


@dataclass(frozen=True)
class Mec:
    """Maximal end component: member states, internal actions, exiting pairs."""

    states: FrozenSet[int]
    internal: Mapping[int, Tuple[int, ...]]
    exits: Tuple[Tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class MecCatalog:
    mecs: Tuple[Mec, ...]

    def __iter__(self):
        return iter(self.mecs)

    def __len__(self) -> int:
        return len(self.mecs)

    def relevant(self, game: StochasticGame, sinks: FrozenSet[int]) -> Tuple[Mec, ...]:
        """MECs containing neither targets nor sinks."""
        excluded = game.targets | sinks
        return tuple(m for m in self.mecs if not (m.states & excluded))


@dataclass
class BoundsVector:
    lower: np.ndarray
    upper: np.ndarray

    def copy(self) -> "BoundsVector":
        return BoundsVector(self.lower.copy(), self.upper.copy())

    def gap(self) -> float:
        return float(np.max(self.upper - self.lower)) if self.lower.size else 0.0

    def is_valid(self, tol: float = 0.0) -> bool:
        return bool(
            np.all(self.lower >= -tol)
            and np.all(self.upper <= 1.0 + tol)
            and np.all(self.lower <= self.upper + tol)
        )


@dataclass
class SolveResult:
    values: ValueVector
    sigma: Strategy
    tau: Strategy
    iterations: int = 0
    converged: bool = True
    gap: Optional[float] = None
    statistics: Dict[str, Any] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return len(self.values) > 0 and isinstance(self.values[0], Fraction)

    def value_at(self, s: int) -> Number:
        return self.values[s]


def as_float_vector(values: Sequence[Number]) -> np.ndarray:
    return np.array([float(v) for v in values], dtype=float)
