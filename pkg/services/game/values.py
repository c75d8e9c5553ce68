"""Value arithmetic shared by all solvers: state-action values, best exits, Bellman operator."""
from fractions import Fraction
from typing import Collection, Sequence, Union

import numpy as np

from .game import Number, StochasticGame


def is_exact(values: Sequence[Number]) -> bool:
    return len(values) > 0 and isinstance(values[0], Fraction)


def value_of_state_action(game: StochasticGame, values: Sequence[Number], s: int, a: int) -> Number:
    """Σ δ(s,a,s')·values(s'); exact when values are Fractions."""
    successors = game.actions[s][a].successors
    if is_exact(values):
        return sum((p * values[t] for t, p in successors), Fraction(0))
    return sum(float(p) * float(values[t]) for t, p in successors)


def action_values(game: StochasticGame, values: np.ndarray) -> np.ndarray:
    """Float values of every state-action pair, in transition-matrix row order."""
    return game.transition_matrix @ values


def bellman(game: StochasticGame, values: np.ndarray) -> np.ndarray:
    """One Bellman application: max over actions for Maximizer, min for Minimizer."""
    sa = action_values(game, values)
    starts = game.choice_offsets[:-1]
    best_max = np.maximum.reduceat(sa, starts)
    best_min = np.minimum.reduceat(sa, starts)
    return np.where(game.max_mask, best_max, best_min)


def best_exit(game: StochasticGame, upper: Sequence[Number], states: Collection[int]) -> Number:
    """
    Best Maximizer exit of a state set under the given upper bound.

    Returns 0 when no Maximizer state has an action leaving the set.
    """
    members = states if isinstance(states, (set, frozenset)) else frozenset(states)
    best: Union[float, Fraction, None] = None
    for s in sorted(members):
        if not game.is_max(s):
            continue
        for a, act in enumerate(game.actions[s]):
            if act.post <= members:
                continue
            v = value_of_state_action(game, upper, s, a)
            if best is None or v > best:
                best = v
    if best is None:
        return Fraction(0) if is_exact(upper) else 0.0
    return best


def bellman_residual(game: StochasticGame, values: Sequence[Number]) -> Number:
    """Largest violation of the Bellman equations, with targets pinned to 1."""
    worst = Fraction(0) if is_exact(values) else 0.0
    for s in game.states:
        if s in game.targets:
            expected = 1
        else:
            candidates = [value_of_state_action(game, values, s, a) for a in range(len(game.actions[s]))]
            expected = max(candidates) if game.is_max(s) else min(candidates)
        worst = max(worst, abs(values[s] - expected))
    return worst


def argbest(game: StochasticGame, values: Sequence[Number], s: int, tol: Number = 0) -> list:
    """Indices of actions within tol of the owner's optimum, ascending."""
    vals = [value_of_state_action(game, values, s, a) for a in range(len(game.actions[s]))]
    if game.is_max(s):
        best = max(vals)
        return [a for a, v in enumerate(vals) if v >= best - tol]
    best = min(vals)
    return [a for a, v in enumerate(vals) if v <= best + tol]
