"""Strategy extraction from value estimates."""
import logging
from typing import FrozenSet, Optional, Sequence, Tuple

from .analysis import attractor_layers, compute_zero_states
from .game import Number, Player, StochasticGame, Strategy
from .values import argbest

logger = logging.getLogger(__name__)


def extract_strategies(
    game: StochasticGame,
    values: Sequence[Number],
    tol: float = 1e-9,
    zero_states: Optional[FrozenSet[int]] = None,
) -> Tuple[Strategy, Strategy]:
    """
    Optimal-looking strategy pair for a value estimate.

    Minimizer takes the lowest-indexed argmin. Maximizer picks among its
    near-optimal actions one that makes progress towards targets or zero
    states, so it is not stuck in a cycle of equally valued states.
    """
    tau = Strategy(Player.MIN, {s: argbest(game, values, s, tol)[0] for s in game.min_states})
    optimal = {s: argbest(game, values, s, tol) for s in game.max_states}

    if zero_states is None:
        zero_states = compute_zero_states(game)

    def allowed(s: int):
        return optimal[s] if game.is_max(s) else (tau[s],)

    layer, hits = attractor_layers(game, game.targets | zero_states, allowed)
    choices = {}
    for s in game.max_states:
        progressing = sorted(hits.get(s, ())) if layer.get(s, 0) > 0 else []
        choices[s] = progressing[0] if progressing else optimal[s][0]
    return Strategy(Player.MAX, choices), tau
