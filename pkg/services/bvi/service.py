"""
Bounded value iteration for simple stochastic games.

Lower and upper bounds are iterated with the Bellman operator; every
deflate_period iterations the upper bound of simple end component candidates
is lowered to their best Maximizer exit, which removes the spurious fixpoints
that end components create for the upper bound.
"""
import logging
from typing import Callable, FrozenSet, List, Optional

import numpy as np

from ..constants import KEY_DEFLATIONS, KEY_GAP, KEY_SECS
from ..game import (
    BoundsVector,
    SolveResult,
    StochasticGame,
    action_values,
    bellman,
    best_exit,
    compute_sinks,
    compute_zero_states,
    extract_strategies,
    mec_decomposition,
)
from .models import BviConfig

logger = logging.getLogger(__name__)

IterationObserver = Callable[[int, BoundsVector], None]

# Minimizer actions within this distance of the minimum count as optimal
_SEC_TOLERANCE = 1e-10


def initial_bounds(game: StochasticGame, sinks: FrozenSet[int], pin_sinks: bool = True) -> BoundsVector:
    lower = np.zeros(game.num_states)
    upper = np.ones(game.num_states)
    lower[game.target_mask] = 1.0
    if pin_sinks and sinks:
        upper[list(sinks)] = 0.0
    return BoundsVector(lower, upper)


def bellman_step(game: StochasticGame, bounds: BoundsVector, sinks: FrozenSet[int] = frozenset()) -> BoundsVector:
    """Apply the Bellman operator to both bounds; targets pinned to 1, sinks to 0."""
    lower = bellman(game, bounds.lower)
    upper = bellman(game, bounds.upper)
    lower[game.target_mask] = 1.0
    upper[game.target_mask] = 1.0
    if sinks:
        pinned = list(sinks)
        lower[pinned] = 0.0
        upper[pinned] = 0.0
    return BoundsVector(lower, upper)


def find_secs(
    game: StochasticGame,
    lower: np.ndarray,
    excluded: Optional[FrozenSet[int]] = None,
) -> List[FrozenSet[int]]:
    """
    Candidate simple end components: MECs of the game in which every
    Minimizer state keeps only the actions minimizing the lower bound.

    Args:
        game: The game
        lower: Current lower bound
        excluded: States left out of the search (targets are always excluded)
    """
    sa = action_values(game, np.asarray(lower, dtype=float))
    offsets = game.choice_offsets
    allowed = {}
    for s in game.min_states:
        vals = sa[offsets[s]:offsets[s + 1]]
        best = vals.min()
        allowed[s] = [a for a, v in enumerate(vals) if v <= best + _SEC_TOLERANCE]
    skip = game.targets | (excluded or frozenset())
    states = [s for s in game.states if s not in skip]
    return [mec.states for mec in mec_decomposition(game, states, allowed)]


def deflate(game: StochasticGame, upper: np.ndarray, secs: List[FrozenSet[int]]) -> np.ndarray:
    """Lower the upper bound of every member of each SEC to the SEC's best exit."""
    result = np.array(upper, dtype=float, copy=True)
    for sec in secs:
        exit_value = float(best_exit(game, result, sec))
        members = list(sec)
        result[members] = np.minimum(result[members], exit_value)
    return result


class BoundedValueIteration:
    """
    Value iteration solver with a guaranteed error bound.

    Flow:
    1. Initialize L = 0 (1 on targets) and U = 1 (0 on sinks).
    2. Apply Bellman updates to both bounds.
    3. Every k-th iteration find SEC candidates from L and deflate U.
    4. Stop once U - L < epsilon on every state, or at the iteration cap.
    """

    def solve_bvi(
        self,
        game: StochasticGame,
        cfg: Optional[BviConfig] = None,
        observer: Optional[IterationObserver] = None,
    ) -> SolveResult:
        cfg = cfg or BviConfig()
        if not cfg.guaranteed:
            return self.solve_vi(game, cfg)

        sinks = compute_sinks(game)
        pinned = sinks if cfg.pin_sinks else frozenset()
        bounds = initial_bounds(game, sinks, cfg.pin_sinks)
        logger.info(f"BVI on {game.num_states} states, epsilon={cfg.epsilon}, k={cfg.deflate_period}")

        deflations = 0
        last_secs = 0
        gap = bounds.gap()
        iteration = 0
        converged = False
        while iteration < cfg.max_iterations:
            iteration += 1
            step = bellman_step(game, bounds, pinned)
            # bounds are monotone in exact arithmetic; clamp float round-off
            bounds = BoundsVector(
                np.maximum(step.lower, bounds.lower),
                np.minimum(step.upper, bounds.upper),
            )
            if iteration % cfg.deflate_period == 0:
                secs = find_secs(game, bounds.lower, pinned)
                bounds.upper = np.maximum(deflate(game, bounds.upper, secs), bounds.lower)
                deflations += 1
                last_secs = len(secs)
                logger.debug(f"Iteration {iteration}: deflated {len(secs)} SECs, gap {bounds.gap():.3e}")
            if observer is not None:
                observer(iteration, bounds)
            gap = bounds.gap()
            if gap < cfg.epsilon:
                converged = True
                break

        if converged:
            logger.info(f"BVI converged after {iteration} iterations, value {bounds.lower[game.initial]:.9f}")
        else:
            logger.warning(f"BVI hit the cap of {cfg.max_iterations} iterations with gap {gap:.3e}")

        values = bounds.lower.tolist()
        sigma, tau = extract_strategies(game, values, zero_states=compute_zero_states(game))
        return SolveResult(
            values=values,
            sigma=sigma,
            tau=tau,
            iterations=iteration,
            converged=converged,
            gap=gap,
            statistics={KEY_DEFLATIONS: deflations, KEY_GAP: gap, KEY_SECS: last_secs, "upper_initial": float(bounds.upper[game.initial])},
        )

    def solve_vi(self, game: StochasticGame, cfg: Optional[BviConfig] = None) -> SolveResult:
        """
        Plain value iteration from below.

        Stops when the largest per-iteration change drops below epsilon,
        which gives no guarantee on the distance to the true value.
        """
        cfg = cfg or BviConfig()
        sinks = compute_sinks(game)
        lower = initial_bounds(game, sinks).lower
        sink_list = list(sinks)
        logger.info(f"VI on {game.num_states} states, epsilon={cfg.epsilon}")

        iteration = 0
        converged = False
        change = float("inf")
        while iteration < cfg.max_iterations:
            iteration += 1
            updated = bellman(game, lower)
            updated[game.target_mask] = 1.0
            if sink_list:
                updated[sink_list] = 0.0
            updated = np.maximum(updated, lower)
            change = float(np.max(np.abs(updated - lower)))
            lower = updated
            if change < cfg.epsilon:
                converged = True
                break

        if not converged:
            logger.warning(f"VI hit the cap of {cfg.max_iterations} iterations, last change {change:.3e}")
        values = lower.tolist()
        sigma, tau = extract_strategies(game, values)
        return SolveResult(
            values=values,
            sigma=sigma,
            tau=tau,
            iterations=iteration,
            converged=converged,
            gap=None,
            statistics={"last_change": change, "guaranteed": False},
        )


# Global solver instance
bvi_service = BoundedValueIteration()


def solve_bvi(game: StochasticGame, cfg: Optional[BviConfig] = None, observer: Optional[IterationObserver] = None) -> SolveResult:
    return bvi_service.solve_bvi(game, cfg, observer)


def solve_vi(game: StochasticGame, cfg: Optional[BviConfig] = None) -> SolveResult:
    return bvi_service.solve_vi(game, cfg)
