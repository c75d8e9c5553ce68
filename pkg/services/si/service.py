"""
Strategy iteration for simple stochastic games.

Starting from a proper Maximizer strategy, the Minimizer MDP induced by the
current strategy is solved and the Maximizer greedily switches to better
actions, until no switch improves.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from ..bvi.service import bellman_step, deflate, find_secs, initial_bounds
from ..constants import KEY_ROUNDS, OPPONENT_BVI, OPPONENT_EXACT
from ..exceptions import PropernessError
from ..game import (
    BoundsVector,
    Number,
    Player,
    SolveResult,
    StochasticGame,
    Strategy,
    action_values,
    attractor_layers,
    attractor_strategy,
    bellman,
    compute_sinks,
    compute_zero_states,
    improper_states,
    induce_and_solve,
    prefer_by_value,
    restrict_to_strategy,
    value_of_state_action,
)
from .models import SiConfig

logger = logging.getLogger(__name__)

RoundObserver = Callable[[int, List[Number]], None]

_FLOAT_TOLERANCE = 1e-12


@dataclass
class BestResponse:
    """Minimizer's optimal reply to a fixed Maximizer strategy."""

    values: List[Number]
    tau: Strategy
    iterations: int


def _tolerance(cfg: SiConfig) -> Number:
    if cfg.exact_rational:
        # a float here would round Fraction comparisons
        return Fraction(0)
    if cfg.opponent_solver == OPPONENT_EXACT:
        return _FLOAT_TOLERANCE
    return cfg.inner_epsilon


def best_response(
    game: StochasticGame,
    sigma: Strategy,
    cfg: Optional[SiConfig] = None,
    init_tau: Optional[Strategy] = None,
) -> BestResponse:
    """
    Solve the Minimizer MDP obtained by fixing sigma.

    Raises:
        PropernessError: sigma lets Minimizer keep the play away from targets
            and zero states
    """
    cfg = cfg or SiConfig()
    if cfg.check_properness:
        bad = improper_states(game, sigma)
        if bad:
            raise PropernessError(bad)
    if cfg.opponent_solver == OPPONENT_EXACT:
        return _policy_iteration(game, sigma, cfg, init_tau)
    if cfg.opponent_solver == OPPONENT_BVI:
        return _bvi_domination(game, sigma, cfg)
    return _lower_iteration(game, sigma, cfg)


def _policy_iteration(game: StochasticGame, sigma: Strategy, cfg: SiConfig, init_tau: Optional[Strategy]) -> BestResponse:
    mdp = restrict_to_strategy(game, sigma)
    zero = compute_zero_states(mdp)
    tol = _tolerance(cfg)

    choices: Dict[int, int] = {}
    for s in game.min_states:
        if s in zero:
            # stay inside the zero region
            choices[s] = next(a for a, act in enumerate(game.actions[s]) if act.post <= zero)
        elif init_tau is not None and s in init_tau:
            choices[s] = init_tau[s]
        else:
            choices[s] = 0
    tau = Strategy(Player.MIN, choices)
    free = [s for s in game.min_states if s not in zero and s not in game.targets and len(game.actions[s]) > 1]

    iterations = 0
    while True:
        iterations += 1
        values = induce_and_solve(game, sigma, tau, game.targets, exact=cfg.exact_rational)
        switches = {}
        for s in free:
            vals = [value_of_state_action(game, values, s, a) for a in range(len(game.actions[s]))]
            best = min(vals)
            if vals[tau[s]] > best + tol:
                switches[s] = next(a for a, v in enumerate(vals) if v <= best + tol)
        if not switches:
            return BestResponse(values, tau, iterations)
        tau = tau.with_choices(switches)


def _argmin_strategy(game: StochasticGame, lower: np.ndarray) -> Strategy:
    sa = action_values(game, lower)
    offsets = game.choice_offsets
    return Strategy(
        Player.MIN,
        {s: int(np.argmin(sa[offsets[s]:offsets[s + 1]])) for s in game.min_states},
    )


def _bvi_domination(game: StochasticGame, sigma: Strategy, cfg: SiConfig) -> BestResponse:
    """
    BVI on the Minimizer MDP that stops as soon as every Minimizer choice is
    decided: one action's upper bound lies below the lower bounds of all
    others. The decided strategy is then evaluated exactly.
    """
    mdp = restrict_to_strategy(game, sigma)
    sinks = compute_sinks(mdp)
    bounds = initial_bounds(mdp, sinks)
    offsets = mdp.choice_offsets
    undecided = [
        s for s in mdp.min_states
        if len(mdp.actions[s]) > 1 and s not in sinks and s not in mdp.targets
    ]

    for iteration in range(1, cfg.inner_max_iterations + 1):
        step = bellman_step(mdp, bounds, sinks)
        bounds = BoundsVector(np.maximum(step.lower, bounds.lower), np.minimum(step.upper, bounds.upper))
        if iteration % cfg.deflate_period == 0:
            secs = find_secs(mdp, bounds.lower, sinks)
            bounds.upper = np.maximum(deflate(mdp, bounds.upper, secs), bounds.lower)

        sa_lower = action_values(mdp, bounds.lower)
        sa_upper = action_values(mdp, bounds.upper)
        dominant = {}
        for s in undecided:
            lo = sa_lower[offsets[s]:offsets[s + 1]]
            up = sa_upper[offsets[s]:offsets[s + 1]]
            a = int(np.argmin(up))
            others = np.delete(lo, a)
            if np.all(up[a] < others):
                dominant[s] = a
        if len(dominant) == len(undecided):
            tau = _argmin_strategy(mdp, bounds.lower).with_choices(dominant)
            values = induce_and_solve(game, sigma, tau, game.targets)
            logger.debug(f"Opponent choices decided by domination after {iteration} iterations")
            return BestResponse(values, tau, iteration)
        if bounds.gap() < cfg.inner_epsilon:
            logger.debug(f"Opponent BVI reached inner precision after {iteration} iterations")
            return BestResponse(bounds.lower.tolist(), _argmin_strategy(mdp, bounds.lower), iteration)

    logger.warning(f"Opponent BVI hit its cap with gap {bounds.gap():.3e}")
    return BestResponse(bounds.lower.tolist(), _argmin_strategy(mdp, bounds.lower), cfg.inner_max_iterations)


def _lower_iteration(game: StochasticGame, sigma: Strategy, cfg: SiConfig) -> BestResponse:
    mdp = restrict_to_strategy(game, sigma)
    lower = initial_bounds(mdp, frozenset()).lower
    for iteration in range(1, cfg.inner_max_iterations + 1):
        updated = bellman(mdp, lower)
        updated[mdp.target_mask] = 1.0
        change = float(np.max(np.abs(updated - lower)))
        lower = updated
        if change < cfg.inner_epsilon:
            break
    return BestResponse(lower.tolist(), _argmin_strategy(mdp, lower), iteration)


def improve(game: StochasticGame, values: Sequence[Number], sigma: Strategy, tol: Number = 0) -> Strategy:
    """Greedy switch to argmax actions; the current action is kept on ties."""
    choices = {}
    for s in game.max_states:
        if s in game.targets or len(game.actions[s]) == 1:
            choices[s] = sigma[s]
            continue
        vals = [value_of_state_action(game, values, s, a) for a in range(len(game.actions[s]))]
        best = max(vals)
        if vals[sigma[s]] >= best - tol:
            choices[s] = sigma[s]
        else:
            choices[s] = next(a for a, v in enumerate(vals) if v >= best - tol)
    return Strategy(Player.MAX, choices)


def make_proper(
    game: StochasticGame,
    candidate: Strategy,
    values: Optional[Sequence[Number]] = None,
) -> Strategy:
    """
    Repair a Maximizer strategy so that targets or zero states are reached
    almost surely. Only states that can get trapped are reassigned, by
    attractor search from the remaining states, preferring higher values.
    """
    zero = compute_zero_states(game)
    bad = improper_states(game, candidate, zero)
    if not bad:
        return candidate
    logger.info(f"Repairing strategy on {len(bad)} improper states")
    base = [s for s in game.states if s not in bad]
    layer, hits = attractor_layers(game, base)
    repairs = {}
    for s in sorted(bad):
        if not game.is_max(s) or s not in layer:
            continue
        repairs[s] = prefer_by_value(game, s, sorted(hits[s]), values)
    return candidate.with_choices(repairs)


class StrategyIteration:
    """
    Strategy iteration solver.

    Flow:
    1. Start from the attractor strategy, or from a warm start repaired by make_proper.
    2. Solve the Minimizer MDP for the current strategy (best response).
    3. Greedily improve the Maximizer strategy, keeping the incumbent on ties.
    4. Repeat until the strategy is stable; BVI and VI opponents get a final exact check.
    """

    def initial_strategy(self, game: StochasticGame, cfg: SiConfig) -> Strategy:
        if cfg.warm_start is None:
            return attractor_strategy(game)
        if len(cfg.warm_start) != game.num_states:
            raise ValueError(f"warm start has {len(cfg.warm_start)} values for {game.num_states} states")
        warm = [float(v) for v in cfg.warm_start]
        candidate = Strategy(
            Player.MAX,
            {s: prefer_by_value(game, s, range(len(game.actions[s])), warm) for s in game.max_states},
        )
        return make_proper(game, candidate, warm)

    def solve_si(
        self,
        game: StochasticGame,
        cfg: Optional[SiConfig] = None,
        observer: Optional[RoundObserver] = None,
    ) -> SolveResult:
        cfg = cfg or SiConfig()
        tol = _tolerance(cfg)
        sigma = self.initial_strategy(game, cfg)
        logger.info(f"SI on {game.num_states} states, opponent={cfg.opponent_solver}, exact={cfg.exact_rational}")

        tau: Optional[Strategy] = None
        values: List[Number] = []
        rounds = 0
        converged = False
        while rounds < cfg.max_rounds:
            rounds += 1
            response = best_response(game, sigma, cfg, init_tau=tau)
            values, tau = response.values, response.tau
            if observer is not None:
                observer(rounds, values)
            improved = improve(game, values, sigma, tol)
            switched = sum(1 for s in game.max_states if improved[s] != sigma[s])
            logger.debug(f"SI round {rounds}: value {float(values[game.initial]):.9f}, {switched} switches")
            if switched == 0:
                converged = True
                break
            sigma = improved

        if not converged:
            logger.warning(f"SI stopped after {rounds} rounds without a stable strategy")
        if cfg.opponent_solver != OPPONENT_EXACT:
            confirm = cfg.model_copy(update={"opponent_solver": OPPONENT_EXACT, "unsafe": False})
            response = best_response(game, sigma, confirm, init_tau=tau)
            values, tau = response.values, response.tau

        logger.info(f"SI finished after {rounds} rounds, value {float(values[game.initial]):.9f}")
        return SolveResult(
            values=list(values),
            sigma=sigma,
            tau=tau,
            iterations=rounds,
            converged=converged,
            gap=0.0 if converged else None,
            statistics={KEY_ROUNDS: rounds, "opponent": cfg.opponent_solver},
        )


# Global solver instance
si_service = StrategyIteration()


def solve_si(game: StochasticGame, cfg: Optional[SiConfig] = None, observer: Optional[RoundObserver] = None) -> SolveResult:
    return si_service.solve_si(game, cfg, observer)
