"""
Exhaustive ground-truth solver.

Enumerates every memoryless deterministic strategy profile, solves each
induced chain with rational arithmetic and combines the results pointwise.
Only feasible for small games; used as the reference in tests.
"""
import itertools
import logging
from math import prod
from typing import List, Optional

from config import settings
from ..exceptions import BudgetExceededError, SolverError
from ..game import Player, SolveResult, StochasticGame, Strategy, bellman_residual, induce_and_solve

logger = logging.getLogger(__name__)


def _strategies(game: StochasticGame, player: Player) -> List[Strategy]:
    owned = game.max_states if player is Player.MAX else game.min_states
    ranges = [range(len(game.actions[s])) for s in owned]
    return [Strategy(player, dict(zip(owned, combo))) for combo in itertools.product(*ranges)]


class ExhaustiveOracle:
    """
    Brute-force solver over all strategy profiles.

    Flow:
    1. Solve the chain of every (sigma, tau) pair exactly.
    2. Value = pointwise max over sigma of the pointwise min over tau;
       the dual min-max is computed as well and must agree.
    3. Return a profile optimal from every state, checked against the
       Bellman equations.
    """

    def exact_solve(self, game: StochasticGame, budget: Optional[int] = None) -> SolveResult:
        budget = budget or settings.oracle_profile_budget
        profiles = prod(len(acts) for acts in game.actions)
        if profiles > budget:
            raise BudgetExceededError("strategy profiles", profiles, budget)

        sigmas = _strategies(game, Player.MAX)
        taus = _strategies(game, Player.MIN)
        logger.info(f"Oracle enumerating {len(sigmas)} x {len(taus)} strategy profiles")

        table = [
            [induce_and_solve(game, sigma, tau, game.targets, exact=True) for tau in taus]
            for sigma in sigmas
        ]
        n = game.num_states
        guaranteed = [[min(row[j][s] for j in range(len(taus))) for s in range(n)] for row in table]
        achievable = [[max(table[i][j][s] for i in range(len(sigmas))) for s in range(n)] for j in range(len(taus))]
        lower = [max(g[s] for g in guaranteed) for s in range(n)]
        upper = [min(a[s] for a in achievable) for s in range(n)]
        if lower != upper:
            raise SolverError("sup-inf and inf-sup values differ")

        sigma_star = next((sigmas[i] for i, g in enumerate(guaranteed) if g == lower), None)
        tau_star = next((taus[j] for j, a in enumerate(achievable) if a == lower), None)
        if sigma_star is None or tau_star is None:
            raise SolverError("no uniformly optimal strategy profile found")
        residual = bellman_residual(game, lower)
        if residual != 0:
            raise SolverError(f"oracle values violate the Bellman equations by {residual}")

        return SolveResult(
            values=lower,
            sigma=sigma_star,
            tau=tau_star,
            iterations=len(sigmas) * len(taus),
            converged=True,
            gap=0.0,
            statistics={"profiles": len(sigmas) * len(taus)},
        )


# Global oracle instance
oracle_service = ExhaustiveOracle()


def exact_solve(game: StochasticGame, budget: Optional[int] = None) -> SolveResult:
    return oracle_service.exact_solve(game, budget)
