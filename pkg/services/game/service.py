"""
Game service: loading, validation and structural summaries.
"""
import logging
from pathlib import Path
from typing import Union

from .analysis import compute_sinks, game_mecs
from .game import StochasticGame
from .models import GameSummary
from .parser import load_game, parse_game

logger = logging.getLogger(__name__)


class GameService:
    """
    Entry point used by the CLI and the HTTP API for game input.

    Flow:
    1. Parse: validate .ssg text into an immutable StochasticGame.
    2. Summarize: state and action counts plus relevant MEC count, the
       structural columns reported by bench.
    """

    def parse(self, text: str, exact: bool = False) -> StochasticGame:
        return parse_game(text, exact=exact)

    def load(self, path: Union[str, Path], exact: bool = False) -> StochasticGame:
        return load_game(path, exact=exact)

    def summarize(self, game: StochasticGame) -> GameSummary:
        max_actions, avg_actions = game.action_count_stats()
        sinks = compute_sinks(game)
        mecs = game_mecs(game)
        logger.debug(f"Game summary: {game.num_states} states, {len(mecs)} MECs")
        return GameSummary(
            states=game.num_states,
            max_actions=max_actions,
            avg_actions=round(avg_actions, 4),
            mecs=len(mecs),
            targets=sorted(game.targets),
            sinks=sorted(sinks),
            initial=game.initial,
        )


# Global service instance
game_service = GameService()
