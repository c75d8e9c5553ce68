"""Shared fixtures: the four-state escape game and a batch of small random games with exact values."""
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List

import pytest

from services.game import SolveResult, StochasticGame, parse_game
from services.generators import gen_random
from services.oracle import exact_solve

MODELS_DIR = Path(__file__).parent / "models"

# p=0 (min), q=1 (max), t=2 (target), o=3 (min, trapped)
ESCAPE_TEXT = """\
# two-player game with an end component {p, q}
states 4
initial 0
targets 2
owner 0 min
owner 1 max
owner 2 max
owner 3 min
action 0 a (1:1)
action 1 b (0:1)
action 1 c (1:1/3)(2:1/3)(3:1/3)
action 2 d (2:1)
action 3 e (3:1)
"""

ESCAPE_VALUES = [Fraction(1, 2), Fraction(1, 2), Fraction(1), Fraction(0)]

RANDOM_SEEDS = range(200)


@dataclass
class SolvedGame:
    seed: int
    game: StochasticGame
    oracle: SolveResult

    @property
    def values(self) -> List[Fraction]:
        return self.oracle.values


def random_game(seed: int, **overrides) -> StochasticGame:
    """Between 2 and 6 states, at most 3 actions and 3 successors per action."""
    params = dict(n_states=2 + seed % 5, max_actions=3, max_branching=3)
    params.update(overrides)
    return gen_random(seed, **params)


@pytest.fixture
def escape() -> StochasticGame:
    return parse_game(ESCAPE_TEXT)


@pytest.fixture
def escape_path(tmp_path) -> Path:
    path = tmp_path / "escape.ssg"
    path.write_text(ESCAPE_TEXT, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def random_batch() -> List[SolvedGame]:
    """200 seeded random games solved by the exhaustive oracle, computed once per session."""
    batch = []
    for seed in RANDOM_SEEDS:
        game = random_game(seed)
        batch.append(SolvedGame(seed, game, exact_solve(game)))
    return batch
