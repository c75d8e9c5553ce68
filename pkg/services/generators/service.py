"""
Generators for benchmark model families and random games.

    mulmec(m)  chain of m three-state MECs, 3m+2 states
    bigmec(n)  one MEC of 2n+1 alternating states, 2n+3 states
    hm(n)      Markov chain adversarial for value iteration, 2n+1 states
    random     seeded games with small-denominator probabilities
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..constants import TARGET_LOOP_ACTION
from ..game import Action, Player, StochasticGame
from .models import RandomGameParams

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _act(name: str, *successors: Tuple[int, Fraction]) -> Action:
    return Action(name, tuple((t, Fraction(p)) for t, p in successors))


def _loop(s: int, name: str = TARGET_LOOP_ACTION) -> Tuple[Action, ...]:
    return (_act(name, (s, 1)),)


def _build(owners: Sequence[Player], actions: Sequence[Sequence[Action]], initial: int, targets) -> StochasticGame:
    return StochasticGame(
        owners=tuple(owners),
        actions=tuple(tuple(a) for a in actions),
        initial=initial,
        targets=frozenset(targets),
    )


def gen_mulmec(m: int) -> StochasticGame:
    """
    Chain of m MECs. MEC i holds x (Maximizer), y (Minimizer) and a
    Maximizer connector c; each state can leave towards the next MEC.
    The value of x_i is 0.99^(m-i).
    """
    if m < 1:
        raise ValueError("mulmec needs at least one MEC")
    target, sink = 3 * m, 3 * m + 1
    owners: List[Player] = []
    actions: List[Tuple[Action, ...]] = []
    for i in range(m):
        x, y, c = 3 * i, 3 * i + 1, 3 * i + 2
        nxt = 3 * (i + 1) if i + 1 < m else target
        owners += [Player.MAX, Player.MIN, Player.MAX]
        actions.append((
            _act("stay", (y, 1)),
            _act("exit", (nxt, Fraction(99, 100)), (sink, Fraction(1, 100))),
        ))
        actions.append((
            _act("stay", (c, 1)),
            _act("exit", (nxt, HALF), (sink, HALF)),
        ))
        actions.append((
            _act("loop", (x, HALF), (y, HALF)),
            _act("exit", (nxt, 1)),
        ))
    owners += [Player.MAX, Player.MIN]
    actions += [_loop(target), _loop(sink, "stay")]
    return _build(owners, actions, 0, [target])


def gen_bigmec(n: int) -> StochasticGame:
    """
    One MEC m_0..m_2n of alternating Maximizer (even) and Minimizer (odd)
    states linked forwards and backwards, with exits only at both ends.
    """
    if n < 1:
        raise ValueError("bigmec needs n >= 1")
    last = 2 * n
    target, sink = last + 1, last + 2
    owners: List[Player] = []
    actions: List[Tuple[Action, ...]] = []
    for k in range(last + 1):
        if k % 2 == 0:
            owners.append(Player.MAX)
            if k == 0:
                acts = (_act("fwd", (1, 1)), _act("exit", (target, HALF), (sink, HALF)))
            elif k == last:
                acts = (
                    _act("bwd", (k - 1, 1)),
                    _act("exit", (target, Fraction(3, 4)), (sink, Fraction(1, 4))),
                )
            else:
                acts = (_act("fwd", (k + 1, 1)), _act("bwd", (k - 1, 1)))
        else:
            owners.append(Player.MIN)
            acts = (_act("fwd", (k + 1, 1)), _act("mix", (k - 1, HALF), (k + 1, HALF)))
        actions.append(acts)
    owners += [Player.MAX, Player.MIN]
    actions += [_loop(target), _loop(sink, "stay")]
    return _build(owners, actions, 0, [target])


def gen_hm(n: int) -> StochasticGame:
    """
    Two chains leaving s0, one ending in the target and one in the sink.
    Every chain state moves on with probability 1/2 and otherwise falls
    back to s0, so the value at s0 is 1/2 but value iteration needs about
    2^n iterations to see it.
    """
    if n < 1:
        raise ValueError("hm needs n >= 1")
    target, sink = n, 2 * n
    right = list(range(1, n)) + [target]
    left = list(range(n + 1, 2 * n)) + [sink]
    actions: List[Tuple[Action, ...]] = [()] * (2 * n + 1)
    actions[0] = (_act("go", (right[0], HALF), (left[0], HALF)),)
    for chain in (right, left):
        for i, s in enumerate(chain[:-1]):
            actions[s] = (_act("go", (chain[i + 1], HALF), (0, HALF)),)
    actions[target] = _loop(target)
    actions[sink] = _loop(sink, "stay")
    return _build([Player.MAX] * (2 * n + 1), actions, 0, [target])


def _random_distribution(rng: np.random.Generator, n_states: int, max_branching: int) -> Tuple[Tuple[int, Fraction], ...]:
    branching = int(rng.integers(1, min(max_branching, n_states) + 1))
    successors = sorted(int(t) for t in rng.choice(n_states, size=branching, replace=False))
    weights = [int(w) for w in rng.integers(1, 5, size=branching)]
    total = sum(weights)
    return tuple((t, Fraction(w, total)) for t, w in zip(successors, weights))


def gen_random(
    seed: int,
    n_states: int,
    max_actions: int = 3,
    max_branching: int = 3,
    minimizer_fraction: float = 0.5,
    target_fraction: float = 0.2,
) -> StochasticGame:
    """
    Seeded random game.

    Probabilities are weights 1..4 normalized per action, so denominators
    stay small. At least one state is a target.
    """
    params = RandomGameParams(
        seed=seed,
        n_states=n_states,
        max_actions=max_actions,
        max_branching=max_branching,
        minimizer_fraction=minimizer_fraction,
        target_fraction=target_fraction,
    )
    rng = np.random.default_rng(params.seed)
    n = params.n_states
    n_targets = max(1, int(round(params.target_fraction * n)))
    targets = [int(t) for t in rng.choice(n, size=min(n_targets, n), replace=False)]
    owners = [Player.MIN if rng.random() < params.minimizer_fraction else Player.MAX for _ in range(n)]

    actions: List[Tuple[Action, ...]] = []
    for s in range(n):
        if s in targets:
            actions.append(_loop(s))
            continue
        count = int(rng.integers(1, params.max_actions + 1))
        actions.append(tuple(
            Action(f"a{k}", _random_distribution(rng, n, params.max_branching))
            for k in range(count)
        ))
    initial = next((s for s in range(n) if s not in targets), 0)
    return _build(owners, actions, initial, targets)


class GeneratorService:
    """Dispatch by family name for the CLI and the HTTP API."""

    FAMILIES = ("mulmec", "bigmec", "hm", "random")

    def generate(self, family: str, size: int = 1, random: Optional[RandomGameParams] = None) -> StochasticGame:
        if family == "mulmec":
            game = gen_mulmec(size)
        elif family == "bigmec":
            game = gen_bigmec(size)
        elif family == "hm":
            game = gen_hm(size)
        elif family == "random":
            game = gen_random(**(random or RandomGameParams()).model_dump())
        else:
            raise ValueError(f"unknown model family '{family}', expected one of {self.FAMILIES}")
        logger.info(f"Generated {family} model with {game.num_states} states")
        return game


# Global generator instance
generator_service = GeneratorService()
