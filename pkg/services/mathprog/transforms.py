"""Value-preserving game transformations used before encoding."""
import logging
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..game import Action, Player, StochasticGame

logger = logging.getLogger(__name__)

_SPLIT_PREFIX = "_t"


def transform_2act(game: StochasticGame) -> Tuple[StochasticGame, Tuple[int, ...]]:
    """
    Split every state with k > 2 actions into a balanced binary tree of k-1
    states of the same owner. The root keeps the original index, the other
    tree nodes are appended after the original states, and the leaves carry
    the original actions.

    Returns:
        The transformed game and the map from original to transformed indices
    """
    owners: List[Player] = list(game.owners)
    actions: List[Tuple[Action, ...]] = [()] * game.num_states

    def split(owner: Player, acts: Sequence[Action]) -> Tuple[Action, ...]:
        if len(acts) <= 2:
            return tuple(acts)
        half = (len(acts) + 1) // 2
        moves = []
        for part in (acts[:half], acts[half:]):
            if len(part) == 1:
                moves.append(part[0])
                continue
            node = len(owners)
            owners.append(owner)
            actions.append(())
            actions[node] = split(owner, part)
            moves.append(Action(f"{_SPLIT_PREFIX}{node}", ((node, Fraction(1)),)))
        return tuple(moves)

    for s in game.states:
        actions[s] = split(game.owners[s], game.actions[s])

    added = len(owners) - game.num_states
    if added:
        logger.info(f"2Act transformation added {added} states")
    transformed = StochasticGame(
        owners=tuple(owners),
        actions=tuple(actions),
        initial=game.initial,
        targets=game.targets,
    )
    return transformed, tuple(game.states)


def transform_stopping(game: StochasticGame, eps: Union[float, Fraction]) -> StochasticGame:
    """
    Leak probability eps from every non-target action into a fresh sink
    state, appended as the last state. The result has no end components
    besides the target and sink self-loops.
    """
    leak = eps if isinstance(eps, Fraction) else Fraction(repr(float(eps)))
    if not 0 < leak < 1:
        raise ValueError(f"stopping probability must lie in (0, 1), got {eps}")

    n = game.num_states
    if leak >= Fraction(1, 4) ** n:
        logger.warning(
            f"Stopping probability {float(leak):.3e} is not below (1/4)^{n}; "
            f"values of the stopping game may not round to the original values"
        )
    if 0.25 ** n < np.finfo(float).eps:
        logger.warning(f"(1/4)^{n} is below float precision; a small enough stopping probability cannot be honored")

    sink = n
    keep = 1 - leak
    actions = []
    for s in game.states:
        if s in game.targets:
            actions.append(game.actions[s])
            continue
        actions.append(tuple(
            Action(act.name, tuple((t, p * keep) for t, p in act.successors) + ((sink, leak),))
            for act in game.actions[s]
        ))
    actions.append((Action("stay", ((sink, Fraction(1)),)),))
    return StochasticGame(
        owners=tuple(game.owners) + (Player.MIN,),
        actions=tuple(actions),
        initial=game.initial,
        targets=game.targets,
    )
