"""
Graph analyses on games: sinks, zero-value states, SCCs, MEC decomposition,
attractor layering and properness checks.
"""
import logging
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .game import Mec, MecCatalog, Player, StochasticGame, Strategy
from .values import value_of_state_action

logger = logging.getLogger(__name__)

AllowedActions = Callable[[int], Sequence[int]]


def strongly_connected_components(
    vertices: Iterable[int], edges: Mapping[int, Sequence[int]]
) -> Iterator[Set[int]]:
    """
    Path-based SCC search over an explicit graph.

    Components are yielded in reverse topological order: every component is
    produced after all components reachable from it. Iterative, so long chains
    do not hit the recursion limit.
    """
    identified: Set[int] = set()
    stack: List[int] = []
    index: Dict[int, int] = {}
    boundaries: List[int] = []

    for root in vertices:
        if root in index:
            continue
        index[root] = len(stack)
        stack.append(root)
        boundaries.append(index[root])
        work = [(root, iter(edges.get(root, ())))]
        while work:
            v, neighbours = work[-1]
            descended = False
            for w in neighbours:
                if w not in index:
                    index[w] = len(stack)
                    stack.append(w)
                    boundaries.append(index[w])
                    work.append((w, iter(edges.get(w, ()))))
                    descended = True
                    break
                elif w not in identified:
                    while index[w] < boundaries[-1]:
                        boundaries.pop()
            if descended:
                continue
            work.pop()
            if boundaries[-1] == index[v]:
                boundaries.pop()
                scc = set(stack[index[v]:])
                del stack[index[v]:]
                identified.update(scc)
                yield scc


def compute_sinks(game: StochasticGame) -> FrozenSet[int]:
    """States with no path to a target, by backward reachability from F."""
    reached = set(game.targets)
    queue = list(game.targets)
    while queue:
        w = queue.pop()
        for s, _ in game.predecessors[w]:
            if s not in reached:
                reached.add(s)
                queue.append(s)
    return frozenset(s for s in game.states if s not in reached)


def attractor_layers(
    game: StochasticGame,
    base: Iterable[int],
    allowed: Optional[AllowedActions] = None,
) -> Tuple[Dict[int, int], Dict[int, Set[int]]]:
    """
    Layered positive attractor of `base` for Maximizer.

    A Maximizer state joins layer i once some allowed action reaches a layer
    below i with positive probability; a Minimizer state joins once all of its
    allowed actions do.

    Returns:
        (layer per discovered state, actions hitting lower layers at join time)
    """
    allowed = allowed or (lambda s: range(len(game.actions[s])))
    allowed_sets = {}

    def allowed_set(s: int) -> Set[int]:
        if s not in allowed_sets:
            allowed_sets[s] = set(allowed(s))
        return allowed_sets[s]

    layer: Dict[int, int] = {s: 0 for s in base}
    hits: Dict[int, Set[int]] = {}
    frontier = sorted(layer)
    depth = 0
    while frontier:
        depth += 1
        candidates = set()
        for w in frontier:
            for s, a in game.predecessors[w]:
                if s in layer or a not in allowed_set(s):
                    continue
                hits.setdefault(s, set()).add(a)
                candidates.add(s)
        joined = []
        for s in sorted(candidates):
            if game.is_max(s) or hits[s] >= allowed_set(s):
                joined.append(s)
        for s in joined:
            layer[s] = depth
        frontier = joined
    return layer, {s: hits[s] for s in layer if s in hits}


def compute_zero_states(game: StochasticGame) -> FrozenSet[int]:
    """
    States of value 0: Minimizer can keep the play away from F surely.

    Superset of compute_sinks; also contains every Minimizer-only MEC that
    does not hold a target, and the states Minimizer can steer into one.
    """
    layer, _ = attractor_layers(game, game.targets)
    return frozenset(s for s in game.states if s not in layer)


def attractor_strategy(
    game: StochasticGame,
    values: Optional[Sequence[float]] = None,
    zero_states: Optional[FrozenSet[int]] = None,
) -> Strategy:
    """
    Proper Maximizer strategy from backward BFS starting at targets and sinks.

    A state discovered in layer i picks an action reaching a layer below i,
    actions leaving the state's MEC first, then by index; with `values`
    given, the highest-valued such action.
    """
    if zero_states is None:
        zero_states = compute_zero_states(game)
    layer, hits = attractor_layers(game, game.targets | zero_states)
    leaving = {pair for mec in game_mecs(game) for pair in mec.exits}
    choices = {}
    for s in game.max_states:
        candidates = []
        if layer.get(s, 0) > 0:
            candidates = sorted(hits.get(s, ()), key=lambda a: ((s, a) not in leaving, a))
        if not candidates:
            candidates = list(range(len(game.actions[s])))
        choices[s] = prefer_by_value(game, s, candidates, values)
    return Strategy(Player.MAX, choices)


def prefer_by_value(game: StochasticGame, s: int, candidates: Sequence[int], values: Optional[Sequence[float]]) -> int:
    if values is None:
        return candidates[0]
    best, best_value = candidates[0], None
    for a in candidates:
        v = value_of_state_action(game, values, s, a)
        if best_value is None or v > best_value:
            best, best_value = a, v
    return best


def mec_decomposition(
    game: StochasticGame,
    states: Optional[Iterable[int]] = None,
    allowed: Optional[Mapping[int, Sequence[int]]] = None,
) -> MecCatalog:
    """
    Maximal end components by iterative SCC pruning.

    Args:
        game: The game
        states: Restrict the search to these states (default all)
        allowed: Restrict the actions of some states (default all)

    Returns:
        MECs sorted by smallest member; exits are computed over all actions
    """
    alive = set(game.states if states is None else states)
    avail: Dict[int, List[int]] = {}
    for s in alive:
        candidates = allowed[s] if allowed is not None and s in allowed else range(len(game.actions[s]))
        avail[s] = [a for a in candidates if game.actions[s][a].post <= alive]

    while True:
        for s in [s for s in alive if not avail[s]]:
            alive.discard(s)
        edges = {
            s: sorted(set().union(*(game.actions[s][a].post for a in avail[s])) & alive)
            for s in alive
        }
        component: Dict[int, int] = {}
        sccs = list(strongly_connected_components(sorted(alive), edges))
        for i, scc in enumerate(sccs):
            for s in scc:
                component[s] = i
        changed = False
        for s in alive:
            kept = [
                a for a in avail[s]
                if all(component.get(t) == component[s] for t in game.actions[s][a].post)
            ]
            if kept != avail[s]:
                avail[s] = kept
                changed = True
        if not changed and all(avail[s] for s in alive):
            break

    mecs = []
    for scc in sccs:
        members = frozenset(scc)
        internal = {s: tuple(avail[s]) for s in sorted(members)}
        exits = tuple(
            (s, a)
            for s in sorted(members)
            for a, act in enumerate(game.actions[s])
            if not act.post <= members
        )
        mecs.append(Mec(states=members, internal=internal, exits=exits))
    mecs.sort(key=lambda m: min(m.states))
    return MecCatalog(tuple(mecs))


def scc_order(game: StochasticGame) -> List[FrozenSet[int]]:
    """SCCs of the underlying graph, successors first."""
    edges = {s: game.successors[s] for s in game.states}
    return [frozenset(c) for c in strongly_connected_components(game.states, edges)]


def restrict_to_strategy(game: StochasticGame, sigma: Strategy) -> StochasticGame:
    """Induced Minimizer MDP: Maximizer states keep only their chosen action."""
    actions = tuple(
        (game.actions[s][sigma[s]],) if game.is_max(s) else game.actions[s]
        for s in game.states
    )
    return StochasticGame(owners=game.owners, actions=actions, initial=game.initial, targets=game.targets)


def improper_states(
    game: StochasticGame,
    sigma: Strategy,
    zero_states: Optional[FrozenSet[int]] = None,
) -> FrozenSet[int]:
    """
    States from which some Minimizer strategy keeps the play away from
    targets and zero states with positive probability under sigma.
    """
    if zero_states is None:
        zero_states = compute_zero_states(game)
    outside = [s for s in game.states if s not in game.targets and s not in zero_states]
    allowed = {s: (sigma[s],) for s in outside if game.is_max(s)}
    bad = set()
    for mec in mec_decomposition(game, outside, allowed):
        bad |= mec.states
    if not bad:
        return frozenset()
    # everything that can reach a trapping component along allowed actions
    outside_set = set(outside)
    reached = set(bad)
    queue = list(bad)
    while queue:
        w = queue.pop()
        for s, a in game.predecessors[w]:
            if s in reached or s not in outside_set:
                continue
            if game.is_max(s) and sigma[s] != a:
                continue
            reached.add(s)
            queue.append(s)
    return frozenset(reached)


def is_proper(game: StochasticGame, sigma: Strategy, zero_states: Optional[FrozenSet[int]] = None) -> bool:
    return not improper_states(game, sigma, zero_states)


def game_mecs(game: StochasticGame) -> Tuple[Mec, ...]:
    """Non-trivial MECs relevant for solving: disjoint from targets and sinks."""
    return mec_decomposition(game).relevant(game, compute_sinks(game))
