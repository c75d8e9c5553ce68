"""
Topological solving: SCCs are solved one at a time, successors first.

Each SCC becomes a small game whose edges to already solved states are
replaced by a gadget: probability p to an external state s' splits into
p*V(s') towards a local target and p*(1-V(s')) towards a local sink.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ..bvi import solve_bvi
from ..constants import (
    ALGO_BVI,
    ALGO_SI,
    FORM_HOP,
    FORM_QP,
    KEY_CHAIN_DEPTH,
    KEY_GLOBAL_GAP_BOUND,
    KEY_SUB_SOLVES,
    TARGET_LOOP_ACTION,
)
from ..exceptions import OrderingError, SolverError
from ..game import (
    Action,
    Number,
    Player,
    SolveResult,
    StochasticGame,
    Strategy,
    argbest,
    compute_sinks,
    scc_order,
)
from ..mathprog import mathprog_service
from ..si import solve_si
from .models import TopoConfig

logger = logging.getLogger(__name__)


@dataclass
class TopoPlan:
    """SCCs successors first, with the SCCs each one depends on."""

    sccs: List[FrozenSet[int]]
    component: Dict[int, int]
    depends_on: List[FrozenSet[int]]
    nontrivial: List[bool]
    settled: List[bool]
    solved: Dict[int, Number] = field(default_factory=dict)

    def chain_depth(self) -> int:
        """Largest number of non-trivial SCCs on one dependency path."""
        depth: List[int] = []
        for i in range(len(self.sccs)):
            below = max((depth[j] for j in self.depends_on[i]), default=0)
            depth.append(below + (1 if self.nontrivial[i] else 0))
        return max(depth, default=0)


def plan(game: StochasticGame) -> TopoPlan:
    sccs = scc_order(game)
    component = {s: i for i, scc in enumerate(sccs) for s in scc}
    sinks = compute_sinks(game)
    depends_on = []
    nontrivial = []
    settled = []
    for i, scc in enumerate(sccs):
        successors = {component[t] for s in scc for t in game.successors[s]}
        depends_on.append(frozenset(successors - {i}))
        # targets and sinks have known values and never need a sub-solve
        settled.append(scc <= game.targets or scc <= sinks)
        nontrivial.append(not settled[-1] and (len(scc) > 1 or any(s in game.successors[s] for s in scc)))
    return TopoPlan(
        sccs=sccs, component=component, depends_on=depends_on, nontrivial=nontrivial, settled=settled
    )


def build_subgame(game: StochasticGame, scc: FrozenSet[int], solved: Mapping[int, Number]) -> StochasticGame:
    """
    Game over the SCC states (sorted, local indices 0..k-1) plus a local
    target k and a local sink k+1. Action order is kept, so local strategies
    carry over by index.

    Raises:
        OrderingError: an external successor has no value yet
    """
    members = sorted(scc)
    local = {s: i for i, s in enumerate(members)}
    target, sink = len(members), len(members) + 1

    actions = []
    for s in members:
        acts = []
        for act in game.actions[s]:
            weights: Dict[int, Fraction] = {}
            for t, p in act.successors:
                if t in local:
                    weights[local[t]] = weights.get(local[t], Fraction(0)) + p
                    continue
                if t not in solved:
                    raise OrderingError(f"state {t} reached from SCC {members[:10]} is not solved yet")
                value = Fraction(solved[t])
                weights[target] = weights.get(target, Fraction(0)) + p * value
                weights[sink] = weights.get(sink, Fraction(0)) + p * (1 - value)
            acts.append(Action(act.name, tuple((t, w) for t, w in sorted(weights.items()) if w != 0)))
        actions.append(tuple(acts))
    actions.append((Action(TARGET_LOOP_ACTION, ((target, Fraction(1)),)),))
    actions.append((Action("stay", ((sink, Fraction(1)),)),))
    return StochasticGame(
        owners=tuple(game.owners[s] for s in members) + (Player.MAX, Player.MIN),
        actions=tuple(actions),
        initial=0,
        targets=frozenset({target}),
    )


class TopologicalSolver:
    """
    SCC-by-SCC driver around any sub-solver.

    Flow:
    1. Targets get value 1, states that cannot reach a target value 0.
    2. Singleton SCCs without a self-loop take the Bellman combination of their successors.
    3. Every other SCC is solved as a gadget sub-game with the sub-solver.
    4. Per-SCC gaps add up along dependency chains into a global bound.
    """

    def _sub_solve(self, sub: StochasticGame, cfg: TopoConfig, epsilon: float) -> SolveResult:
        if cfg.sub_solver == ALGO_BVI:
            return solve_bvi(sub, cfg.bvi.model_copy(update={"epsilon": epsilon}))
        if cfg.sub_solver == ALGO_SI:
            return solve_si(sub, cfg.si)
        form = FORM_QP if cfg.sub_solver == "qp-local" else FORM_HOP
        return mathprog_service.solve_local(sub, form, cfg.local, budget=cfg.pair_budget)

    def topo_solve(self, game: StochasticGame, cfg: Optional[TopoConfig] = None) -> SolveResult:
        cfg = cfg or TopoConfig()
        topo = plan(game)
        depth = topo.chain_depth()
        epsilon = cfg.epsilon / max(depth, 1) if cfg.tighten else cfg.epsilon
        exact = cfg.sub_solver == ALGO_SI and cfg.si.exact_rational
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        logger.info(
            f"Topological {cfg.sub_solver} on {game.num_states} states: {len(topo.sccs)} SCCs, chain depth {depth}"
        )

        values: Dict[int, Number] = topo.solved
        choices: Dict[int, int] = {}
        scc_gaps: Dict[int, float] = {}
        bounds: List[float] = []
        sub_solves = 0
        iterations = 0
        converged = True

        for i, scc in enumerate(topo.sccs):
            below = max((bounds[j] for j in topo.depends_on[i]), default=0.0)
            members = sorted(scc)
            if topo.settled[i]:
                for s in members:
                    values[s] = one if s in game.targets else zero
                    choices[s] = 0
                bounds.append(0.0)
                continue
            if not topo.nontrivial[i]:
                (s,) = members
                vals = [sum((p * values[t] for t, p in act.successors), zero) for act in game.actions[s]]
                values[s] = max(vals) if game.is_max(s) else min(vals)
                choices[s] = argbest(game, [values.get(t, zero) for t in game.states], s)[0]
                bounds.append(below)
                continue

            sub = build_subgame(game, scc, values)
            try:
                result = self._sub_solve(sub, cfg, epsilon)
            except SolverError as e:
                logger.error(f"Sub-solve of SCC {members[:10]} ({len(members)} states) failed: {e}")
                raise
            sub_solves += 1
            iterations += result.iterations
            converged = converged and result.converged
            gap = result.gap if result.gap is not None else (0.0 if result.converged else 1.0)
            scc_gaps[members[0]] = gap
            bounds.append(gap + below)
            for k, s in enumerate(members):
                values[s] = result.values[k]
                choices[s] = (result.sigma if game.is_max(s) else result.tau)[k]
            logger.debug(f"SCC {members[:5]} of {len(members)} states solved, gap {gap:.3e}, bound {bounds[-1]:.3e}")

        global_bound = max(bounds, default=0.0)
        if global_bound > cfg.epsilon:
            logger.warning(
                f"Topological {cfg.sub_solver}: accumulated gap bound {global_bound:.3e} exceeds epsilon {cfg.epsilon}"
            )
        ordered = [values[s] for s in game.states]
        return SolveResult(
            values=ordered,
            sigma=Strategy(Player.MAX, {s: choices[s] for s in game.max_states}),
            tau=Strategy(Player.MIN, {s: choices[s] for s in game.min_states}),
            iterations=iterations,
            converged=converged,
            gap=global_bound,
            statistics={
                KEY_SUB_SOLVES: sub_solves,
                KEY_CHAIN_DEPTH: depth,
                KEY_GLOBAL_GAP_BOUND: global_bound,
                "sccs": len(topo.sccs),
                "scc_gaps": scc_gaps,
            },
        )


# Global solver instance
topo_service = TopologicalSolver()


def topo_solve(game: StochasticGame, cfg: Optional[TopoConfig] = None) -> SolveResult:
    return topo_service.topo_solve(game, cfg)
