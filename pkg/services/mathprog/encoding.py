"""
Encoding games as quadratic and higher-order programs.

Each state with several actions contributes the product of
(v(s) - v(s,a)) over its actions to the objective. Player constraints keep
every factor's sign fixed, so the objective is non-negative and vanishes
exactly at the game's value once end components are fixed by MEC groups.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from config import settings

from ..constants import FORM_HOP, FORM_QP
from ..exceptions import EncodingInfeasibleError, NormalFormError
from ..game import Mec, StochasticGame, compute_sinks, mec_decomposition, scc_order, solve_reachability
from .program import (
    KIND_MEC,
    KIND_PIN,
    KIND_PLAYER,
    KIND_SINGLE,
    AffineExpr,
    LinearConstraint,
    MathProgram,
    MaxMinGroup,
    ProductTerm,
)

logger = logging.getLogger(__name__)


@dataclass
class MecEncoding:
    """Groups and constraints fixing the values of one MEC."""

    groups: List[MaxMinGroup] = field(default_factory=list)
    constraints: List[LinearConstraint] = field(default_factory=list)
    num_aux: int = 0


def action_expr(game: StochasticGame, s: int, a: int) -> AffineExpr:
    """v(s,a) as an affine expression over state variables."""
    return AffineExpr.from_distribution(game.actions[s][a].successors)


def _pin(s: int, value: float) -> LinearConstraint:
    return LinearConstraint(AffineExpr.var(s), "=", AffineExpr.const(value), KIND_PIN, s)


def pair_count(game: StochasticGame, states) -> int:
    count = 1
    for s in states:
        count *= len(game.actions[s])
    return count


def _exit_reach(game: StochasticGame, members: List[int], exits, choices: Dict[int, int]) -> List[List[Fraction]]:
    """
    Exact probability of leaving through each exit, per member, in the chain
    where every member plays its chosen action and exits are absorbing markers.
    """
    local = {t: i for i, t in enumerate(members)}
    exit_index = {pair: k for k, pair in enumerate(exits)}
    markers = [len(members) + k for k in range(len(exits))]
    rows = []
    for t in members:
        a = choices[t]
        if (t, a) in exit_index:
            rows.append(((markers[exit_index[(t, a)]], Fraction(1)),))
        else:
            rows.append(tuple((local[u], p) for u, p in game.actions[t][a].successors))
    rows.extend(((m, Fraction(1)),) for m in markers)
    return [solve_reachability(rows, [m], exact=True)[:len(members)] for m in markers]


def mec_constraints(
    game: StochasticGame,
    mec: Mec,
    aux_offset: int = 0,
    budget: Optional[int] = None,
) -> MecEncoding:
    """
    Constraints fixing the values inside a MEC.

    Maximizer-only MECs take their best exit, Minimizer-only MECs are pinned
    to 0. Mixed MECs enumerate every strategy pair over the members' actions
    and combine the exact exit probabilities into
    v(t) = max over sigma of min over tau of sum p(t, exit) * v(exit).

    Raises:
        EncodingInfeasibleError: the pair count exceeds the budget
    """
    budget = budget if budget is not None else settings.mec_pair_budget
    members = sorted(mec.states)
    max_members = [t for t in members if game.is_max(t)]
    min_members = [t for t in members if not game.is_max(t)]
    exit_exprs = [action_expr(game, s, a) for s, a in mec.exits]
    encoding = MecEncoding()

    if not min_members:
        operands = tuple(exit_exprs) or (AffineExpr.const(0.0),)
        encoding.groups = [MaxMinGroup(t, "max", operands) for t in members]
        return encoding
    if not max_members:
        encoding.constraints = [
            LinearConstraint(AffineExpr.var(t), "=", AffineExpr.const(0.0), KIND_MEC, t) for t in members
        ]
        return encoding

    pairs = pair_count(game, members)
    if pairs > budget:
        raise EncodingInfeasibleError(members, pairs, budget)
    logger.debug(f"Enumerating {pairs} strategy pairs for MEC of size {len(members)}")

    sigmas = list(itertools.product(*(range(len(game.actions[t])) for t in max_members)))
    taus = list(itertools.product(*(range(len(game.actions[t])) for t in min_members)))

    # expressions[i][j][t]: value of member t under the i-th sigma and j-th tau
    expressions: List[List[List[AffineExpr]]] = []
    for sigma in sigmas:
        row = []
        for tau in taus:
            choices = dict(zip(max_members, sigma))
            choices.update(zip(min_members, tau))
            reach = _exit_reach(game, members, mec.exits, choices)
            per_member = []
            for i in range(len(members)):
                expr = AffineExpr.const(0.0)
                for k, probability in enumerate(reach):
                    if probability[i]:
                        expr = expr.combine(exit_exprs[k], float(probability[i]))
                per_member.append(expr)
            row.append(per_member)
        expressions.append(row)

    next_aux = aux_offset
    for i, t in enumerate(members):
        inner = [[expressions[x][y][i] for y in range(len(taus))] for x in range(len(sigmas))]
        if len(sigmas) == 1:
            if len(taus) == 1:
                encoding.constraints.append(
                    LinearConstraint(AffineExpr.var(t), "=", inner[0][0], KIND_MEC, t)
                )
            else:
                encoding.groups.append(MaxMinGroup(t, "min", tuple(inner[0])))
            continue
        outer = []
        for operands in inner:
            if len(operands) == 1:
                outer.append(operands[0])
                continue
            encoding.groups.append(MaxMinGroup(next_aux, "min", tuple(operands)))
            outer.append(AffineExpr.var(next_aux))
            next_aux += 1
        encoding.groups.append(MaxMinGroup(t, "max", tuple(outer)))
    encoding.num_aux = next_aux - aux_offset
    return encoding


def _assemble(game: StochasticGame, form: str, budget: Optional[int]) -> MathProgram:
    n = game.num_states
    sinks = compute_sinks(game)
    objective: List[ProductTerm] = []
    constraints: List[LinearConstraint] = []
    groups: List[MaxMinGroup] = []

    for s in game.states:
        if s in game.targets:
            constraints.append(_pin(s, 1.0))
            continue
        if s in sinks:
            constraints.append(_pin(s, 0.0))
            continue
        exprs = [action_expr(game, s, a) for a in range(len(game.actions[s]))]
        if len(exprs) == 1:
            constraints.append(LinearConstraint(AffineExpr.var(s), "=", exprs[0], KIND_SINGLE, s))
            continue
        factors = [AffineExpr.var(s).combine(e, -1.0) for e in exprs]
        if len(factors) % 2:
            factors.insert(1, factors[0])
        objective.append(ProductTerm(s, tuple(factors)))
        sense = ">=" if game.is_max(s) else "<="
        constraints.extend(LinearConstraint(AffineExpr.var(s), sense, e, KIND_PLAYER, s) for e in exprs)

    num_aux = 0
    mecs = mec_decomposition(game).relevant(game, sinks)
    for mec in mecs:
        encoded = mec_constraints(game, mec, aux_offset=n + num_aux, budget=budget)
        groups.extend(encoded.groups)
        constraints.extend(encoded.constraints)
        num_aux += encoded.num_aux

    order = tuple(s for scc in scc_order(game) for s in sorted(scc))
    program = MathProgram(
        form=form,
        num_states=n,
        num_aux=num_aux,
        owners=tuple(o.value for o in game.owners),
        objective=tuple(objective),
        constraints=tuple(constraints),
        groups=tuple(groups),
        order=order,
    )
    logger.info(
        f"Encoded {form} program: {n} states, {len(objective)} terms, {len(mecs)} MECs, "
        f"{len(groups)} groups, {num_aux} auxiliary variables"
    )
    return program


def encode_hop(game: StochasticGame, budget: Optional[int] = None) -> MathProgram:
    """Higher-order program; any action count, odd products get a duplicated factor."""
    return _assemble(game, FORM_HOP, budget)


def encode_qp(game: StochasticGame, budget: Optional[int] = None) -> MathProgram:
    """
    Quadratic program for games with at most two actions per state.

    Raises:
        NormalFormError: a state has more than two actions
    """
    wide = [s for s in game.states if len(game.actions[s]) > 2]
    if wide:
        raise NormalFormError(
            f"QP encoding needs at most two actions per state, states {wide[:10]} have more; "
            f"apply transform_2act first"
        )
    return _assemble(game, FORM_QP, budget)
