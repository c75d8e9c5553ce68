"""
Induced Markov chains and reachability solving.

Reachability is solved in three steps: graph analysis fixes the states with
probability 0 and 1, then the linear system x = P·x + b is solved on the rest,
either with scipy's sparse LU (float) or by exact rational elimination.
"""
import logging
from fractions import Fraction
from typing import Collection, Dict, List, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .game import InducedChain, Number, StochasticGame, Strategy
from ..exceptions import SingularSystemError

logger = logging.getLogger(__name__)

Row = Sequence[Tuple[int, Fraction]]

_RESIDUAL_LIMIT = 1e-8


def induce(game: StochasticGame, sigma: Strategy, tau: Strategy) -> InducedChain:
    """Fix both players' choices; every state keeps exactly one distribution."""
    choices = []
    for s in game.states:
        strategy = sigma if game.is_max(s) else tau
        if s not in strategy:
            if len(game.actions[s]) == 1:
                choices.append(0)
                continue
            raise ValueError(f"strategy profile does not cover state {s}")
        choices.append(strategy[s])
    rows = tuple(game.actions[s][a].successors for s, a in enumerate(choices))
    return InducedChain(game=game, choices=tuple(choices), rows=rows)


def induce_and_solve(
    game: StochasticGame,
    sigma: Strategy,
    tau: Strategy,
    targets: Collection[int],
    exact: bool = False,
) -> List[Number]:
    """Reachability probabilities of `targets` in the chain induced by (sigma, tau)."""
    chain = induce(game, sigma, tau)
    return solve_reachability(chain.rows, targets, exact=exact)


def _qualitative(rows: Sequence[Row], targets: frozenset) -> Tuple[set, set]:
    n = len(rows)
    preds: List[List[int]] = [[] for _ in range(n)]
    for s, row in enumerate(rows):
        for t, _ in row:
            preds[t].append(s)

    # prob > 0: backward reachable from targets
    positive = set(targets)
    queue = list(targets)
    while queue:
        w = queue.pop()
        for s in preds[w]:
            if s not in positive:
                positive.add(s)
                queue.append(s)
    zero = set(range(n)) - positive

    # prob < 1: can reach a zero state without passing a target
    failing = set(zero)
    queue = list(zero)
    while queue:
        w = queue.pop()
        for s in preds[w]:
            if s not in failing and s not in targets:
                failing.add(s)
                queue.append(s)
    one = set(range(n)) - failing
    return zero, one


def solve_reachability(rows: Sequence[Row], targets: Collection[int], exact: bool = False) -> List[Number]:
    """
    Reachability probabilities in an explicit Markov chain.

    Args:
        rows: One distribution per state as (successor, probability) pairs
        targets: States to reach
        exact: Solve with Fractions instead of floats

    Returns:
        Probability per state (Fractions when exact)
    """
    targets = frozenset(targets)
    zero, one = _qualitative(rows, targets)
    unknown = [s for s in range(len(rows)) if s not in zero and s not in one]

    if exact:
        values: List[Number] = [Fraction(1) if s in one else Fraction(0) for s in range(len(rows))]
    else:
        values = [1.0 if s in one else 0.0 for s in range(len(rows))]
    if not unknown:
        return values

    position = {s: i for i, s in enumerate(unknown)}
    if exact:
        matrix: List[Dict[int, Fraction]] = []
        rhs: List[Fraction] = []
        for s in unknown:
            coefficients = {position[s]: Fraction(1)}
            constant = Fraction(0)
            for t, p in rows[s]:
                if t in position:
                    coefficients[position[t]] = coefficients.get(position[t], Fraction(0)) - p
                elif t in one:
                    constant += p
            matrix.append(coefficients)
            rhs.append(constant)
        solution = solve_exact(matrix, rhs)
    else:
        solution = _solve_float(rows, unknown, position, one)

    for s, v in zip(unknown, solution):
        values[s] = v
    return values


def _solve_float(rows, unknown, position, one) -> List[float]:
    size = len(unknown)
    r, c, data = [], [], []
    b = np.zeros(size)
    for i, s in enumerate(unknown):
        r.append(i)
        c.append(i)
        data.append(1.0)
        for t, p in rows[s]:
            if t in position:
                r.append(i)
                c.append(position[t])
                data.append(-float(p))
            elif t in one:
                b[i] += float(p)
    a = sparse.csc_matrix((data, (r, c)), shape=(size, size))
    x = np.atleast_1d(spsolve(a, b))
    residual = float(np.max(np.abs(a @ x - b))) if size else 0.0
    if not np.all(np.isfinite(x)) or residual > _RESIDUAL_LIMIT:
        raise SingularSystemError(f"reachability system with {size} unknowns", residual)
    return [float(v) for v in np.clip(x, 0.0, 1.0)]


def solve_exact(matrix: List[Dict[int, Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """
    Gaussian elimination over Fractions on a sparse row representation.

    Rows are dicts column -> coefficient and are consumed. Raises
    SingularSystemError when no pivot can be found.
    """
    n = len(matrix)
    rows = [dict(r) for r in matrix]
    b = list(rhs)
    pivot_row_of: Dict[int, int] = {}
    remaining = set(range(n))
    for col in range(n):
        pivot = next((i for i in sorted(remaining) if rows[i].get(col, 0) != 0), None)
        if pivot is None:
            raise SingularSystemError(f"exact system of size {n} has no pivot in column {col}", float("inf"))
        remaining.discard(pivot)
        pivot_row_of[col] = pivot
        prow = rows[pivot]
        inv = 1 / prow[col]
        for k in list(prow):
            prow[k] *= inv
        b[pivot] *= inv
        for i in range(n):
            if i == pivot:
                continue
            factor = rows[i].get(col)
            if not factor:
                continue
            row = rows[i]
            for k, v in prow.items():
                updated = row.get(k, 0) - factor * v
                if updated:
                    row[k] = updated
                else:
                    row.pop(k, None)
            b[i] -= factor * b[pivot]
    return [b[pivot_row_of[col]] for col in range(n)]
