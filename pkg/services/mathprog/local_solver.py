"""
Best-effort local solver for encoded programs.

Every variable is governed by one rule: a pin, a max/min group, an equality,
or the player inequalities of its state. From the current point each rule
selects its achieving operand; fixing the selections turns all rules into
linear equations, whose solution is the next point. When a selection repeats
without verifying, a projected gradient step on the objective moves the point
before the next selection. Results are only trusted after verify_solution.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from ..constants import STATUS_NOT_VERIFIED, STATUS_OK
from ..game import Number
from .models import LocalSolveConfig, VerificationReport
from .program import KIND_MEC, KIND_PIN, KIND_PLAYER, KIND_SINGLE, AffineExpr, MathProgram
from .verify import complete_point, verify_solution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Rule:
    operator: str  # "max", "min" or "eq"
    operands: Tuple[AffineExpr, ...]

    def select(self, x: np.ndarray) -> int:
        if len(self.operands) == 1:
            return 0
        vals = [op.evaluate(x) for op in self.operands]
        return int(np.argmax(vals) if self.operator == "max" else np.argmin(vals))


@dataclass
class LocalSolveResult:
    values: List[float]
    verified: bool
    report: VerificationReport
    restarts: int
    steps: int

    @property
    def status(self) -> str:
        return STATUS_OK if self.verified else STATUS_NOT_VERIFIED


def _rules(prog: MathProgram) -> List[_Rule]:
    """One rule per variable; pins win over groups, groups over equalities, equalities over inequalities."""
    pins: Dict[int, _Rule] = {}
    groups: Dict[int, _Rule] = {}
    equalities: Dict[int, _Rule] = {}
    players: Dict[int, List[AffineExpr]] = {}
    senses: Dict[int, str] = {}

    for con in prog.constraints:
        if con.state is None:
            continue
        if con.kind == KIND_PIN or (con.kind == KIND_MEC and not con.rhs.terms):
            pins[con.state] = _Rule("eq", (con.rhs,))
        elif con.kind in (KIND_SINGLE, KIND_MEC):
            equalities[con.state] = _Rule("eq", (con.rhs,))
        elif con.kind == KIND_PLAYER:
            players.setdefault(con.state, []).append(con.rhs)
            senses[con.state] = "max" if con.sense == ">=" else "min"
    for group in prog.groups:
        groups[group.target] = _Rule(group.operator, group.operands)

    rules = []
    for i in range(prog.num_vars):
        if i in pins:
            rules.append(pins[i])
        elif i in groups:
            rules.append(groups[i])
        elif i in equalities:
            rules.append(equalities[i])
        elif i in players:
            rules.append(_Rule(senses[i], tuple(players[i])))
        else:
            rules.append(_Rule("eq", (AffineExpr.const(0.0),)))
    return rules


def _project(rules: Sequence[_Rule], selection: Sequence[int], x: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Solve x_i = selected operand_i(x) for all i; falls back to one Gauss-Seidel sweep."""
    n = len(rules)
    rows, cols, data = [], [], []
    rhs = np.zeros(n)
    for i, (rule, k) in enumerate(zip(rules, selection)):
        expr = rule.operands[k]
        coefficients = {i: 1.0}
        for j, c in expr.terms:
            coefficients[j] = coefficients.get(j, 0.0) - c
        for j, c in coefficients.items():
            rows.append(i)
            cols.append(j)
            data.append(c)
        rhs[i] = expr.constant
    matrix = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
    try:
        solution = np.atleast_1d(spsolve(matrix.tocsc(), rhs))
        ok = bool(np.all(np.isfinite(solution)))
    except RuntimeError:
        ok = False
    if not ok:
        logger.debug("Selection system is singular, sweeping instead")
        solution = x.copy()
        for i in list(order) + [j for j in range(n) if j >= len(order)]:
            solution[i] = rules[i].operands[selection[i]].evaluate(solution)
    return np.clip(solution, 0.0, 1.0)


def _objective_gradient(prog: MathProgram, x: np.ndarray) -> np.ndarray:
    grad = np.zeros_like(x)
    for term in prog.objective:
        vals = np.array([f.evaluate(x) for f in term.factors])
        for k, factor in enumerate(term.factors):
            others = float(np.prod(np.delete(vals, k)))
            for j, c in factor.terms:
                grad[j] += others * c
    return grad


def _score(report: VerificationReport) -> float:
    return abs(report.objective) + report.max_residual


def _descend(
    prog: MathProgram, rules: Sequence[_Rule], start: np.ndarray, cfg: LocalSolveConfig
) -> Tuple[np.ndarray, VerificationReport, int]:
    n = prog.num_states
    x = complete_point(prog, np.clip(start, 0.0, 1.0))
    order = prog.order
    step_size = cfg.step_size
    seen = set()
    best_x, best_report = x[:n].copy(), verify_solution(prog, x[:n], cfg.tolerance)
    steps = 0

    for steps in range(1, cfg.max_steps + 1):
        selection = tuple(rule.select(x) for rule in rules)
        if selection in seen:
            x = np.clip(x - step_size * _objective_gradient(prog, x), 0.0, 1.0)
            step_size /= 2
            selection = tuple(rule.select(x) for rule in rules)
            if selection in seen:
                break
        seen.add(selection)
        x = _project(rules, selection, x, order)
        report = verify_solution(prog, x[:n], cfg.tolerance)
        if _score(report) < _score(best_report):
            best_x, best_report = x[:n].copy(), report
        if report.passed:
            break
    return best_x, best_report, steps


def local_solve(
    prog: MathProgram,
    init: Optional[Sequence[Number]] = None,
    cfg: Optional[LocalSolveConfig] = None,
) -> LocalSolveResult:
    """
    Search for a point with objective 0 that satisfies every constraint.

    The warm start, when given, is the first restart; the remaining restarts
    start from seeded random points in [0,1]^S.
    """
    cfg = cfg or LocalSolveConfig()
    rng = np.random.default_rng(cfg.seed)
    rules = _rules(prog)
    n = prog.num_states

    starts = []
    if init is not None:
        if len(init) != n:
            raise ValueError(f"warm start has {len(init)} values for {n} states")
        starts.append(np.array([float(v) for v in init]))
    while len(starts) < cfg.restarts:
        starts.append(rng.random(n))

    best: Optional[LocalSolveResult] = None
    total_steps = 0
    for restart, start in enumerate(starts, start=1):
        values, report, steps = _descend(prog, rules, start, cfg)
        total_steps += steps
        logger.debug(f"Restart {restart}: objective {report.objective:.3e}, residual {report.max_residual:.3e}")
        if best is None or _score(report) < _score(best.report):
            best = LocalSolveResult(values.tolist(), report.passed, report, restart, total_steps)
        if report.passed:
            break

    best.steps = total_steps
    if best.verified:
        logger.info(f"Local solve verified after {best.restarts} restarts and {total_steps} steps")
    else:
        logger.warning(
            f"Local solve not verified: best objective {best.report.objective:.3e}, "
            f"residual {best.report.max_residual:.3e}"
        )
    return best
