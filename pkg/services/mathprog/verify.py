"""Plug a value vector into a program and measure how far it is from optimal."""
import logging
from typing import Sequence

import numpy as np

from ..game import Number
from .models import VerificationReport
from .program import MathProgram

logger = logging.getLogger(__name__)


def complete_point(prog: MathProgram, values: Sequence[Number]) -> np.ndarray:
    """State values extended by auxiliary variables, each set by its min group."""
    if len(values) != prog.num_states:
        raise ValueError(f"expected {prog.num_states} values, got {len(values)}")
    x = np.zeros(prog.num_vars)
    x[:prog.num_states] = [float(v) for v in values]
    for group in prog.groups:
        if group.target >= prog.num_states:
            x[group.target] = group.value(x)
    return x


def verify_solution(prog: MathProgram, values: Sequence[Number], tol: float = 1e-9) -> VerificationReport:
    """
    Objective, worst residual and group selections at the given values.
    Passes iff |objective| <= tol and every residual <= tol.
    """
    x = complete_point(prog, values)
    objective = float(sum(term.evaluate(x) for term in prog.objective))

    worst, worst_label = 0.0, ""
    for i in range(prog.num_states):
        violation = max(0.0, -x[i], x[i] - 1.0)
        if violation > worst:
            worst, worst_label = violation, f"bounds {prog.var_name(i)}"
    for k, con in enumerate(prog.constraints):
        residual = con.residual(x)
        if residual > worst:
            worst, worst_label = residual, f"c{k}_{con.kind}"

    selections = []
    for g, group in enumerate(prog.groups):
        selections.append(group.select(x))
        residual = abs(x[group.target] - group.value(x))
        if residual > worst:
            worst, worst_label = residual, f"g{g} ({prog.var_name(group.target)} = {group.operator})"

    passed = abs(objective) <= tol and worst <= tol
    logger.debug(f"Verification: objective {objective:.3e}, residual {worst:.3e}, passed={passed}")
    return VerificationReport(
        passed=passed,
        objective=objective,
        max_residual=float(worst),
        worst=worst_label,
        selections=selections,
        tolerance=tol,
    )
