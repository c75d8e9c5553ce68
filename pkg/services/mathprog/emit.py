"""
Textual program formats.

native    one declaration per line, readable and lossless; parse_program
          reads it back and re-emission is byte-identical
lp-style  CPLEX LP file for external MIQP solvers, written by Pyomo; max/min
          groups become big-M constraints over binaries b_<group>_<k>
"""
import logging
import tempfile
from pathlib import Path
from typing import Dict, List, Tuple

import pyomo.environ as pyo

from ..constants import FORMAT_LP, FORMAT_NATIVE
from ..exceptions import ProgramFormatError
from .program import (
    CONSTRAINT_KINDS,
    SENSES,
    AffineExpr,
    LinearConstraint,
    MathProgram,
    MaxMinGroup,
    ProductTerm,
)

logger = logging.getLogger(__name__)

NATIVE_HEADER = "# ssg-solver program"


def _signed(value: float) -> str:
    text = repr(float(value) + 0.0)
    return text if text.startswith("-") else f"+{text}"


def _affine_native(prog: MathProgram, expr: AffineExpr) -> str:
    tokens = [f"{_signed(c)}*{prog.var_name(i)}" for i, c in expr.terms]
    tokens.append(_signed(expr.constant))
    return " ".join(tokens)


def _emit_native(prog: MathProgram) -> str:
    lines = [
        NATIVE_HEADER,
        f"program {prog.form}",
        f"states {prog.num_states}",
        f"aux {prog.num_aux}",
        "owner " + " ".join(prog.owners),
        "order " + " ".join(str(s) for s in prog.order),
    ]
    for term in prog.objective:
        factors = " ".join(f"( {_affine_native(prog, f)} )" for f in term.factors)
        lines.append(f"term {prog.var_name(term.state)} : {factors}")
    for con in prog.constraints:
        state = prog.var_name(con.state) if con.state is not None else "-"
        lines.append(
            f"con {con.kind} {state} : {_affine_native(prog, con.lhs)} {con.sense} {_affine_native(prog, con.rhs)}"
        )
    for group in prog.groups:
        operands = " ; ".join(_affine_native(prog, op) for op in group.operands)
        lines.append(f"group {prog.var_name(group.target)} {group.operator} {{ {operands} }}")
    lines.append("end")
    return "\n".join(lines) + "\n"


class _ProgramReader:
    def __init__(self):
        self.form = ""
        self.num_states = -1
        self.num_aux = 0
        self.owners: Tuple[str, ...] = ()
        self.order: Tuple[int, ...] = ()
        self.objective: List[ProductTerm] = []
        self.constraints: List[LinearConstraint] = []
        self.groups: List[MaxMinGroup] = []

    def var(self, name: str, line_no: int) -> int:
        prefix, _, number = name.partition("_")
        try:
            index = int(number)
        except ValueError:
            raise ProgramFormatError(f"line {line_no}: bad variable '{name}'") from None
        if prefix == "v" and 0 <= index < self.num_states:
            return index
        if prefix == "w" and 0 <= index < self.num_aux:
            return self.num_states + index
        raise ProgramFormatError(f"line {line_no}: unknown variable '{name}'")

    def affine(self, tokens: List[str], line_no: int) -> AffineExpr:
        if not tokens:
            raise ProgramFormatError(f"line {line_no}: empty expression")
        coefficients: Dict[int, float] = {}
        try:
            for token in tokens[:-1]:
                coef, _, name = token.partition("*")
                index = self.var(name, line_no)
                coefficients[index] = coefficients.get(index, 0.0) + float(coef)
            constant = float(tokens[-1])
        except ValueError as e:
            raise ProgramFormatError(f"line {line_no}: bad expression '{' '.join(tokens)}': {e}") from None
        return AffineExpr.build(coefficients, constant)


def parse_program(text: str) -> MathProgram:
    """
    Read a program in the native format.

    Raises:
        ProgramFormatError: malformed input
    """
    reader = _ProgramReader()
    ended = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ended:
            raise ProgramFormatError(f"line {line_no}: content after 'end'")
        keyword, _, rest = line.partition(" ")
        tokens = rest.split()
        if keyword == "end":
            ended = True
        elif keyword == "program":
            reader.form = rest.strip()
        elif keyword in ("states", "aux"):
            try:
                value = int(rest)
            except ValueError:
                raise ProgramFormatError(f"line {line_no}: '{keyword}' needs an integer") from None
            if keyword == "states":
                reader.num_states = value
            else:
                reader.num_aux = value
        elif keyword == "owner":
            reader.owners = tuple(tokens)
        elif keyword == "order":
            reader.order = tuple(int(t) for t in tokens)
        elif keyword == "term":
            _read_term(reader, tokens, line_no)
        elif keyword == "con":
            _read_constraint(reader, tokens, line_no)
        elif keyword == "group":
            _read_group(reader, tokens, line_no)
        else:
            raise ProgramFormatError(f"line {line_no}: unknown keyword '{keyword}'")

    if reader.num_states < 0:
        raise ProgramFormatError("missing 'states' declaration")
    if len(reader.owners) != reader.num_states:
        raise ProgramFormatError(f"expected {reader.num_states} owners, got {len(reader.owners)}")
    if not ended:
        raise ProgramFormatError("missing 'end'")
    return MathProgram(
        form=reader.form,
        num_states=reader.num_states,
        num_aux=reader.num_aux,
        owners=reader.owners,
        objective=tuple(reader.objective),
        constraints=tuple(reader.constraints),
        groups=tuple(reader.groups),
        order=reader.order,
    )


def _read_term(reader: _ProgramReader, tokens: List[str], line_no: int) -> None:
    if len(tokens) < 2 or tokens[1] != ":":
        raise ProgramFormatError(f"line {line_no}: expected 'term v_i : ( ... ) ...'")
    state = reader.var(tokens[0], line_no)
    factors = []
    current: List[str] = []
    inside = False
    for token in tokens[2:]:
        if token == "(" and not inside:
            inside, current = True, []
        elif token == ")" and inside:
            factors.append(reader.affine(current, line_no))
            inside = False
        elif inside:
            current.append(token)
        else:
            raise ProgramFormatError(f"line {line_no}: unexpected token '{token}'")
    if inside or not factors:
        raise ProgramFormatError(f"line {line_no}: unbalanced or empty product")
    reader.objective.append(ProductTerm(state, tuple(factors)))


def _read_constraint(reader: _ProgramReader, tokens: List[str], line_no: int) -> None:
    if len(tokens) < 3 or tokens[2] != ":":
        raise ProgramFormatError(f"line {line_no}: expected 'con <kind> <state> : lhs <sense> rhs'")
    kind, state_token = tokens[0], tokens[1]
    if kind not in CONSTRAINT_KINDS:
        raise ProgramFormatError(f"line {line_no}: unknown constraint kind '{kind}'")
    state = None if state_token == "-" else reader.var(state_token, line_no)
    body = tokens[3:]
    split = [i for i, t in enumerate(body) if t in SENSES]
    if len(split) != 1:
        raise ProgramFormatError(f"line {line_no}: expected exactly one of {SENSES}")
    at = split[0]
    reader.constraints.append(LinearConstraint(
        lhs=reader.affine(body[:at], line_no),
        sense=body[at],
        rhs=reader.affine(body[at + 1:], line_no),
        kind=kind,
        state=state,
    ))


def _read_group(reader: _ProgramReader, tokens: List[str], line_no: int) -> None:
    if len(tokens) < 4 or tokens[1] not in ("max", "min") or tokens[2] != "{" or tokens[-1] != "}":
        raise ProgramFormatError(f"line {line_no}: expected 'group v_i max|min {{ a ; b }}'")
    operands = []
    current: List[str] = []
    for token in tokens[3:-1]:
        if token == ";":
            operands.append(reader.affine(current, line_no))
            current = []
        else:
            current.append(token)
    operands.append(reader.affine(current, line_no))
    reader.groups.append(MaxMinGroup(reader.var(tokens[0], line_no), tokens[1], tuple(operands)))


# lp-style


def _pyomo_affine(model: pyo.ConcreteModel, prog: MathProgram, expr: AffineExpr):
    return sum((c * model.component(prog.var_name(i)) for i, c in expr.terms), expr.constant)


def _check_quadratic(prog: MathProgram) -> None:
    for term in prog.objective:
        if term.degree > 2:
            raise ProgramFormatError(
                f"term of state {term.state} has degree {term.degree}; lp-style output is quadratic, "
                f"encode with --form qp after transform_2act"
            )


def build_lp_model(prog: MathProgram) -> pyo.ConcreteModel:
    """
    Pyomo model of a program of degree at most 2.

    Variables keep the program names v_i / w_j in [0, 1]. Each max/min group
    gets binaries b_<group>_<k> with big-M rows and a selection row.

    Raises:
        ProgramFormatError: a term of degree above 2
    """
    _check_quadratic(prog)
    model = pyo.ConcreteModel(name=f"{prog.form}_program")
    for i in range(prog.num_vars):
        model.add_component(prog.var_name(i), pyo.Var(bounds=(0, 1), initialize=0))

    objective = 0
    for term in prog.objective:
        product = 1
        for factor in term.factors:
            product = product * _pyomo_affine(model, prog, factor)
        objective = objective + product
    model.obj = pyo.Objective(expr=objective, sense=pyo.minimize)

    for k, con in enumerate(prog.constraints):
        lhs = _pyomo_affine(model, prog, con.lhs)
        rhs = _pyomo_affine(model, prog, con.rhs)
        if con.sense == "<=":
            expr = lhs <= rhs
        elif con.sense == ">=":
            expr = lhs >= rhs
        else:
            expr = lhs == rhs
        model.add_component(f"c{k}_{con.kind}", pyo.Constraint(expr=expr))

    big_m = MaxMinGroup.BIG_M
    for g, group in enumerate(prog.groups):
        target = model.component(prog.var_name(group.target))
        selectors = []
        for k, operand in enumerate(group.operands):
            b = pyo.Var(within=pyo.Binary, initialize=0)
            model.add_component(f"b_{g}_{k}", b)
            selectors.append(b)
            op = _pyomo_affine(model, prog, operand)
            if group.operator == "max":
                bound, tight = target >= op, target <= op + big_m * (1 - b)
            else:
                bound, tight = target <= op, target >= op - big_m * (1 - b)
            model.add_component(f"g{g}_{k}_bound", pyo.Constraint(expr=bound))
            model.add_component(f"g{g}_{k}_tight", pyo.Constraint(expr=tight))
        model.add_component(f"g{g}_select", pyo.Constraint(expr=sum(selectors) == 1))
    return model


def _emit_lp(prog: MathProgram) -> str:
    model = build_lp_model(prog)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "program.lp"
        model.write(str(path), io_options={"symbolic_solver_labels": True})
        text = path.read_text()
    logger.debug(f"LP model: {len(prog.constraints)} constraints, {prog.binary_count()} binaries")
    return text


def emit_program(prog: MathProgram, fmt: str = FORMAT_NATIVE) -> str:
    """
    Deterministic text of a program.

    Raises:
        ProgramFormatError: unknown format, or a term of degree above 2 in lp-style
    """
    if fmt == FORMAT_NATIVE:
        return _emit_native(prog)
    if fmt == FORMAT_LP:
        return _emit_lp(prog)
    raise ProgramFormatError(f"unknown program format '{fmt}', expected {FORMAT_LP} or {FORMAT_NATIVE}")
