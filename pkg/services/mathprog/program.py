"""
Mathematical program types: affine expressions, product terms, linear
constraints and max/min groups.

Variables 0..num_states-1 are the state values v_i; further variables are
auxiliary w_j introduced by MEC constraint groups.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

SENSES = ("<=", "=", ">=")

KIND_PIN = "pin"
KIND_SINGLE = "single"
KIND_PLAYER = "player"
KIND_MEC = "mec"
CONSTRAINT_KINDS = (KIND_PIN, KIND_SINGLE, KIND_PLAYER, KIND_MEC)


@dataclass(frozen=True)
class AffineExpr:
    """Σ coefficient·variable + constant, terms sorted by variable, no zero coefficients."""

    terms: Tuple[Tuple[int, float], ...] = ()
    constant: float = 0.0

    @classmethod
    def build(cls, coefficients: Mapping[int, float], constant: float = 0.0) -> "AffineExpr":
        terms = tuple((i, float(c)) for i, c in sorted(coefficients.items()) if c != 0)
        return cls(terms, float(constant) + 0.0)

    @classmethod
    def var(cls, index: int) -> "AffineExpr":
        return cls(((index, 1.0),), 0.0)

    @classmethod
    def const(cls, value: float) -> "AffineExpr":
        return cls((), float(value) + 0.0)

    @classmethod
    def from_distribution(cls, successors: Iterable[Tuple[int, object]]) -> "AffineExpr":
        coefficients: Dict[int, float] = {}
        for t, p in successors:
            coefficients[t] = coefficients.get(t, 0.0) + float(p)
        return cls.build(coefficients)

    def as_dict(self) -> Dict[int, float]:
        return dict(self.terms)

    def combine(self, other: "AffineExpr", factor: float = 1.0) -> "AffineExpr":
        """self + factor·other"""
        coefficients = self.as_dict()
        for i, c in other.terms:
            coefficients[i] = coefficients.get(i, 0.0) + factor * c
        return AffineExpr.build(coefficients, self.constant + factor * other.constant)

    def scaled(self, factor: float) -> "AffineExpr":
        return AffineExpr.build({i: factor * c for i, c in self.terms}, factor * self.constant)

    def evaluate(self, x: Sequence[float]) -> float:
        return self.constant + sum(c * float(x[i]) for i, c in self.terms)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.terms)


@dataclass(frozen=True)
class ProductTerm:
    """Objective summand of one state: product of its factors."""

    state: int
    factors: Tuple[AffineExpr, ...]

    @property
    def degree(self) -> int:
        return len(self.factors)

    def evaluate(self, x: Sequence[float]) -> float:
        return float(np.prod([f.evaluate(x) for f in self.factors]))


@dataclass(frozen=True)
class LinearConstraint:
    lhs: AffineExpr
    sense: str
    rhs: AffineExpr
    kind: str
    state: Optional[int] = None

    def residual(self, x: Sequence[float]) -> float:
        diff = self.lhs.evaluate(x) - self.rhs.evaluate(x)
        if self.sense == "=":
            return abs(diff)
        if self.sense == ">=":
            return max(0.0, -diff)
        return max(0.0, diff)


@dataclass(frozen=True)
class MaxMinGroup:
    """
    target = max (or min) over operands, linearized with one binary per
    operand and big-M 1, since every variable and operand lies in [0, 1].
    """

    target: int
    operator: str
    operands: Tuple[AffineExpr, ...]

    BIG_M = 1.0

    def operand_values(self, x: Sequence[float]) -> np.ndarray:
        return np.array([op.evaluate(x) for op in self.operands])

    def select(self, x: Sequence[float]) -> int:
        vals = self.operand_values(x)
        return int(np.argmax(vals) if self.operator == "max" else np.argmin(vals))

    def value(self, x: Sequence[float]) -> float:
        vals = self.operand_values(x)
        return float(vals.max() if self.operator == "max" else vals.min())


@dataclass(frozen=True)
class MathProgram:
    form: str
    num_states: int
    num_aux: int
    owners: Tuple[str, ...]
    objective: Tuple[ProductTerm, ...]
    constraints: Tuple[LinearConstraint, ...]
    groups: Tuple[MaxMinGroup, ...]
    order: Tuple[int, ...]

    @property
    def num_vars(self) -> int:
        return self.num_states + self.num_aux

    def var_name(self, index: int) -> str:
        if index < self.num_states:
            return f"v_{index}"
        return f"w_{index - self.num_states}"

    def var_index(self, name: str) -> int:
        prefix, _, number = name.partition("_")
        index = int(number)
        if prefix == "v" and 0 <= index < self.num_states:
            return index
        if prefix == "w" and 0 <= index < self.num_aux:
            return self.num_states + index
        raise KeyError(name)

    @property
    def max_degree(self) -> int:
        return max((t.degree for t in self.objective), default=0)

    def binary_count(self) -> int:
        return sum(len(g.operands) for g in self.groups)
