"""Exception hierarchy for game handling and solvers.

Input problems derive from ValueError, solver failures from RuntimeError,
so callers that only know the built-in types keep working.
"""
from typing import Iterable, Optional


class GameError(ValueError):
    """Base class for invalid game input."""


class GameParseError(GameError):
    """Syntax error in a .ssg file."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class GameValidationError(GameError):
    """Structurally invalid game (distribution sums, references, targets)."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class NormalFormError(ValueError):
    """A game does not satisfy a required normal form."""


class ProgramFormatError(ValueError):
    """A program cannot be emitted or parsed in the requested format."""


class SolverError(RuntimeError):
    """Base class for solver failures."""


class SingularSystemError(SolverError):
    """Linear system could not be solved to the required accuracy."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class PropernessError(SolverError):
    """A Maximizer strategy lets the play stay away from targets and sinks."""

    def __init__(self, states: Iterable[int]):
        self.states = sorted(states)
        super().__init__(
            f"strategy is not proper: play can avoid targets and sinks from states {self.states[:10]}"
        )


class BudgetExceededError(SolverError):
    """Enumeration would exceed the configured budget."""

    def __init__(self, what: str, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: {required} exceeds budget {budget}")


class EncodingInfeasibleError(BudgetExceededError):
    """MEC constraint synthesis needs too many strategy pairs."""

    def __init__(self, states: Iterable[int], pairs: int, budget: int):
        self.states = sorted(states)
        shown = self.states if len(self.states) <= 10 else self.states[:10] + ["..."]
        super().__init__(
            f"MEC of size {len(self.states)} {shown} needs strategy pairs", pairs, budget
        )


class OrderingError(SolverError):
    """A component was processed before one of its successors."""
