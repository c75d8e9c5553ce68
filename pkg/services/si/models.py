from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from config import settings
from ..constants import OPPONENT_BVI, OPPONENT_EXACT, OPPONENT_VI


class SiConfig(BaseModel):
    """Configuration of strategy iteration."""

    opponent_solver: Literal["exact", "bvi", "vi"] = Field(
        default=OPPONENT_EXACT,
        description="Solver for the Minimizer MDP: exact policy iteration, BVI with action domination, or unguaranteed VI"
    )
    unsafe: bool = Field(default=False, description="Allow the unguaranteed VI opponent solver")
    warm_start: Optional[List[float]] = Field(
        default=None,
        description="Value estimates used to pick the initial Maximizer strategy"
    )
    inner_epsilon: float = Field(
        default_factory=lambda: settings.si_inner_epsilon,
        gt=0,
        description="Precision of iterative opponent solvers"
    )
    inner_max_iterations: int = Field(default=1_000_000, ge=1, description="Iteration cap of iterative opponent solvers")
    deflate_period: int = Field(
        default_factory=lambda: settings.bvi_deflate_period,
        ge=1,
        description="Deflation period of the BVI opponent solver"
    )
    max_rounds: int = Field(
        default_factory=lambda: settings.si_max_rounds,
        ge=1,
        description="Cap on improvement rounds"
    )
    exact_rational: bool = Field(default=False, description="Solve induced chains with rational arithmetic")
    check_properness: bool = Field(default=True, description="Reject improper Maximizer strategies in best responses")

    @model_validator(mode="after")
    def check_unsafe_opponent(self):
        if self.opponent_solver == OPPONENT_VI and not self.unsafe:
            raise ValueError("the VI opponent solver gives no guarantee; enable it with unsafe=True")
        if self.exact_rational and self.opponent_solver == OPPONENT_BVI:
            raise ValueError("exact_rational requires the exact opponent solver")
        return self
