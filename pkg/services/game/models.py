from fractions import Fraction
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field

from .game import SolveResult, StochasticGame


class GameSummary(BaseModel):
    """Structural statistics of a game, as reported by bench and the API."""

    states: int = Field(..., description="Number of states")
    max_actions: int = Field(..., description="Largest action count of a state")
    avg_actions: float = Field(..., description="Average action count per state")
    mecs: int = Field(..., description="Maximal end components disjoint from targets and sinks")
    targets: List[int] = Field(default_factory=list, description="Target states")
    sinks: List[int] = Field(default_factory=list, description="States that cannot reach a target")
    initial: int = Field(..., description="Initial state")


class SolveResponse(BaseModel):
    """Machine-readable solve output (CLI --json and HTTP API)."""

    model: str = Field(default="", description="Model name or file")
    algorithm: str = Field(..., description="Algorithm used")
    initial_state: int = Field(..., description="Initial state index")
    initial_value: float = Field(..., description="Value at the initial state")
    values: List[float] = Field(..., description="Value per state")
    exact_values: Optional[List[str]] = Field(
        default=None,
        description="Exact rational values as 'n/d' strings, when solved exactly"
    )
    maximizer_strategy: Dict[int, str] = Field(default_factory=dict, description="Action name per Maximizer state")
    minimizer_strategy: Dict[int, str] = Field(default_factory=dict, description="Action name per Minimizer state")
    iterations: int = Field(default=0, description="Iterations or improvement rounds")
    converged: bool = Field(default=True, description="Whether the precision target was met")
    gap: Optional[float] = Field(default=None, description="Achieved bound gap, when known")
    seconds: float = Field(default=0.0, description="Wall time of the solve")
    statistics: Dict[str, Union[int, float, str, bool, None]] = Field(default_factory=dict)

    class Config:
        json_schema_extra = {
            "example": {
                "model": "escape.ssg",
                "algorithm": "bvi",
                "initial_state": 0,
                "initial_value": 0.4999995,
                "values": [0.4999995, 0.4999995, 1.0, 0.0],
                "maximizer_strategy": {"1": "c", "2": "loop"},
                "minimizer_strategy": {"0": "a", "3": "e"},
                "iterations": 14,
                "converged": True,
                "gap": 9.5e-07,
                "statistics": {"deflations": 0},
            }
        }

    @classmethod
    def from_result(
        cls, game: StochasticGame, result: SolveResult, algorithm: str, model: str = "", seconds: float = 0.0
    ) -> "SolveResponse":
        exact_values = None
        if result.exact:
            exact_values = [str(Fraction(v)) for v in result.values]
        statistics = {
            k: v for k, v in result.statistics.items()
            if isinstance(v, (int, float, str, bool)) or v is None
        }
        return cls(
            model=model,
            algorithm=algorithm,
            initial_state=game.initial,
            initial_value=float(result.values[game.initial]),
            values=[float(v) for v in result.values],
            exact_values=exact_values,
            maximizer_strategy=result.sigma.names(game),
            minimizer_strategy=result.tau.names(game),
            iterations=result.iterations,
            converged=result.converged,
            gap=result.gap,
            seconds=seconds,
            statistics=statistics,
        )
