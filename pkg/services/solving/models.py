from typing import Literal, Optional

from pydantic import BaseModel, Field

from config import settings


class SolveOptions(BaseModel):
    """Algorithm-independent solve options, shared by the CLI, the HTTP API and bench."""

    epsilon: float = Field(default_factory=lambda: settings.bvi_epsilon, gt=0, description="Precision")
    deflate_period: int = Field(default_factory=lambda: settings.bvi_deflate_period, ge=1)
    max_iterations: int = Field(default_factory=lambda: settings.bvi_max_iterations, ge=1)
    opponent: Literal["exact", "bvi", "vi"] = Field(default="exact", description="SI opponent solver")
    unsafe: bool = Field(default=False, description="Allow unguaranteed solvers where they are optional")
    warm_start: Literal["none", "vi"] = Field(default="none", description="Warm start for si and local solvers")
    exact_rational: bool = Field(default=False, description="Rational arithmetic for si, topo-si and oracle")
    pair_budget: Optional[int] = Field(default=None, ge=1, description="MEC strategy-pair budget")
    restarts: Optional[int] = Field(default=None, ge=1, description="Local solver restarts")
    seed: Optional[int] = Field(default=None, description="Local solver seed")
    tighten: bool = Field(default=False, description="Topological: per-SCC precision epsilon / chain depth")

    class Config:
        json_schema_extra = {
            "example": {
                "epsilon": 1e-6,
                "deflate_period": 100,
                "opponent": "exact",
                "warm_start": "none",
            }
        }


class SolveRequest(BaseModel):
    """Request model for the solve endpoint."""

    game_text: str = Field(..., description="Game in .ssg format")
    algorithm: Literal[
        "bvi", "vi", "si", "topo-bvi", "topo-si", "topo-hop", "hop-local", "qp-local", "oracle"
    ] = Field(default="bvi", description="Algorithm")
    options: SolveOptions = Field(default_factory=SolveOptions)
    model: str = Field(default="", description="Name reported back in the response")


class GameTextRequest(BaseModel):
    game_text: str = Field(..., description="Game in .ssg format")


class BenchRow(BaseModel):
    """One line of the bench CSV."""

    model: str
    states: int
    max_acts: int
    avg_acts: float
    mecs: int
    algo: str
    value: Optional[float] = None
    iters: Optional[int] = None
    seconds: Optional[float] = None
    status: str
