from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from config import settings


class LocalSolveConfig(BaseModel):
    """Settings of the internal best-effort program solver."""

    restarts: int = Field(default_factory=lambda: settings.local_solve_restarts, ge=1)
    max_steps: int = Field(default_factory=lambda: settings.local_solve_max_steps, ge=1)
    tolerance: float = Field(default_factory=lambda: settings.local_solve_tolerance, gt=0)
    seed: int = Field(default_factory=lambda: settings.local_solve_seed)
    step_size: float = Field(default=0.05, gt=0, description="Initial gradient step size")


class VerificationReport(BaseModel):
    """Result of plugging a value vector into a program."""

    passed: bool
    objective: float = Field(..., description="Objective value at the point")
    max_residual: float = Field(..., description="Largest constraint, group or bound violation")
    worst: str = Field(default="", description="Label of the most violated constraint")
    selections: List[int] = Field(default_factory=list, description="Achieving operand per group")
    tolerance: float


class EncodeRequest(BaseModel):
    game_text: str = Field(..., description="Game in .ssg format")
    form: Literal["qp", "hop"] = "hop"
    format: Literal["lp-style", "native"] = "native"
    two_act: bool = Field(default=False, description="Apply the 2Act transformation first")
    stopping: Optional[float] = Field(default=None, gt=0, lt=1, description="Make the game stopping first")
    pair_budget: Optional[int] = Field(default=None, ge=1)

    class Config:
        json_schema_extra = {
            "example": {
                "game_text": "states 4\ninitial 0\ntargets 2\n...",
                "form": "qp",
                "format": "lp-style",
                "two_act": True,
            }
        }


class EncodeResponse(BaseModel):
    form: str
    format: str
    program: str
    states: int
    auxiliary: int
    terms: int
    groups: int
    binaries: int
    max_degree: int


class VerifyRequest(BaseModel):
    program_text: str = Field(..., description="Program in the native format")
    values: List[float] = Field(..., description="Value per state")
    tolerance: float = Field(default=1e-9, gt=0)
