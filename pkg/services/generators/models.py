from typing import Literal

from pydantic import BaseModel, Field


class RandomGameParams(BaseModel):
    """Parameters of the seeded random game generator."""

    seed: int = Field(default=0, description="Random seed; equal seeds give equal games")
    n_states: int = Field(default=6, ge=2, description="Number of states")
    max_actions: int = Field(default=3, ge=1, description="Maximum actions per non-target state")
    max_branching: int = Field(default=3, ge=1, description="Maximum successors per action")
    minimizer_fraction: float = Field(default=0.5, ge=0.0, le=1.0, description="Share of Minimizer states")
    target_fraction: float = Field(default=0.2, gt=0.0, le=1.0, description="Share of target states (at least one)")


class GenerateRequest(BaseModel):
    """Request model for model generation."""

    family: Literal["mulmec", "bigmec", "hm", "random"] = Field(..., description="Model family")
    size: int = Field(default=1, ge=1, le=100_000, description="Family size parameter (MEC count, MEC size, chain length)")
    random: RandomGameParams = Field(default_factory=RandomGameParams, description="Parameters for the random family")

    class Config:
        json_schema_extra = {
            "example": {
                "family": "mulmec",
                "size": 100
            }
        }


class GenerateResponse(BaseModel):
    """Generated game in .ssg text form."""

    family: str = Field(..., description="Model family")
    states: int = Field(..., description="Number of states")
    game_text: str = Field(..., description="Canonical .ssg text")
