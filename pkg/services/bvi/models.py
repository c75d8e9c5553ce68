from pydantic import BaseModel, Field

from config import settings


class BviConfig(BaseModel):
    """Configuration of (bounded) value iteration."""

    epsilon: float = Field(
        default_factory=lambda: settings.bvi_epsilon,
        gt=0,
        description="Absolute precision: stop once U(s) - L(s) < epsilon everywhere"
    )
    deflate_period: int = Field(
        default_factory=lambda: settings.bvi_deflate_period,
        ge=1,
        description="Bellman iterations between two deflations"
    )
    max_iterations: int = Field(
        default_factory=lambda: settings.bvi_max_iterations,
        ge=1,
        description="Safety cap; reaching it returns a non-converged result"
    )
    guaranteed: bool = Field(default=True, description="Bounded value iteration (True) or plain lower VI (False)")
    pin_sinks: bool = Field(
        default=True,
        description="Start the upper bound at 0 on states that cannot reach a target"
    )

    class Config:
        json_schema_extra = {
            "example": {
                "epsilon": 1e-6,
                "deflate_period": 100,
                "max_iterations": 10000000,
                "guaranteed": True,
                "pin_sinks": True
            }
        }
