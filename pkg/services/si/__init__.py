"""Strategy iteration service module."""
from .models import SiConfig
from .service import (
    BestResponse,
    StrategyIteration,
    best_response,
    improve,
    make_proper,
    si_service,
    solve_si,
)

__all__ = [
    "SiConfig",
    "BestResponse",
    "StrategyIteration",
    "best_response",
    "improve",
    "make_proper",
    "si_service",
    "solve_si",
]
