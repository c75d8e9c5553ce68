"""Bounded value iteration service module."""
from .models import BviConfig
from .service import (
    BoundedValueIteration,
    bellman_step,
    bvi_service,
    deflate,
    find_secs,
    initial_bounds,
    solve_bvi,
    solve_vi,
)

__all__ = [
    "BviConfig",
    "BoundedValueIteration",
    "bellman_step",
    "bvi_service",
    "deflate",
    "find_secs",
    "initial_bounds",
    "solve_bvi",
    "solve_vi",
]
