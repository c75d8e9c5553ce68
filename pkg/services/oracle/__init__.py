"""Exhaustive oracle service module."""
from .service import ExhaustiveOracle, exact_solve, oracle_service

__all__ = ["ExhaustiveOracle", "exact_solve", "oracle_service"]
