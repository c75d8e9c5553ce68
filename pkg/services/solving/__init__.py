"""Algorithm dispatch and benchmarking."""
from .models import BenchRow, GameTextRequest, SolveOptions, SolveRequest
from .service import SolverService, bench_instance, run_bench, solver_service, status_of, write_bench_csv

__all__ = [
    "BenchRow",
    "GameTextRequest",
    "SolveOptions",
    "SolveRequest",
    "SolverService",
    "bench_instance",
    "run_bench",
    "solver_service",
    "status_of",
    "write_bench_csv",
]
