"""
Algorithm dispatch shared by the CLI, the HTTP API and bench.
"""
import csv
import logging
import multiprocessing
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from config import settings

from ..bvi import BviConfig, solve_bvi, solve_vi
from ..constants import (
    ALGO_BVI,
    ALGO_HOP_LOCAL,
    ALGO_ORACLE,
    ALGO_QP_LOCAL,
    ALGO_SI,
    ALGO_TOPO_BVI,
    ALGO_TOPO_HOP,
    ALGO_TOPO_SI,
    ALGO_VI,
    ALGORITHMS,
    BENCH_COLUMNS,
    FORM_HOP,
    FORM_QP,
    KEY_VERIFIED,
    STATUS_ENCODING_INFEASIBLE,
    STATUS_ERROR,
    STATUS_NOT_VERIFIED,
    STATUS_OK,
    STATUS_TIMEOUT,
)
from ..exceptions import EncodingInfeasibleError, SolverError
from ..game import SolveResult, StochasticGame, game_service, load_game
from ..mathprog import LocalSolveConfig, mathprog_service
from ..oracle import exact_solve
from ..si import SiConfig, solve_si
from ..topological import TopoConfig, topo_solve
from .models import BenchRow, SolveOptions

logger = logging.getLogger(__name__)


class SolverService:
    """
    Turns an algorithm name and SolveOptions into the matching solver call.
    """

    def bvi_config(self, options: SolveOptions) -> BviConfig:
        return BviConfig(
            epsilon=options.epsilon,
            deflate_period=options.deflate_period,
            max_iterations=options.max_iterations,
        )

    def si_config(self, game: StochasticGame, options: SolveOptions, warm_start: bool = True) -> SiConfig:
        warm = None
        if warm_start and options.warm_start == "vi":
            vi = solve_vi(game, BviConfig(epsilon=options.epsilon, max_iterations=options.max_iterations))
            warm = [float(v) for v in vi.values]
        return SiConfig(
            opponent_solver=options.opponent,
            unsafe=options.unsafe,
            warm_start=warm,
            inner_epsilon=min(options.epsilon, settings.si_inner_epsilon),
            deflate_period=options.deflate_period,
            exact_rational=options.exact_rational,
        )

    def local_config(self, options: SolveOptions) -> LocalSolveConfig:
        updates = {}
        if options.restarts is not None:
            updates["restarts"] = options.restarts
        if options.seed is not None:
            updates["seed"] = options.seed
        return LocalSolveConfig(**updates)

    def solve(self, game: StochasticGame, algorithm: str, options: Optional[SolveOptions] = None) -> SolveResult:
        """
        Solve a game with the named algorithm.

        Raises:
            ValueError: unknown algorithm or invalid option combination
            SolverError: failures of the underlying solver
        """
        options = options or SolveOptions()
        if algorithm == ALGO_BVI:
            return solve_bvi(game, self.bvi_config(options))
        if algorithm == ALGO_VI:
            return solve_vi(game, self.bvi_config(options))
        if algorithm == ALGO_SI:
            return solve_si(game, self.si_config(game, options))
        if algorithm in (ALGO_HOP_LOCAL, ALGO_QP_LOCAL):
            form = FORM_QP if algorithm == ALGO_QP_LOCAL else FORM_HOP
            return mathprog_service.solve_local(
                game,
                form,
                self.local_config(options),
                warm_start=options.warm_start == "vi",
                budget=options.pair_budget,
            )
        if algorithm in (ALGO_TOPO_BVI, ALGO_TOPO_SI, ALGO_TOPO_HOP):
            sub_solver = {ALGO_TOPO_BVI: ALGO_BVI, ALGO_TOPO_SI: ALGO_SI, ALGO_TOPO_HOP: ALGO_HOP_LOCAL}[algorithm]
            cfg = TopoConfig(
                sub_solver=sub_solver,
                epsilon=options.epsilon,
                tighten=options.tighten,
                bvi=self.bvi_config(options),
                si=self.si_config(game, options, warm_start=False),
                local=self.local_config(options),
                pair_budget=options.pair_budget,
            )
            return topo_solve(game, cfg)
        if algorithm == ALGO_ORACLE:
            return exact_solve(game)
        raise ValueError(f"unknown algorithm '{algorithm}', expected one of {ALGORITHMS}")

    def timed_solve(
        self, game: StochasticGame, algorithm: str, options: Optional[SolveOptions] = None
    ) -> Tuple[SolveResult, float]:
        start = time.perf_counter()
        result = self.solve(game, algorithm, options)
        return result, time.perf_counter() - start


# Global solver instance
solver_service = SolverService()


def status_of(result: SolveResult) -> str:
    if result.statistics.get(KEY_VERIFIED) is False:
        return STATUS_NOT_VERIFIED
    return STATUS_OK if result.converged else STATUS_TIMEOUT


def _bench_worker(path: str, algorithm: str, options: dict) -> dict:
    game = load_game(path, exact=options.get("exact_rational", False))
    try:
        result, seconds = solver_service.timed_solve(game, algorithm, SolveOptions(**options))
    except EncodingInfeasibleError as e:
        return {"status": STATUS_ENCODING_INFEASIBLE, "error": str(e)}
    except SolverError as e:
        # solver exceptions take keyword payloads and do not unpickle in the parent
        logger.error(f"{Path(path).name} with {algorithm} failed: {e}")
        return {"status": STATUS_ERROR, "error": str(e)}
    return {
        "value": float(result.values[game.initial]),
        "iters": result.iterations,
        "seconds": round(seconds, 6),
        "status": status_of(result),
    }


def bench_instance(path: Path, algorithm: str, options: SolveOptions, timeout: float) -> BenchRow:
    """Solve one model in a separate process, killed after timeout seconds."""
    game = load_game(path)
    summary = game_service.summarize(game)
    row = dict(
        model=path.name,
        states=summary.states,
        max_acts=summary.max_actions,
        avg_acts=round(summary.avg_actions, 3),
        mecs=summary.mecs,
        algo=algorithm,
    )
    pool = multiprocessing.get_context("spawn").Pool(processes=1)
    try:
        outcome = pool.apply_async(_bench_worker, (str(path), algorithm, options.model_dump())).get(timeout)
    except multiprocessing.TimeoutError:
        logger.warning(f"{path.name} with {algorithm}: timeout after {timeout} s")
        outcome = {"status": STATUS_TIMEOUT, "seconds": timeout}
    except Exception as e:
        logger.error(f"{path.name} with {algorithm} failed: {e}")
        outcome = {"status": STATUS_ERROR}
    finally:
        pool.terminate()
        pool.join()
    outcome.pop("error", None)
    return BenchRow(**row, **outcome)


def run_bench(
    paths: Sequence[Path],
    algorithms: Iterable[str],
    options: Optional[SolveOptions] = None,
    timeout: Optional[float] = None,
    workers: Optional[int] = None,
) -> List[BenchRow]:
    """Every model with every algorithm; rows keep the input order."""
    options = options or SolveOptions()
    timeout = timeout if timeout is not None else settings.bench_timeout
    workers = workers or settings.bench_workers
    jobs = [(Path(p), algo) for p in paths for algo in algorithms]
    logger.info(f"Bench: {len(jobs)} solves, {workers} workers, timeout {timeout} s")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(bench_instance, p, algo, options, timeout) for p, algo in jobs]
        return [f.result() for f in futures]


def write_bench_csv(rows: Sequence[BenchRow], out) -> None:
    writer = csv.DictWriter(out, fieldnames=list(BENCH_COLUMNS))
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in row.model_dump().items()})
