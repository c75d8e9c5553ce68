"""Game solving API endpoints."""
import logging
import time

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from services.exceptions import BudgetExceededError, SolverError
from services.game import GameSummary, SolveResponse, game_service
from services.solving import GameTextRequest, SolveRequest, solver_service

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/games", tags=["Games"])


@router.post("/solve", response_model=SolveResponse)
async def solve_game(request: SolveRequest):
    """
    Solve a game given in .ssg text.

    - Parses the game (rational probabilities when exact_rational is set)
    - Runs the requested algorithm
    - Returns per-state values, strategies and solver statistics

    Args:
        request: Game text, algorithm and options

    Returns:
        SolveResponse with values and strategies
    """
    try:
        logger.info(f"Solve request: algorithm={request.algorithm}, model={request.model or '-'}")
        game = game_service.parse(request.game_text, exact=request.options.exact_rational)
        start = time.perf_counter()
        result = await run_in_threadpool(solver_service.solve, game, request.algorithm, request.options)
        seconds = time.perf_counter() - start
        return SolveResponse.from_result(game, result, request.algorithm, request.model, seconds)

    except ValueError as e:
        logger.error(f"Solve input error: {e}")
        raise HTTPException(status_code=400, detail=str(e))

    except BudgetExceededError as e:
        logger.error(f"Solve budget exceeded: {e}")
        raise HTTPException(status_code=409, detail=str(e))

    except SolverError as e:
        logger.error(f"Solve failed: {e}")
        raise HTTPException(status_code=500, detail=f"Solver failed: {str(e)}")


@router.post("/summary", response_model=GameSummary)
async def summarize_game(request: GameTextRequest):
    """Structural statistics of a game: states, actions, MECs, targets and sinks."""
    try:
        game = game_service.parse(request.game_text)
        return game_service.summarize(game)

    except ValueError as e:
        logger.error(f"Summary input error: {e}")
        raise HTTPException(status_code=400, detail=str(e))
