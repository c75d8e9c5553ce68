"""Program encoding and verification API endpoints."""
import logging

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from services.exceptions import EncodingInfeasibleError
from services.game import game_service
from services.mathprog import EncodeRequest, EncodeResponse, VerificationReport, VerifyRequest, mathprog_service

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/programs", tags=["Programs"])


@router.post("/encode", response_model=EncodeResponse)
async def encode_game(request: EncodeRequest):
    """
    Encode a game as a quadratic (qp) or higher-order (hop) program.

    - Optionally makes the game stopping and/or applies the 2Act transformation
    - Emits the program as native text or as an LP file with big-M groups
    """
    try:
        game = game_service.parse(request.game_text)
        prog = await run_in_threadpool(
            mathprog_service.encode,
            game,
            request.form,
            request.two_act,
            request.stopping,
            request.pair_budget,
        )
        return mathprog_service.describe(prog, request.format)

    except EncodingInfeasibleError as e:
        logger.error(f"Encoding infeasible: {e}")
        raise HTTPException(status_code=409, detail=str(e))

    except ValueError as e:
        logger.error(f"Encoding input error: {e}")
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/verify", response_model=VerificationReport)
async def verify_values(request: VerifyRequest):
    """Plug a value vector into a native program and report objective, residuals and group selections."""
    try:
        return mathprog_service.verify(request.program_text, request.values, request.tolerance)

    except ValueError as e:
        logger.error(f"Verification input error: {e}")
        raise HTTPException(status_code=400, detail=str(e))
