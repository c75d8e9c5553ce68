"""Model generator API endpoints."""
import logging
from typing import Optional

from fastapi import APIRouter, HTTPException, Query

from services.game import serialize_game
from services.generators import GenerateResponse, RandomGameParams, generator_service

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/generators", tags=["Generators"])


@router.post("/{family}", response_model=GenerateResponse)
async def generate_model(
    family: str,
    size: int = Query(default=1, ge=1, le=100_000, description="MEC count, MEC size or chain length"),
    random: Optional[RandomGameParams] = None,
):
    """
    Generate a benchmark model.

    Args:
        family: mulmec, bigmec, hm or random
        size: Family size parameter (ignored for random)
        random: Parameters of the random family (JSON body)

    Returns:
        GenerateResponse with the canonical .ssg text
    """
    try:
        game = generator_service.generate(family, size, random)
        return GenerateResponse(family=family, states=game.num_states, game_text=serialize_game(game))

    except ValueError as e:
        logger.error(f"Generation input error: {e}")
        raise HTTPException(status_code=400, detail=str(e))
