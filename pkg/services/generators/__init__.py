"""Model generator service module."""
from .models import GenerateRequest, GenerateResponse, RandomGameParams
from .service import GeneratorService, gen_bigmec, gen_hm, gen_mulmec, gen_random, generator_service

__all__ = [
    "GenerateRequest",
    "GenerateResponse",
    "RandomGameParams",
    "GeneratorService",
    "gen_bigmec",
    "gen_hm",
    "gen_mulmec",
    "gen_random",
    "generator_service",
]
