from fastapi import APIRouter
from api.endpoints import games, generators, programs

# Main API router
api_router = APIRouter()

# Include all feature routers
api_router.include_router(games.router)
api_router.include_router(programs.router)
api_router.include_router(generators.router)
