"""SCC-by-SCC solving around any sub-solver."""
from .models import TopoConfig
from .service import TopoPlan, TopologicalSolver, build_subgame, plan, topo_service, topo_solve

__all__ = [
    "TopoConfig",
    "TopoPlan",
    "TopologicalSolver",
    "build_subgame",
    "plan",
    "topo_service",
    "topo_solve",
]
