"""Core game representation, parsing and analyses."""
from .analysis import (
    attractor_layers,
    attractor_strategy,
    prefer_by_value,
    compute_sinks,
    compute_zero_states,
    game_mecs,
    improper_states,
    is_proper,
    mec_decomposition,
    restrict_to_strategy,
    scc_order,
    strongly_connected_components,
)
from .chain import induce, induce_and_solve, solve_exact, solve_reachability
from .game import (
    Action,
    BoundsVector,
    InducedChain,
    Mec,
    MecCatalog,
    Number,
    Player,
    SolveResult,
    StochasticGame,
    Strategy,
    ValueVector,
    as_float_vector,
)
from .models import GameSummary, SolveResponse
from .parser import load_game, parse_game, save_game, serialize_game
from .service import GameService, game_service
from .strategies import extract_strategies
from .values import (
    action_values,
    argbest,
    bellman,
    bellman_residual,
    best_exit,
    is_exact,
    value_of_state_action,
)

__all__ = [
    "Action",
    "BoundsVector",
    "GameService",
    "GameSummary",
    "InducedChain",
    "Mec",
    "MecCatalog",
    "Number",
    "Player",
    "SolveResponse",
    "SolveResult",
    "StochasticGame",
    "Strategy",
    "ValueVector",
    "action_values",
    "argbest",
    "as_float_vector",
    "attractor_layers",
    "attractor_strategy",
    "prefer_by_value",
    "bellman",
    "bellman_residual",
    "best_exit",
    "compute_sinks",
    "compute_zero_states",
    "extract_strategies",
    "game_mecs",
    "game_service",
    "improper_states",
    "induce",
    "induce_and_solve",
    "is_exact",
    "is_proper",
    "load_game",
    "mec_decomposition",
    "parse_game",
    "restrict_to_strategy",
    "save_game",
    "scc_order",
    "serialize_game",
    "solve_exact",
    "solve_reachability",
    "strongly_connected_components",
    "value_of_state_action",
]
