"""Shared constants for solver services, CLI output and API payloads."""

# Player labels used in .ssg files and JSON payloads
OWNER_MAX = "max"
OWNER_MIN = "min"

# Name given to the normalized target self-loop
TARGET_LOOP_ACTION = "loop"

# Algorithm identifiers accepted by the solving service
ALGO_BVI = "bvi"
ALGO_VI = "vi"
ALGO_SI = "si"
ALGO_TOPO_BVI = "topo-bvi"
ALGO_TOPO_SI = "topo-si"
ALGO_TOPO_HOP = "topo-hop"
ALGO_HOP_LOCAL = "hop-local"
ALGO_QP_LOCAL = "qp-local"
ALGO_ORACLE = "oracle"

ALGORITHMS = (
    ALGO_BVI,
    ALGO_VI,
    ALGO_SI,
    ALGO_TOPO_BVI,
    ALGO_TOPO_SI,
    ALGO_TOPO_HOP,
    ALGO_HOP_LOCAL,
    ALGO_QP_LOCAL,
    ALGO_ORACLE,
)

# Opponent solvers for strategy iteration
OPPONENT_EXACT = "exact"
OPPONENT_BVI = "bvi"
OPPONENT_VI = "vi"

# Program forms and emission formats
FORM_QP = "qp"
FORM_HOP = "hop"
FORMAT_LP = "lp-style"
FORMAT_NATIVE = "native"

# Bench status values
STATUS_OK = "OK"
STATUS_TIMEOUT = "TIMEOUT"
STATUS_NOT_VERIFIED = "NOT-VERIFIED"
STATUS_ENCODING_INFEASIBLE = "ENCODING-INFEASIBLE"
STATUS_ERROR = "ERROR"

BENCH_COLUMNS = (
    "model", "states", "max_acts", "avg_acts", "mecs",
    "algo", "value", "iters", "seconds", "status",
)

# Statistics keys shared by solvers
KEY_DEFLATIONS = "deflations"
KEY_GAP = "gap"
KEY_SUB_SOLVES = "sub_solves"
KEY_ROUNDS = "rounds"
KEY_RESIDUAL = "residual"
KEY_OBJECTIVE = "objective"
KEY_VERIFIED = "verified"
KEY_CHAIN_DEPTH = "chain_depth"
KEY_GLOBAL_GAP_BOUND = "global_gap_bound"
KEY_SECS = "secs"

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NOT_CONVERGED = 3
EXIT_VERIFY_FAILED = 4
EXIT_ENCODING_INFEASIBLE = 5
