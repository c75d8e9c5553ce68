"""Mathematical program encodings of games, emission, verification and local solving."""
from .emit import build_lp_model, emit_program, parse_program
from .encoding import MecEncoding, action_expr, encode_hop, encode_qp, mec_constraints, pair_count
from .local_solver import LocalSolveResult, local_solve
from .models import EncodeRequest, EncodeResponse, LocalSolveConfig, VerificationReport, VerifyRequest
from .program import AffineExpr, LinearConstraint, MathProgram, MaxMinGroup, ProductTerm
from .service import MathProgService, mathprog_service
from .transforms import transform_2act, transform_stopping
from .verify import complete_point, verify_solution

__all__ = [
    "AffineExpr",
    "EncodeRequest",
    "EncodeResponse",
    "LinearConstraint",
    "LocalSolveConfig",
    "LocalSolveResult",
    "MathProgService",
    "MathProgram",
    "MaxMinGroup",
    "MecEncoding",
    "ProductTerm",
    "VerificationReport",
    "VerifyRequest",
    "action_expr",
    "build_lp_model",
    "complete_point",
    "emit_program",
    "encode_hop",
    "encode_qp",
    "local_solve",
    "mathprog_service",
    "mec_constraints",
    "pair_count",
    "parse_program",
    "transform_2act",
    "transform_stopping",
    "verify_solution",
]
