"""
Program-based solving pipelines.

    hop-local  encode_hop -> local_solve
    qp-local   transform_2act -> encode_qp -> local_solve, values mapped back
"""
import logging
from typing import Optional, Sequence

from ..bvi import BviConfig, solve_vi
from ..constants import (
    FORM_HOP,
    FORM_QP,
    FORMAT_NATIVE,
    KEY_OBJECTIVE,
    KEY_RESIDUAL,
    KEY_VERIFIED,
)
from ..exceptions import ProgramFormatError
from ..game import Number, SolveResult, StochasticGame, extract_strategies
from .emit import emit_program, parse_program
from .encoding import encode_hop, encode_qp
from .local_solver import local_solve
from .models import EncodeResponse, LocalSolveConfig, VerificationReport
from .program import MathProgram
from .transforms import transform_2act, transform_stopping
from .verify import verify_solution

logger = logging.getLogger(__name__)

_WARM_START_EPSILON = 1e-10
_WARM_START_ITERATIONS = 100_000


class MathProgService:
    """
    Encoding, emission, verification and local solving of game programs.

    Flow of a local solve:
    1. Optionally transform the game to 2Act (QP form).
    2. Encode and optionally warm start from value iteration on the encoded game.
    3. Run local_solve and verify the best point.
    4. Map values back to the original states and extract strategies.
    """

    def prepare(
        self,
        game: StochasticGame,
        two_act: bool = False,
        stopping: Optional[float] = None,
    ) -> StochasticGame:
        if stopping is not None:
            game = transform_stopping(game, stopping)
        if two_act:
            game, _ = transform_2act(game)
        return game

    def encode(
        self,
        game: StochasticGame,
        form: str = FORM_HOP,
        two_act: bool = False,
        stopping: Optional[float] = None,
        budget: Optional[int] = None,
    ) -> MathProgram:
        game = self.prepare(game, two_act, stopping)
        if form == FORM_QP:
            return encode_qp(game, budget)
        if form == FORM_HOP:
            return encode_hop(game, budget)
        raise ValueError(f"unknown program form '{form}', expected {FORM_QP} or {FORM_HOP}")

    def describe(self, prog: MathProgram, fmt: str = FORMAT_NATIVE) -> EncodeResponse:
        return EncodeResponse(
            form=prog.form,
            format=fmt,
            program=emit_program(prog, fmt),
            states=prog.num_states,
            auxiliary=prog.num_aux,
            terms=len(prog.objective),
            groups=len(prog.groups),
            binaries=prog.binary_count(),
            max_degree=prog.max_degree,
        )

    def verify(
        self,
        program_text: str,
        values: Sequence[Number],
        tol: float = 1e-9,
        game: Optional[StochasticGame] = None,
    ) -> VerificationReport:
        """
        Check values against a native program.

        With `game` given, the program must encode it: transformed encodings
        only append states, so the leading states and owners match the game.

        Raises:
            ProgramFormatError: unreadable program, or one that does not encode `game`
        """
        prog = parse_program(program_text)
        if game is not None:
            owners = tuple(o.value for o in game.owners)
            if prog.num_states < game.num_states or prog.owners[:game.num_states] != owners:
                raise ProgramFormatError(
                    f"program with {prog.num_states} states does not encode this game of {game.num_states} states"
                )
            if prog.num_states > game.num_states:
                logger.info(f"Program has {prog.num_states - game.num_states} states beyond the game's (transformed encoding)")
        return verify_solution(prog, values, tol)

    def solve_local(
        self,
        game: StochasticGame,
        form: str = FORM_HOP,
        cfg: Optional[LocalSolveConfig] = None,
        warm_start: bool = True,
        init: Optional[Sequence[Number]] = None,
        budget: Optional[int] = None,
    ) -> SolveResult:
        """
        Solve through a program encoding.

        Args:
            game: The game
            form: FORM_HOP, or FORM_QP with the 2Act transformation applied first
            cfg: Local solver settings
            warm_start: Start from unguaranteed value iteration on the encoded game
            init: Explicit start values for the original states, overrides warm_start
            budget: Strategy-pair budget for MEC constraints
        """
        cfg = cfg or LocalSolveConfig()
        encoded_game = game
        if form == FORM_QP:
            encoded_game, state_map = transform_2act(game)
        else:
            state_map = tuple(game.states)
        prog = encode_qp(encoded_game, budget) if form == FORM_QP else encode_hop(encoded_game, budget)

        start = None
        if init is not None:
            start = [0.0] * encoded_game.num_states
            for s, t in enumerate(state_map):
                start[t] = float(init[s])
            # tree nodes added by 2Act start from the initial estimate of their root
            for s, t in enumerate(state_map):
                for node in self._tree_nodes(encoded_game, t, game.num_states):
                    start[node] = start[t]
        elif warm_start:
            vi = solve_vi(encoded_game, BviConfig(epsilon=_WARM_START_EPSILON, max_iterations=_WARM_START_ITERATIONS))
            start = vi.values

        outcome = local_solve(prog, start, cfg)
        values = [outcome.values[t] for t in state_map]
        sigma, tau = extract_strategies(game, values, tol=cfg.tolerance)
        return SolveResult(
            values=values,
            sigma=sigma,
            tau=tau,
            iterations=outcome.steps,
            converged=outcome.verified,
            gap=None,
            statistics={
                KEY_VERIFIED: outcome.verified,
                KEY_OBJECTIVE: outcome.report.objective,
                KEY_RESIDUAL: outcome.report.max_residual,
                "restarts": outcome.restarts,
                "status": outcome.status,
                "form": form,
            },
        )

    @staticmethod
    def _tree_nodes(game: StochasticGame, root: int, first_new: int):
        stack = [root]
        while stack:
            s = stack.pop()
            for act in game.actions[s]:
                for t, _ in act.successors:
                    if t >= first_new and len(act.successors) == 1 and t not in stack:
                        yield t
                        stack.append(t)


# Global service instance
mathprog_service = MathProgService()
