"""
Command-line front end: solve, encode, verify, gen, bench and serve.

Exit codes: 0 success, 1 usage or format error, 2 game parse/validation
error, 3 non-convergence or budget, 4 verification failure, 5 encoding
infeasible.
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from config import settings
from services.constants import (
    ALGORITHMS,
    EXIT_ENCODING_INFEASIBLE,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    FORM_HOP,
    FORM_QP,
    FORMAT_LP,
    FORMAT_NATIVE,
    STATUS_NOT_VERIFIED,
    STATUS_OK,
)
from services.exceptions import (
    BudgetExceededError,
    EncodingInfeasibleError,
    GameError,
    NormalFormError,
    ProgramFormatError,
    SolverError,
)
from services.game import SolveResponse, game_service, save_game, serialize_game
from services.generators import RandomGameParams, generator_service
from services.mathprog import emit_program, mathprog_service
from services.solving import SolveOptions, run_bench, solver_service, status_of, write_bench_csv

logger = logging.getLogger(__name__)


class CliParser(argparse.ArgumentParser):
    """Usage errors exit with code 1 instead of argparse's 2, which is reserved for parse errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_solve_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eps", type=float, default=settings.bvi_epsilon, help="precision epsilon")
    parser.add_argument("--deflate-period", type=int, default=settings.bvi_deflate_period, help="BVI deflation period k")
    parser.add_argument("--max-iterations", type=int, default=settings.bvi_max_iterations, help="iteration cap")
    parser.add_argument("--opponent", choices=["exact", "bvi", "vi"], default="exact", help="SI opponent solver")
    parser.add_argument("--warm-start", choices=["none", "vi"], default="none", help="warm start for si and local solvers")
    parser.add_argument("--exact-rational", action="store_true", help="rational arithmetic where supported")
    parser.add_argument("--unsafe", action="store_true", help="allow unguaranteed solvers")
    parser.add_argument("--pair-budget", type=int, default=None, help="MEC strategy-pair budget")
    parser.add_argument("--restarts", type=int, default=None, help="local solver restarts")
    parser.add_argument("--seed", type=int, default=None, help="local solver seed")
    parser.add_argument("--tighten", action="store_true", help="topological: per-SCC epsilon divided by chain depth")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="ssg", description="Solvers for simple stochastic games")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    solve = commands.add_parser("solve", help="solve a game")
    solve.add_argument("file", type=Path)
    solve.add_argument("--algo", choices=ALGORITHMS, default="bvi")
    _add_solve_options(solve)
    solve.add_argument("--json", action="store_true", help="machine-readable output")

    encode = commands.add_parser("encode", help="encode a game as a mathematical program")
    encode.add_argument("file", type=Path)
    encode.add_argument("--form", choices=[FORM_QP, FORM_HOP], default=FORM_HOP)
    encode.add_argument("--two-act", action="store_true", help="apply the 2Act transformation first")
    encode.add_argument("--stopping", type=float, default=None, metavar="EPS", help="make the game stopping first")
    encode.add_argument("--format", choices=[FORMAT_LP, FORMAT_NATIVE], default=FORMAT_NATIVE)
    encode.add_argument("--pair-budget", type=int, default=None)
    encode.add_argument("-o", "--output", type=Path, default=None)

    verify = commands.add_parser("verify", help="check values against a native program")
    verify.add_argument("file", type=Path, help="the game the program was encoded from")
    verify.add_argument("--program", type=Path, required=True)
    verify.add_argument("--values", type=Path, required=True, help="whitespace-separated values or solve --json output")
    verify.add_argument("--tol", type=float, default=1e-9)

    gen = commands.add_parser("gen", help="generate a model")
    gen.add_argument("family", choices=generator_service.FAMILIES)
    gen.add_argument("size", type=int, nargs="?", default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--states", type=int, default=6)
    gen.add_argument("--max-actions", type=int, default=3)
    gen.add_argument("--max-branching", type=int, default=3)
    gen.add_argument("--minimizer-fraction", type=float, default=0.5)
    gen.add_argument("--target-fraction", type=float, default=0.2)
    gen.add_argument("-o", "--output", type=Path, default=None)

    bench = commands.add_parser("bench", help="solve every .ssg file of a directory")
    bench.add_argument("directory", type=Path)
    bench.add_argument("--algos", nargs="+", choices=ALGORITHMS, default=["bvi"])
    bench.add_argument("--timeout", type=float, default=settings.bench_timeout)
    bench.add_argument("--workers", type=int, default=settings.bench_workers)
    bench.add_argument("-o", "--output", type=Path, default=None)
    _add_solve_options(bench)

    serve = commands.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default=settings.server_host)
    serve.add_argument("--port", type=int, default=settings.server_port)
    return parser


def _options(args: argparse.Namespace) -> SolveOptions:
    return SolveOptions(
        epsilon=args.eps,
        deflate_period=args.deflate_period,
        max_iterations=args.max_iterations,
        opponent=args.opponent,
        unsafe=args.unsafe,
        warm_start=args.warm_start,
        exact_rational=args.exact_rational,
        pair_budget=args.pair_budget,
        restarts=args.restarts,
        seed=args.seed,
        tighten=args.tighten,
    )


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")


def cmd_solve(args: argparse.Namespace) -> int:
    options = _options(args)
    game = game_service.load(args.file, exact=options.exact_rational)
    result, seconds = solver_service.timed_solve(game, args.algo, options)
    response = SolveResponse.from_result(game, result, args.algo, args.file.name, seconds)

    if args.json:
        print(response.model_dump_json(indent=2))
    else:
        values = response.exact_values or [repr(v) for v in response.values]
        for s, v in enumerate(values):
            print(f"{s}\t{v}")
        print(f"initial {game.initial}: {response.initial_value!r}")
        print("maximizer: " + " ".join(f"{s}={a}" for s, a in sorted(response.maximizer_strategy.items())))
        print("minimizer: " + " ".join(f"{s}={a}" for s, a in sorted(response.minimizer_strategy.items())))
        stats = " ".join(f"{k}={v}" for k, v in response.statistics.items())
        print(f"iterations {response.iterations}, converged {response.converged}, gap {response.gap}, "
              f"{seconds:.3f} s {stats}".rstrip())

    status = status_of(result)
    if status == STATUS_NOT_VERIFIED:
        return EXIT_VERIFY_FAILED
    return EXIT_OK if status == STATUS_OK else EXIT_NOT_CONVERGED


def cmd_encode(args: argparse.Namespace) -> int:
    game = game_service.load(args.file)
    prog = mathprog_service.encode(game, args.form, args.two_act, args.stopping, args.pair_budget)
    _write(emit_program(prog, args.format), args.output)
    return EXIT_OK


def _read_values(path: Path) -> List[float]:
    text = path.read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        return [float(Fraction(token)) for token in text.split()]
    if isinstance(payload, dict):
        payload = payload.get("values", [])
    return [float(v) for v in payload]


def cmd_verify(args: argparse.Namespace) -> int:
    game = game_service.load(args.file)
    values = _read_values(args.values)
    report = mathprog_service.verify(args.program.read_text(encoding="utf-8"), values, args.tol, game=game)
    print(f"objective {report.objective!r}")
    print(f"max residual {report.max_residual!r} {report.worst}".rstrip())
    if report.selections:
        print("selections " + " ".join(str(k) for k in report.selections))
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_gen(args: argparse.Namespace) -> int:
    params = RandomGameParams(
        seed=args.seed,
        n_states=args.states,
        max_actions=args.max_actions,
        max_branching=args.max_branching,
        minimizer_fraction=args.minimizer_fraction,
        target_fraction=args.target_fraction,
    )
    game = generator_service.generate(args.family, args.size, params)
    if args.output is None:
        sys.stdout.write(serialize_game(game))
    else:
        save_game(game, args.output)
        logger.info(f"Wrote {args.output} ({game.num_states} states)")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    paths = sorted(args.directory.glob("*.ssg"))
    if not paths:
        logger.error(f"No .ssg files in {args.directory}")
        return EXIT_USAGE
    rows = run_bench(paths, args.algos, _options(args), args.timeout, args.workers)
    if args.output is None:
        write_bench_csv(rows, sys.stdout)
    else:
        with args.output.open("w", newline="", encoding="utf-8") as out:
            write_bench_csv(rows, out)
        logger.info(f"Wrote {args.output}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("main:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "encode": cmd_encode,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "serve": cmd_serve,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch the subcommand and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level_value,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    try:
        return COMMANDS[args.command](args)
    except GameError as e:
        logger.error(f"Invalid game: {e}")
        return EXIT_PARSE
    except EncodingInfeasibleError as e:
        logger.error(f"Encoding infeasible: {e}")
        return EXIT_ENCODING_INFEASIBLE
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {e}")
        return EXIT_NOT_CONVERGED
    except (ProgramFormatError, NormalFormError) as e:
        logger.error(f"Format error: {e}")
        return EXIT_USAGE
    except SolverError as e:
        logger.error(f"Solver failed: {e}")
        return EXIT_NOT_CONVERGED
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
