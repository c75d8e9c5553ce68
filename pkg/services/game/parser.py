"""
Reader and canonical writer for the line-oriented .ssg game format.

    # comment
    states 4
    initial 0
    targets 2
    owner 0 min
    action 0 a (1:1)
    action 1 c (1:1/3)(2:1/3)(3:1/3)

Probabilities are decimals or fractions n/d and are kept exactly.
"""
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from config import settings
from .game import Action, Player, StochasticGame
from ..constants import OWNER_MAX, OWNER_MIN, TARGET_LOOP_ACTION
from ..exceptions import GameParseError, GameValidationError

logger = logging.getLogger(__name__)

_SUCCESSOR = re.compile(r"\(\s*([^:()\s]+)\s*:\s*([^()\s]+)\s*\)")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-']*$")
_KEYWORDS = ("states", "initial", "targets", "owner", "action")


def _parse_int(token: str, line_no: int, column: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GameParseError(f"expected integer, got '{token}'", line_no, column)
    if value < 0:
        raise GameParseError(f"expected non-negative integer, got '{token}'", line_no, column)
    return value


def _parse_probability(token: str, line_no: int, column: int) -> Fraction:
    try:
        # Fraction keeps decimal literals exact ("0.1" is 1/10)
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise GameParseError(f"invalid probability '{token}'", line_no, column)


def _column_of(raw: str, token: str, start: int = 0) -> int:
    return raw.find(token, start) + 1


class _GameBuilder:
    """Accumulates declarations while reading and validates them at the end."""

    def __init__(self):
        self.num_states: Optional[int] = None
        self.initial: Optional[int] = None
        self.targets: Optional[List[int]] = None
        self.owners: Dict[int, Player] = {}
        self.actions: Dict[int, List[Action]] = {}
        self.action_lines: Dict[Tuple[int, int], int] = {}

    def check_state(self, s: int, line_no: int, column: int) -> None:
        if self.num_states is None:
            raise GameParseError("'states' must be declared first", line_no, column)
        if s >= self.num_states:
            raise GameValidationError(f"reference to unknown state {s}", line_no)


def parse_game(text: str, exact: bool = False) -> StochasticGame:
    """
    Parse and validate a game.

    Args:
        text: Content of a .ssg file
        exact: Require distributions to sum to exactly 1 instead of within
            the float tolerance

    Returns:
        Validated game with target self-loops normalized
    """
    builder = _GameBuilder()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        keyword, _, rest = content.partition(" ")
        rest = rest.strip()
        if keyword not in _KEYWORDS:
            raise GameParseError(f"unknown declaration '{keyword}'", line_no, _column_of(raw, keyword))
        if keyword != "states" and builder.num_states is None:
            raise GameParseError("'states' must be declared first", line_no, _column_of(raw, keyword))

        if keyword == "states":
            if builder.num_states is not None:
                raise GameParseError("duplicate 'states' declaration", line_no, 1)
            tokens = rest.split()
            if len(tokens) != 1:
                raise GameParseError("'states' takes exactly one integer", line_no, _column_of(raw, keyword))
            builder.num_states = _parse_int(tokens[0], line_no, _column_of(raw, tokens[0], len(keyword)))
            if builder.num_states == 0:
                raise GameValidationError("game must have at least one state", line_no)

        elif keyword == "initial":
            tokens = rest.split()
            if len(tokens) != 1:
                raise GameParseError("'initial' takes exactly one state", line_no, _column_of(raw, keyword))
            column = _column_of(raw, tokens[0], len(keyword))
            builder.initial = _parse_int(tokens[0], line_no, column)
            builder.check_state(builder.initial, line_no, column)

        elif keyword == "targets":
            tokens = rest.split()
            targets = []
            offset = len(keyword)
            for token in tokens:
                column = _column_of(raw, token, offset)
                offset = column + len(token) - 1
                s = _parse_int(token, line_no, column)
                builder.check_state(s, line_no, column)
                targets.append(s)
            builder.targets = (builder.targets or []) + targets

        elif keyword == "owner":
            tokens = rest.split()
            if len(tokens) != 2:
                raise GameParseError("expected 'owner <state> max|min'", line_no, _column_of(raw, keyword))
            column = _column_of(raw, tokens[0], len(keyword))
            s = _parse_int(tokens[0], line_no, column)
            builder.check_state(s, line_no, column)
            if tokens[1] not in (OWNER_MAX, OWNER_MIN):
                raise GameParseError(
                    f"owner must be 'max' or 'min', got '{tokens[1]}'",
                    line_no, _column_of(raw, tokens[1], column + len(tokens[0]) - 1),
                )
            if s in builder.owners:
                raise GameValidationError(f"duplicate owner for state {s}", line_no)
            builder.owners[s] = Player(tokens[1])

        else:
            _parse_action_line(builder, raw, rest, line_no)

    return _finish(builder, exact)


def _parse_action_line(builder: _GameBuilder, raw: str, rest: str, line_no: int) -> None:
    head = rest.split(None, 2)
    if len(head) < 3:
        raise GameParseError("expected 'action <state> <name> (j:p)...'", line_no, _column_of(raw, "action"))
    state_token, name, dist = head
    column = _column_of(raw, state_token, len("action"))
    s = _parse_int(state_token, line_no, column)
    builder.check_state(s, line_no, column)
    if not _NAME.match(name):
        raise GameParseError(f"invalid action name '{name}'", line_no, _column_of(raw, name, column))

    dist_start = raw.find(dist)
    successors: List[Tuple[int, Fraction]] = []
    seen = set()
    position = 0
    for match in _SUCCESSOR.finditer(dist):
        gap = dist[position:match.start()]
        if gap.strip():
            raise GameParseError(f"unexpected text '{gap.strip()}'", line_no, dist_start + position + 1)
        position = match.end()
        t = _parse_int(match.group(1), line_no, dist_start + match.start(1) + 1)
        builder.check_state(t, line_no, dist_start + match.start(1) + 1)
        p = _parse_probability(match.group(2), line_no, dist_start + match.start(2) + 1)
        if p <= 0 or p < Fraction(settings.min_probability):
            raise GameValidationError(f"probability {match.group(2)} of action '{name}' is not positive", line_no)
        if p > 1:
            raise GameValidationError(f"probability {match.group(2)} of action '{name}' exceeds 1", line_no)
        if t in seen:
            raise GameValidationError(f"duplicate successor {t} in action '{name}'", line_no)
        seen.add(t)
        successors.append((t, p))
    if dist[position:].strip():
        raise GameParseError(f"unexpected text '{dist[position:].strip()}'", line_no, dist_start + position + 1)
    if not successors:
        raise GameParseError(f"action '{name}' has no successors", line_no, dist_start + 1)

    acts = builder.actions.setdefault(s, [])
    if any(a.name == name for a in acts):
        raise GameValidationError(f"duplicate action '{name}' in state {s}", line_no)
    builder.action_lines[(s, len(acts))] = line_no
    acts.append(Action(name, tuple(successors)))


def _finish(builder: _GameBuilder, exact: bool) -> StochasticGame:
    if builder.num_states is None:
        raise GameValidationError("missing 'states' declaration")
    if not builder.targets:
        raise GameValidationError("no target declared")
    n = builder.num_states
    initial = builder.initial if builder.initial is not None else 0
    targets = frozenset(builder.targets)

    owners = []
    for s in range(n):
        if s not in builder.owners:
            raise GameValidationError(f"no owner declared for state {s}")
        owners.append(builder.owners[s])

    actions = []
    for s in range(n):
        if s in targets:
            if builder.actions.get(s):
                logger.debug(f"Replacing declared actions of target {s} by a self-loop")
            actions.append((Action(TARGET_LOOP_ACTION, ((s, Fraction(1)),)),))
            continue
        acts = builder.actions.get(s)
        if not acts:
            raise GameValidationError(f"state {s} has an empty action set")
        for a, act in enumerate(acts):
            total = sum(p for _, p in act.successors)
            if exact:
                ok = total == 1
            else:
                ok = abs(float(total) - 1.0) <= settings.probability_tolerance
            if not ok:
                raise GameValidationError(
                    f"distribution of action '{act.name}' in state {s} sums to {float(total):.12g}",
                    builder.action_lines.get((s, a)),
                )
        actions.append(tuple(acts))

    game = StochasticGame(
        owners=tuple(owners),
        actions=tuple(actions),
        initial=initial,
        targets=targets,
    )
    logger.debug(f"Parsed game with {n} states and {game.num_choices} actions")
    return game


def _format_probability(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def serialize_game(game: StochasticGame) -> str:
    """Canonical text form: declarations in grammar order, states ascending."""
    lines = [
        f"states {game.num_states}",
        f"initial {game.initial}",
        "targets " + " ".join(str(t) for t in sorted(game.targets)),
    ]
    lines.extend(f"owner {s} {game.owners[s].value}" for s in game.states)
    for s in game.states:
        for act in game.actions[s]:
            dist = "".join(f"({t}:{_format_probability(p)})" for t, p in act.successors)
            lines.append(f"action {s} {act.name} {dist}")
    return "\n".join(lines) + "\n"


def load_game(path: Union[str, Path], exact: bool = False) -> StochasticGame:
    """Read and parse a .ssg file."""
    text = Path(path).read_text(encoding="utf-8")
    logger.info(f"Loading game from {path}")
    return parse_game(text, exact=exact)


def save_game(game: StochasticGame, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_game(game), encoding="utf-8")
    logger.info(f"Wrote game with {game.num_states} states to {path}")
