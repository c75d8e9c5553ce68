"""Tests for program encodings, transformations, emission, verification and the local solver."""
from fractions import Fraction

import numpy as np
import pyomo.environ as pyo
import pytest

from conftest import ESCAPE_VALUES, random_game
from services.constants import FORM_HOP, FORM_QP, FORMAT_LP, FORMAT_NATIVE
from services.exceptions import EncodingInfeasibleError, NormalFormError, ProgramFormatError
from services.game import Player, game_mecs, mec_decomposition, parse_game, value_of_state_action
from services.generators import gen_bigmec, gen_mulmec
from services.mathprog import (
    AffineExpr,
    LocalSolveConfig,
    action_expr,
    build_lp_model,
    complete_point,
    emit_program,
    encode_hop,
    encode_qp,
    local_solve,
    mathprog_service,
    mec_constraints,
    parse_program,
    transform_2act,
    transform_stopping,
    verify_solution,
)
from services.mathprog.program import KIND_PIN, KIND_PLAYER, KIND_SINGLE
from services.oracle import exact_solve

P, Q, T, O = 0, 1, 2, 3

WIDE_TEXT = """\
states 4
initial 0
targets 2
owner 0 min
owner 1 max
owner 2 max
owner 3 min
action 0 a (1:1/2)(2:1/2)
action 0 b (2:1/4)(3:3/4)
action 0 c (1:1)
action 1 a (2:1/3)(3:2/3)
action 1 b (0:1/2)(3:1/2)
action 3 stay (3:1)
"""

# s0 (max) -> s1 (min) -> target 2, with a trap 3
CHAIN_TEXT = """\
states 4
initial 0
targets 2
owner 0 max
owner 1 min
owner 2 max
owner 3 min
action 0 a (1:9/10)(3:1/10)
action 0 b (2:1/2)(3:1/2)
action 1 a (2:9/10)(3:1/10)
action 1 b (2:1/5)(3:4/5)
action 3 stay (3:1)
"""


def _extend_to_tree_nodes(original, transformed, values):
    """Values of the nodes added by transform_2act: each node's best leaf action."""
    extended = list(values) + [Fraction(0)] * (transformed.num_states - original.num_states)
    for node in reversed(range(original.num_states, transformed.num_states)):
        vals = [value_of_state_action(transformed, extended, node, a) for a in range(len(transformed.actions[node]))]
        extended[node] = max(vals) if transformed.is_max(node) else min(vals)
    return extended


# Encodings

def test_encode_qp_escape(escape):
    prog = encode_qp(escape)
    assert prog.form == FORM_QP
    assert prog.num_states == 4
    assert prog.num_aux == 0

    (term,) = prog.objective
    assert term.state == Q
    assert term.factors == (
        AffineExpr.var(Q).combine(AffineExpr.var(P), -1.0),
        AffineExpr.var(Q).combine(action_expr(escape, Q, 1), -1.0),
    )

    by_kind = {}
    for con in prog.constraints:
        by_kind.setdefault(con.kind, []).append(con)
    assert [(c.state, c.rhs.constant) for c in by_kind[KIND_PIN]] == [(T, 1.0), (O, 0.0)]
    (single,) = by_kind[KIND_SINGLE]
    assert single.state == P and single.sense == "=" and single.rhs == AffineExpr.var(Q)
    assert [c.sense for c in by_kind[KIND_PLAYER]] == [">=", ">="]

    assert [g.target for g in prog.groups] == [P, Q]
    for group in prog.groups:
        assert group.operator == "max"
        assert group.operands == (AffineExpr.const(0.0), action_expr(escape, Q, 1))
    assert prog.binary_count() == 4


def test_encode_hop_equals_qp_on_two_action_games(escape):
    qp, hop = encode_qp(escape), encode_hop(escape)
    assert hop.form == FORM_HOP
    assert (hop.objective, hop.constraints, hop.groups) == (qp.objective, qp.constraints, qp.groups)


def test_hop_odd_action_count_duplicates_factor():
    game = parse_game(WIDE_TEXT)
    prog = encode_hop(game)
    term = next(t for t in prog.objective if t.state == 0)
    assert term.degree == 4
    assert term.factors[0] == term.factors[1]


def test_qp_rejects_wide_states():
    with pytest.raises(NormalFormError, match="transform_2act"):
        encode_qp(parse_game(WIDE_TEXT))


def test_target_only_program():
    game = parse_game("states 1\ninitial 0\ntargets 0\nowner 0 max\n")
    prog = encode_hop(game)
    assert prog.objective == ()
    assert prog.groups == ()
    assert [c.kind for c in prog.constraints] == [KIND_PIN]


def test_stopping_two_action_game_has_no_groups():
    game = transform_stopping(parse_game(CHAIN_TEXT), 0.01)
    prog = encode_qp(game)
    assert prog.groups == ()
    assert len(prog.objective) == 2


def test_maximizer_only_mec_takes_best_exit():
    text = (
        "states 4\ninitial 0\ntargets 2\nowner 0 max\nowner 1 max\nowner 2 max\nowner 3 min\n"
        "action 0 stay (1:1)\naction 0 out (2:3/10)(3:7/10)\naction 1 back (0:1)\naction 1 out (2:4/5)(3:1/5)\n"
        "action 3 stay (3:1)\n"
    )
    game = parse_game(text)
    (mec,) = game_mecs(game)
    encoded = mec_constraints(game, mec)
    assert [g.target for g in encoded.groups] == [0, 1]
    for group in encoded.groups:
        assert group.operator == "max"
        assert group.operands == (action_expr(game, 0, 1), action_expr(game, 1, 1))


def test_minimizer_only_mec_pinned_to_zero():
    text = (
        "states 3\ninitial 0\ntargets 2\nowner 0 min\nowner 1 min\nowner 2 max\n"
        "action 0 stay (1:1)\naction 0 go (2:1)\naction 1 back (0:1)\n"
    )
    game = parse_game(text)
    (mec,) = game_mecs(game)
    encoded = mec_constraints(game, mec)
    assert encoded.groups == []
    assert [(c.state, c.rhs.constant) for c in encoded.constraints] == [(0, 0.0), (1, 0.0)]


def test_bigmec_exceeds_pair_budget():
    game = gen_bigmec(100)
    (mec,) = game_mecs(game)
    with pytest.raises(EncodingInfeasibleError) as info:
        mec_constraints(game, mec)
    assert len(info.value.states) == 201
    assert info.value.required == 2 ** 201


def test_pair_budget_override(escape):
    (mec,) = game_mecs(escape)
    with pytest.raises(EncodingInfeasibleError):
        mec_constraints(escape, mec, budget=1)


def test_mixed_mec_uses_auxiliary_variables():
    prog = encode_hop(gen_mulmec(2))
    # per MEC: 3 members x 4 Maximizer strategies, each a min over 2 Minimizer choices
    assert prog.num_aux == 2 * 12
    assert sum(1 for g in prog.groups if g.operator == "min") == 24
    assert sum(1 for g in prog.groups if g.operator == "max") == 6


def test_objective_terms_have_even_degree(random_batch):
    for solved in random_batch[:60]:
        for term in encode_hop(solved.game).objective:
            assert term.degree >= 2 and term.degree % 2 == 0


def test_encodings_sound_on_oracle_values(random_batch):
    for solved in random_batch:
        game, values = solved.game, solved.values
        report = verify_solution(encode_hop(game), values, tol=1e-9)
        assert report.passed, f"seed {solved.seed}: hop {report}"

        wide, _ = transform_2act(game)
        extended = _extend_to_tree_nodes(game, wide, values)
        report = verify_solution(encode_qp(wide), extended, tol=1e-9)
        assert report.passed, f"seed {solved.seed}: qp {report}"


# Transformations

def test_transform_2act_splits_wide_states():
    game = parse_game(WIDE_TEXT)
    wide, mapping = transform_2act(game)
    assert mapping == (0, 1, 2, 3)
    assert wide.num_states == 5
    assert all(len(acts) <= 2 for acts in wide.actions)
    assert wide.owners[4] is Player.MIN
    assert [a.name for a in wide.actions[0]] == ["_t4", "c"]
    assert [a.name for a in wide.actions[4]] == ["a", "b"]


def test_transform_2act_four_actions_adds_two_states():
    text = WIDE_TEXT.replace("action 0 c (1:1)", "action 0 c (1:1)\naction 0 d (3:1)")
    wide, _ = transform_2act(parse_game(text))
    assert wide.num_states == 6


def test_transform_2act_identity_on_two_action_games(escape):
    wide, _ = transform_2act(escape)
    assert wide == escape


def _four_action_games(count):
    seed = 0
    while count:
        game = random_game(seed, n_states=5, max_actions=4)
        seed += 1
        if not any(len(acts) == 4 for acts in game.actions):
            continue
        wide, _ = transform_2act(game)
        if np.prod([len(acts) for acts in wide.actions]) > 4096:
            continue
        count -= 1
        yield game, wide


def test_transform_2act_preserves_values():
    for game, wide in _four_action_games(50):
        original = exact_solve(game).values
        transformed = exact_solve(wide).values
        assert transformed[:game.num_states] == original


def test_transform_stopping_escape(escape):
    stopping = transform_stopping(escape, 0.01)
    assert stopping.num_states == 5
    assert stopping.actions[Q][1].successors == (
        (1, Fraction(33, 100)), (2, Fraction(33, 100)), (3, Fraction(33, 100)), (4, Fraction(1, 100)),
    )
    assert stopping.actions[T] == escape.actions[T]
    assert [m.states for m in mec_decomposition(stopping)] == [frozenset({T}), frozenset({4})]


@pytest.mark.parametrize("eps", [0, 1, -0.5, 1.5])
def test_transform_stopping_rejects_bad_probability(escape, eps):
    with pytest.raises(ValueError):
        transform_stopping(escape, eps)


def test_stopping_values_approach_escape(escape):
    values = [exact_solve(transform_stopping(escape, eps)).values[P] for eps in (1e-2, 1e-4, 1e-6)]
    assert values[0] < values[1] < values[2] < Fraction(1, 2)
    assert Fraction(1, 2) - values[2] < Fraction(1, 10 ** 5)


def test_stopping_values_monotone(random_batch):
    for solved in random_batch[:40]:
        n = solved.game.num_states
        approximations = [
            exact_solve(transform_stopping(solved.game, eps)).values[:n] for eps in (1e-2, 1e-4, 1e-6)
        ] + [solved.values]
        for coarse, fine in zip(approximations, approximations[1:]):
            assert all(c <= f for c, f in zip(coarse, fine)), f"seed {solved.seed}"


# Emission

def test_lp_model_escape(escape):
    model = build_lp_model(encode_qp(escape))
    binaries = sorted(v.name for v in model.component_data_objects(pyo.Var) if v.is_binary())
    assert binaries == ["b_0_0", "b_0_1", "b_1_0", "b_1_1"]
    assert model.component("v_3").bounds == (0, 1)
    assert model.component("g0_select") is not None
    assert model.obj.sense == pyo.minimize


def test_lp_style_escape(escape):
    text = emit_program(encode_qp(escape), FORMAT_LP)
    lowered = text.lower()
    assert "] / 2" in text
    assert "binary" in lowered
    assert "b_0_0" in text and "v_3" in text
    assert lowered.rstrip().endswith("end")


def test_lp_style_rejects_degree_four():
    prog = encode_hop(parse_game(WIDE_TEXT))
    with pytest.raises(ProgramFormatError, match="degree 4"):
        emit_program(prog, FORMAT_LP)
    assert emit_program(prog, FORMAT_NATIVE).startswith("# ssg-solver program")


def test_lp_style_after_two_act():
    wide, _ = transform_2act(parse_game(WIDE_TEXT))
    text = emit_program(encode_qp(wide), FORMAT_LP)
    assert text.lower().rstrip().endswith("end")
    model = build_lp_model(encode_qp(wide))
    assert not any(v.is_binary() for v in model.component_data_objects(pyo.Var))


@pytest.mark.parametrize("game", [
    parse_game(WIDE_TEXT),
    gen_mulmec(2),
    transform_stopping(parse_game(CHAIN_TEXT), 0.01),
], ids=["wide", "mulmec", "stopping"])
def test_native_round_trip(game):
    text = emit_program(encode_hop(game))
    prog = parse_program(text)
    assert prog == encode_hop(game)
    assert emit_program(prog) == text


def test_native_format_lines(escape):
    text = emit_program(encode_qp(escape))
    assert "term v_1 : ( -1.0*v_0 +1.0*v_1 +0.0 ) (" in text
    assert "group v_1 max { +0.0 ; " in text
    assert text.endswith("end\n")


@pytest.mark.parametrize("text, message", [
    ("states 1\nowner max\n", "missing 'end'"),
    ("states 1\nowner max\nbogus\nend\n", "unknown keyword"),
    ("states 1\nowner max\ncon pin v_3 : +1.0*v_0 +0.0 = +1.0\nend\n", "unknown variable"),
    ("states 1\nowner max\ncon pin v_0 : +1.0*v_0 +0.0 +1.0\nend\n", "exactly one of"),
    ("states 2\nowner max\nend\n", "owners"),
    ("states 1\nowner max\nend\nstates 2\n", "after 'end'"),
])
def test_parse_program_errors(text, message):
    with pytest.raises(ProgramFormatError, match=message):
        parse_program(text)


def test_unknown_format(escape):
    with pytest.raises(ProgramFormatError):
        emit_program(encode_qp(escape), "mps")


# Verification

def test_verify_escape_oracle_values(escape):
    text = emit_program(encode_qp(escape))
    report = mathprog_service.verify(text, [0.5, 0.5, 1.0, 0.0])
    assert report.passed
    assert report.objective == 0.0
    assert report.selections == [1, 1]


def test_verify_detects_group_violation(escape):
    report = verify_solution(encode_qp(escape), [1.0, 1.0, 1.0, 0.0])
    assert not report.passed
    assert report.objective == 0.0
    assert report.max_residual == pytest.approx(1 / 3)
    assert report.worst.startswith("g")


def test_verify_detects_pin_violation(escape):
    report = verify_solution(encode_qp(escape), [0.0, 0.0, 0.0, 0.0])
    assert not report.passed
    assert report.max_residual == 1.0
    assert "pin" in report.worst


def test_verify_exact_values(escape):
    assert verify_solution(encode_hop(escape), ESCAPE_VALUES).passed


def test_complete_point_sets_auxiliaries():
    game = gen_mulmec(1)
    prog = encode_hop(game)
    values = [float(v) for v in exact_solve(game).values]
    x = complete_point(prog, values)
    assert len(x) == prog.num_vars
    for group in prog.groups:
        if group.target >= prog.num_states:
            assert x[group.target] == pytest.approx(group.value(x))
    with pytest.raises(ValueError):
        complete_point(prog, values[:-1])


# Local solver

def test_local_solve_escape_warm_start(escape):
    result = mathprog_service.solve_local(escape, FORM_HOP)
    assert result.converged
    assert result.statistics["verified"]
    assert result.values == pytest.approx([0.5, 0.5, 1.0, 0.0], abs=1e-6)
    assert result.sigma[Q] == 1


def test_local_solve_escape_random_starts(escape):
    outcome = local_solve(encode_qp(escape), cfg=LocalSolveConfig(restarts=3, seed=11))
    assert outcome.verified
    assert outcome.status == "OK"
    assert outcome.values == pytest.approx([0.5, 0.5, 1.0, 0.0], abs=1e-9)


def test_local_solve_qp_pipeline_maps_back():
    game = parse_game(WIDE_TEXT)
    result = mathprog_service.solve_local(game, FORM_QP)
    assert result.statistics["verified"]
    assert len(result.values) == game.num_states
    expected = [float(v) for v in exact_solve(game).values]
    assert result.values == pytest.approx(expected, abs=1e-6)


def test_local_solve_stopping_chain():
    game = transform_stopping(parse_game(CHAIN_TEXT), 0.01)
    outcome = local_solve(encode_hop(game), cfg=LocalSolveConfig(seed=3))
    assert outcome.verified
    expected = [float(v) for v in exact_solve(game).values]
    assert outcome.values == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_verified_local_solutions_are_values(seed):
    game = transform_stopping(random_game(seed, n_states=4), 0.05)
    outcome = local_solve(encode_hop(game), cfg=LocalSolveConfig(seed=seed))
    if outcome.verified:
        expected = [float(v) for v in exact_solve(game).values]
        assert outcome.values == pytest.approx(expected, abs=1e-4)


def test_local_solve_reports_unverified(escape):
    # a single step from a point with the wrong group selection cannot verify
    outcome = local_solve(encode_qp(escape), [0.0, 0.0, 0.0, 0.0], LocalSolveConfig(restarts=1, max_steps=1))
    assert not outcome.verified
    assert outcome.status == "NOT-VERIFIED"


def test_local_solve_warm_start_length(escape):
    with pytest.raises(ValueError):
        local_solve(encode_qp(escape), [0.5])


@pytest.mark.slow
def test_hop_local_mulmec_100():
    game = gen_mulmec(100)
    result = mathprog_service.solve_local(game, FORM_HOP)
    assert result.statistics["verified"]
    for i in range(100):
        assert result.values[3 * i] == pytest.approx(0.99 ** (100 - i), abs=1e-6)
