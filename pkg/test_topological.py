"""Tests for SCC-by-SCC solving and the sub-game gadget."""
from fractions import Fraction

import pytest

from services.bvi import BviConfig, solve_bvi
from services.exceptions import OrderingError
from services.game import parse_game
from services.generators import gen_mulmec
from services.oracle import exact_solve
from services.si import SiConfig
from services.topological import TopoConfig, build_subgame, plan, topo_solve

P, Q, T, O = 0, 1, 2, 3
THIRD = Fraction(1, 3)

ACYCLIC_TEXT = """\
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


def test_subgame_gadget_escape(escape):
    sub = build_subgame(escape, frozenset({P, Q}), {T: 1, O: 0})
    assert sub.num_states == 4
    assert sub.targets == frozenset({2})
    assert sub.actions[1][1].successors == ((1, THIRD), (2, THIRD), (3, THIRD))
    assert sub.actions[0][0].successors == ((1, Fraction(1)),)
    assert sub.actions[3][0].successors == ((3, Fraction(1)),)


def test_subgame_external_value_one_goes_to_target(escape):
    sub = build_subgame(escape, frozenset({P, Q}), {T: 1, O: 1})
    assert sub.actions[1][1].successors == ((1, THIRD), (2, 2 * THIRD))


def test_subgame_requires_solved_successors(escape):
    with pytest.raises(OrderingError):
        build_subgame(escape, frozenset({P, Q}), {T: 1})


def test_subgame_values_match_oracle(random_batch):
    for solved in random_batch[:80]:
        game, values = solved.game, solved.values
        topo = plan(game)
        for scc, nontrivial in zip(topo.sccs, topo.nontrivial):
            if not nontrivial:
                continue
            members = sorted(scc)
            outside = {s: values[s] for s in game.states if s not in scc}
            local = exact_solve(build_subgame(game, scc, outside)).values
            assert local[:len(members)] == [values[s] for s in members], f"seed {solved.seed}"


def test_plan_escape(escape):
    topo = plan(escape)
    assert topo.chain_depth() == 1
    assert topo.sccs[-1] == frozenset({P, Q})
    assert sum(topo.settled) == 2


def test_plan_mulmec_chain_depth():
    assert plan(gen_mulmec(100)).chain_depth() == 100


def test_topo_bvi_escape(escape):
    result = topo_solve(escape, TopoConfig(epsilon=1e-6))
    assert result.converged
    assert result.values[P] == pytest.approx(0.5, abs=1e-6)
    assert result.statistics["sub_solves"] == 1
    assert result.statistics["chain_depth"] == 1
    assert result.sigma[Q] == 1


@pytest.mark.parametrize("sub_solver", ["si", "hop-local", "qp-local"])
def test_topo_other_sub_solvers_escape(escape, sub_solver):
    result = topo_solve(escape, TopoConfig(sub_solver=sub_solver))
    assert result.converged
    assert float(result.values[P]) == pytest.approx(0.5, abs=1e-6)


def test_topo_acyclic_needs_no_sub_solve():
    game = parse_game(ACYCLIC_TEXT)
    result = topo_solve(game)
    assert result.statistics["sub_solves"] == 0
    assert result.values == pytest.approx([0.5, 0.2, 1.0, 0.0])
    assert result.sigma[0] == 1
    assert result.tau[1] == 1


def test_topo_rational_si_matches_oracle(random_batch):
    cfg = TopoConfig(sub_solver="si", si=SiConfig(exact_rational=True))
    for solved in random_batch:
        result = topo_solve(solved.game, cfg)
        assert result.values == solved.values, f"seed {solved.seed}"


def test_topo_bvi_error_within_accumulated_bound(random_batch):
    cfg = TopoConfig(epsilon=1e-6)
    for solved in random_batch:
        result = topo_solve(solved.game, cfg)
        bound = result.statistics["global_gap_bound"]
        depth = result.statistics["chain_depth"]
        assert bound <= max(depth, 1) * 1e-6
        expected = [float(v) for v in solved.values]
        assert result.values == pytest.approx(expected, abs=bound + 1e-9), f"seed {solved.seed}"


def test_topo_bvi_close_to_global_bvi(random_batch):
    for solved in random_batch[:60]:
        topo = topo_solve(solved.game, TopoConfig(epsilon=1e-6))
        flat = solve_bvi(solved.game, BviConfig(epsilon=1e-6))
        tolerance = max(topo.statistics["chain_depth"], 1) * 1e-6 + 1e-6 + 1e-12
        assert topo.values == pytest.approx(flat.values, abs=tolerance), f"seed {solved.seed}"


def test_tighten_keeps_global_bound_below_epsilon():
    result = topo_solve(gen_mulmec(20), TopoConfig(epsilon=1e-4, tighten=True))
    assert result.statistics["global_gap_bound"] <= 1e-4
    for i in range(20):
        assert result.values[3 * i] == pytest.approx(0.99 ** (20 - i), abs=1e-4)


@pytest.mark.slow
def test_topo_si_mulmec_1000_exact():
    cfg = TopoConfig(sub_solver="si", si=SiConfig(exact_rational=True))
    result = topo_solve(gen_mulmec(1000), cfg)
    assert result.statistics["chain_depth"] == 1000
    for i in (0, 1, 500, 998, 999):
        assert result.values[3 * i] == Fraction(99, 100) ** (1000 - i)
