"""Tests for the exhaustive strategy-enumeration oracle."""
from fractions import Fraction

import pytest

from conftest import ESCAPE_VALUES, random_game
from services.exceptions import BudgetExceededError
from services.game import Player, Strategy, bellman_residual, induce_and_solve
from services.generators import gen_bigmec, gen_hm, gen_mulmec
from services.oracle import exact_solve
from services.oracle.service import _strategies


def test_oracle_escape(escape):
    result = exact_solve(escape)
    assert result.values == ESCAPE_VALUES
    assert result.exact
    assert result.sigma[1] == 1
    assert result.statistics["profiles"] == 2


def test_oracle_hm_value_half():
    result = exact_solve(gen_hm(30))
    assert result.values[0] == Fraction(1, 2)


def test_oracle_mulmec_single():
    values = exact_solve(gen_mulmec(1)).values
    assert values[:3] == [Fraction(99, 100), Fraction(1, 2), Fraction(1)]


def test_oracle_bigmec_small():
    values = exact_solve(gen_bigmec(2)).values
    assert values[:5] == [Fraction(3, 4)] * 5
    assert values[5:] == [1, 0]


def test_oracle_budget():
    with pytest.raises(BudgetExceededError):
        exact_solve(gen_mulmec(10), budget=1000)


def test_oracle_values_are_fixpoints(random_batch):
    for solved in random_batch:
        assert bellman_residual(solved.game, solved.values) == 0


def test_returned_profile_is_optimal_everywhere(random_batch):
    for solved in random_batch:
        game, result = solved.game, solved.oracle
        achieved = induce_and_solve(game, result.sigma, result.tau, game.targets, exact=True)
        assert achieved == result.values, f"seed {solved.seed}"


@pytest.mark.parametrize("seed", range(25))
def test_sup_inf_equals_inf_sup(seed):
    game = random_game(seed, n_states=2 + seed % 4)
    sigmas = _strategies(game, Player.MAX)
    taus = _strategies(game, Player.MIN)
    table = [[induce_and_solve(game, s, t, game.targets, exact=True) for t in taus] for s in sigmas]
    for state in game.states:
        sup_inf = max(min(row[j][state] for j in range(len(taus))) for row in table)
        inf_sup = min(max(table[i][j][state] for i in range(len(sigmas))) for j in range(len(taus)))
        assert sup_inf == inf_sup


def test_mdp_is_max_over_strategies():
    game = random_game(7, minimizer_fraction=0.0)
    tau = Strategy(Player.MIN, {})
    best = [
        max(values)
        for values in zip(*(induce_and_solve(game, s, tau, game.targets, exact=True)
                            for s in _strategies(game, Player.MAX)))
    ]
    assert exact_solve(game).values == best
