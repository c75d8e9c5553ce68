"""Tests for the model generators."""
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from services.game import Player, game_mecs, parse_game, serialize_game
from services.generators import (
    RandomGameParams,
    gen_bigmec,
    gen_hm,
    gen_mulmec,
    gen_random,
    generator_service,
)


@pytest.mark.parametrize("m, states", [(100, 302), (1000, 3002)])
def test_mulmec_counts(m, states):
    game = gen_mulmec(m)
    assert game.num_states == states
    assert len(game_mecs(game)) == m


@pytest.mark.parametrize("n, states", [(100, 203), (1000, 2003)])
def test_bigmec_counts(n, states):
    game = gen_bigmec(n)
    assert game.num_states == states
    (mec,) = game_mecs(game)
    assert len(mec) == 2 * n + 1


def test_hm_counts():
    game = gen_hm(30)
    assert game.num_states == 61
    assert game.action_count_stats() == (1, 1.0)


@pytest.mark.parametrize("size", [1, 2, 3, 7, 50])
def test_closed_form_counts(size):
    assert gen_mulmec(size).num_states == 3 * size + 2
    assert len(game_mecs(gen_mulmec(size))) == size
    assert gen_bigmec(size).num_states == 2 * size + 3
    assert [len(m) for m in game_mecs(gen_bigmec(size))] == [2 * size + 1]
    assert gen_hm(size).num_states == 2 * size + 1


@pytest.mark.parametrize("generator", [gen_mulmec, gen_bigmec, gen_hm])
def test_size_must_be_positive(generator):
    with pytest.raises(ValueError):
        generator(0)


@pytest.mark.parametrize("game", [gen_mulmec(5), gen_bigmec(5), gen_hm(5)], ids=["mulmec", "bigmec", "hm"])
def test_generated_games_pass_validation(game):
    assert parse_game(serialize_game(game), exact=True) == game


def test_random_is_deterministic():
    assert gen_random(42, 6) == gen_random(42, 6)
    assert gen_random(42, 6) != gen_random(43, 6)


def test_random_without_minimizer_is_mdp():
    game = gen_random(3, 6, minimizer_fraction=0.0)
    assert all(owner is Player.MAX for owner in game.owners)


@hyp_settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    n_states=st.integers(min_value=2, max_value=12),
    max_actions=st.integers(min_value=1, max_value=4),
    max_branching=st.integers(min_value=1, max_value=5),
)
def test_random_games_are_valid(seed, n_states, max_actions, max_branching):
    game = gen_random(seed, n_states, max_actions, max_branching)
    assert game.num_states == n_states
    assert game.targets
    for s in game.states:
        if s in game.targets:
            continue
        assert 1 <= len(game.actions[s]) <= max_actions
        for act in game.actions[s]:
            assert len(act.successors) <= max_branching
            assert sum(p for _, p in act.successors) == 1
    assert parse_game(serialize_game(game), exact=True) == game


def test_service_dispatch():
    assert generator_service.generate("mulmec", 4).num_states == 14
    random = generator_service.generate("random", random=RandomGameParams(seed=5, n_states=4))
    assert random == gen_random(5, 4)
    with pytest.raises(ValueError, match="unknown model family"):
        generator_service.generate("prison")
