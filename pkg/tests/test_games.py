from fractions import Fraction
from random import Random

import pytest

from dynkin.games import (
    Coalition,
    GameSpec,
    StrategyProfile,
    all_coalitions,
    embed_finite_horizon,
    expected_payoffs,
    realized_outcome,
    validate_game,
)
from dynkin.randomgen import random_game
from dynkin.trees import (
    NEVER,
    NEVER_RULE,
    AdaptedProcess,
    StoppingRule,
    canonicalize_rule,
    stop_everywhere_at,
)
from gens import single_path_tree


def path_profile(tree, *stop_times):
    """Profile on a single-path tree from per-player stop stages (None = never)."""
    rules = tuple(
        NEVER_RULE if t is None else StoppingRule(frozenset({t})) for t in stop_times
    )
    return StrategyProfile(rules)


def two_player_path_game(values):
    """Single-path game from {(player, coalition): stage values} for quick cases."""
    horizon = len(next(iter(values.values()))) - 1
    tree = single_path_tree(horizon)
    payoffs = {}
    for player in (1, 2):
        for coalition in all_coalitions(2):
            stages = values[(player, coalition.players)]
            payoffs[(player, coalition)] = AdaptedProcess(
                {t: Fraction(v) for t, v in enumerate(stages)}
            )
    return GameSpec(num_players=2, horizon=horizon, tree=tree, payoffs=payoffs)


def test_coalition_canonical_form():
    assert Coalition.of([3, 1, 1]).players == (1, 3)
    assert Coalition.everyone(3).players == (1, 2, 3)
    assert Coalition.of((2,)).with_member(1).players == (1, 2)
    assert 2 in Coalition.of((1, 2))
    with pytest.raises(ValueError):
        Coalition.of([])
    with pytest.raises(ValueError):
        Coalition.of([0, 1])


def test_all_coalitions_counts():
    assert len(all_coalitions(2)) == 3
    assert len(all_coalitions(3)) == 7
    assert all_coalitions(2)[0].players == (1,)


def test_validate_accepts_fixture(deterministic_game):
    assert validate_game(deterministic_game) == []


def test_validate_flags_joint_stop_violation():
    game = two_player_path_game(
        {
            (1, (1,)): (0, 0, 1),
            (1, (2,)): (0, 0, 1),
            (1, (1, 2)): (0, 1, 1),  # joint beats solo at stage 1
            (2, (2,)): (0, 0, 2),
            (2, (1,)): (0, 0, 2),
            (2, (1, 2)): (0, 0, 2),
        }
    )
    violations = validate_game(game, enforce_assumption_a=True)
    assert len(violations) == 1
    assert "player 1 vs 2 at node 1" in violations[0]
    assert validate_game(game, enforce_assumption_a=False) == []


def test_validate_flags_missing_coalition(deterministic_game):
    payoffs = dict(deterministic_game.payoffs)
    del payoffs[(2, Coalition.of((1, 3)))]
    broken = GameSpec(
        num_players=3,
        horizon=2,
        tree=deterministic_game.tree,
        payoffs=payoffs,
    )
    violations = validate_game(broken)
    assert any("payoffs not total" in v and "player 2" in v for v in violations)


def test_validate_flags_terminal_mismatch():
    game = two_player_path_game(
        {
            (1, (1,)): (0, 0, 0),
            (1, (2,)): (0, 0, 0),
            (1, (1, 2)): (0, 0, 1),  # differs from the others at the leaf
            (2, (2,)): (0, 0, 0),
            (2, (1,)): (0, 0, 0),
            (2, (1, 2)): (0, 0, 0),
        }
    )
    violations = validate_game(game, enforce_assumption_a=False)
    assert any("terminal coincidence" in v for v in violations)
    with pytest.raises(ValueError, match="cannot embed"):
        embed_finite_horizon(game)


def test_realized_outcome_examples(deterministic_game):
    tree = deterministic_game.tree
    leaf = tree.leaves[0].id
    stage, coalition = realized_outcome(deterministic_game, path_profile(tree, 1, 2, 2), leaf)
    assert (stage, coalition.players) == (1, (1,))
    stage, coalition = realized_outcome(
        deterministic_game, path_profile(tree, None, None, None), leaf
    )
    assert stage == NEVER and coalition.players == (1, 2, 3)
    stage, coalition = realized_outcome(deterministic_game, path_profile(tree, 1, 2, 1), leaf)
    assert (stage, coalition.players) == (1, (1, 3))


def test_expected_payoffs_against_published_table(deterministic_game):
    tree = deterministic_game.tree
    assert expected_payoffs(deterministic_game, path_profile(tree, 1, 2, 2)) == (
        Fraction(1, 2),
        Fraction(1, 2),
        Fraction(1, 2),
    )
    assert expected_payoffs(deterministic_game, path_profile(tree, 2, 1, 2)) == (
        Fraction(1, 4),
        Fraction(3, 2),
        Fraction(1, 4),
    )
    assert expected_payoffs(deterministic_game, path_profile(tree, 2, 2, 2)) == (
        Fraction(0),
        Fraction(0),
        Fraction(0),
    )


def test_embed_is_identity_plus_flag(deterministic_game):
    embedded = embed_finite_horizon(deterministic_game)
    assert embedded.embedded
    assert embedded.payoffs == deterministic_game.payoffs
    assert embedded == deterministic_game  # node-level data unchanged


def random_profile(rng, game, density=0.2):
    rules = []
    for _ in game.players:
        flags = {n.id for n in game.tree.nodes if rng.random() < density}
        rules.append(canonicalize_rule(game.tree, flags))
    return StrategyProfile(tuple(rules))


def test_capping_never_rules_keeps_payoffs(walk_game):
    rng = Random(11)
    for _ in range(25):
        profile = random_profile(rng, walk_game, density=0.1)
        capped = profile.capped(walk_game.tree)
        assert expected_payoffs(walk_game, profile) == expected_payoffs(walk_game, capped)


def test_capping_random_games_keeps_payoffs():
    rng = Random(23)
    for _ in range(25):
        game = random_game(rng, rng.choice((2, 3)), rng.choice((2, 3)))
        profile = random_profile(rng, game)
        assert expected_payoffs(game, profile) == expected_payoffs(
            game, profile.capped(game.tree)
        )


def test_exactly_one_coalition_event_fires_per_leaf(deterministic_game):
    tree = deterministic_game.tree
    profile = path_profile(tree, 1, 1, 2)
    for leaf in tree.leaves:
        stage, _ = realized_outcome(deterministic_game, profile, leaf.id)
        active = []
        for coalition in all_coalitions(3):
            times = {
                i: profile.rule_for(i).stop_time(tree, leaf.id)
                for i in deterministic_game.players
            }
            if all(times[j] == stage for j in coalition) and all(
                times[j] > stage for j in deterministic_game.players if j not in coalition
            ):
                active.append(coalition)
        assert len(active) == 1


def test_stop_everywhere_at_covers_every_path(walk_game):
    tree = walk_game.tree
    rule = stop_everywhere_at(tree, 2)
    assert all(rule.stop_time(tree, leaf.id) == 2 for leaf in tree.leaves)
