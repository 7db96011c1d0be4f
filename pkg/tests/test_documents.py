import json
from fractions import Fraction

import pytest

from dynkin.documents import (
    DocumentError,
    document_text,
    parse_game,
    parse_profile,
    parse_rational,
    serialize_game,
    serialize_profile,
)
from dynkin.fixtures import EXAMPLES, example_document
from dynkin.games import Coalition


def test_parse_rational_strict_grammar():
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational("-3") == Fraction(-3)
    assert parse_rational("2/4") == Fraction(1, 2)
    for bad in ("0.5", "1/0", "a/b", "", "1 / 2", 0.5, None, "1e3"):
        with pytest.raises(DocumentError):
            parse_rational(bad)


def test_parse_fixture_dimensions(deterministic_game):
    assert deterministic_game.num_players == 3
    assert deterministic_game.horizon == 2
    assert len(deterministic_game.payoffs) == 21
    assert deterministic_game.payoff(2, Coalition.of((2,))).at(1) == Fraction(3, 2)


def test_decimal_probability_is_rejected():
    doc = example_document("paper-5-1")
    doc["tree"]["nodes"][1]["prob"] = "0.5"
    with pytest.raises(DocumentError, match=r"tree.nodes\[1\].prob"):
        parse_game(document_text(doc))


def test_decimal_payoff_value_is_rejected():
    doc = example_document("paper-5-1")
    doc["payoffs"][0]["values"]["1"] = "0.25"
    with pytest.raises(DocumentError, match="rational"):
        parse_game(document_text(doc))


def test_missing_coalition_without_default_fails():
    doc = example_document("paper-5-1")
    doc["payoffs"] = [
        entry
        for entry in doc["payoffs"]
        if not (entry["player"] == 2 and entry["coalition"] == [2, 3])
    ]
    with pytest.raises(DocumentError, match="payoffs not total"):
        parse_game(document_text(doc))


def test_default_payoff_fills_missing_pairs():
    doc = example_document("counterexample-b")
    # keep only player 1's pair-coalition process; defaults cover the rest
    doc["payoffs"] = [
        entry for entry in doc["payoffs"]
        if entry["player"] == 1 and entry["coalition"] == [1, 2]
    ]
    doc["default_payoff"] = {"values": {"0": "0", "1": "0", "2": "0", "3": "1"}}
    spec = parse_game(document_text(doc), enforce_assumption_a=False)
    assert len(spec.payoffs) == 6
    assert spec.payoff(2, Coalition.of((1, 2))).at(1) == 0
    assert spec.payoff(1, Coalition.of((1, 2))).at(1) == 1


def test_value_for_unknown_node_fails():
    doc = example_document("paper-5-1")
    doc["payoffs"][0]["values"]["9"] = "1"
    with pytest.raises(DocumentError, match="node 9 does not exist"):
        parse_game(document_text(doc))


def test_unknown_parent_fails_validation():
    doc = example_document("paper-5-1")
    doc["tree"]["nodes"][2]["parent"] = 77
    with pytest.raises(DocumentError, match="parent 77"):
        parse_game(document_text(doc))


def test_schema_version_is_checked():
    doc = example_document("paper-5-1")
    doc["schema_version"] = "0"
    with pytest.raises(DocumentError, match="schema_version"):
        parse_game(document_text(doc))


def test_malformed_json_is_reported():
    with pytest.raises(DocumentError, match="not valid JSON"):
        parse_game("{nope")


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_round_trip_is_canonical(name):
    doc = example_document(name)
    text = document_text(doc)
    spec = parse_game(text, enforce_assumption_a=False)
    assert serialize_game(spec) == doc
    assert document_text(serialize_game(spec)) == text
    assert json.loads(text) == doc


def test_profile_round_trip(deterministic_game):
    text = json.dumps(
        {
            "rules": [
                {"player": 1, "stops": [1]},
                {"player": 2, "stops": []},
                {"player": 3, "stops": [0, 2]},
            ]
        }
    )
    profile = parse_profile(text, deterministic_game)
    assert profile.rule_for(1).stop_set == frozenset({1})
    assert profile.rule_for(2).is_never
    # canonicalized: the stage-2 flag is dominated by the root flag
    assert profile.rule_for(3).stop_set == frozenset({0})
    assert serialize_profile(profile) == {
        "rules": [
            {"player": 1, "stops": [1]},
            {"player": 2, "stops": []},
            {"player": 3, "stops": [0]},
        ]
    }


def test_profile_errors(deterministic_game):
    with pytest.raises(DocumentError, match="node 9"):
        parse_profile('{"rules": [{"player": 1, "stops": [9]}]}', deterministic_game)
    with pytest.raises(DocumentError, match="missing rules"):
        parse_profile('{"rules": [{"player": 1, "stops": []}]}', deterministic_game)
    with pytest.raises(DocumentError, match="duplicate player"):
        parse_profile(
            '{"rules": [{"player": 1, "stops": []}, {"player": 1, "stops": []},'
            ' {"player": 2, "stops": []}, {"player": 3, "stops": []}]}',
            deterministic_game,
        )
