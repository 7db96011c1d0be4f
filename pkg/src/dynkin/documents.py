"""JSON game documents: strict parsing, validation and canonical output.

Rationals travel as strings like "3/4" or "-2"; decimal notation is
rejected so no value can silently lose exactness.  Parse errors carry a
path into the document.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .games import Coalition, GameSpec, StrategyProfile, all_coalitions, validate_game
from .trees import AdaptedProcess, Node, ScenarioTree, canonicalize_rule

SCHEMA_VERSION = "1"

_RATIONAL = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class DocumentError(ValueError):
    """Malformed or invalid game document; message names the offending path."""


def parse_rational(text: Any, where: str = "value") -> Fraction:
    """Parse "p/q" or integer strings; anything else (decimals included) fails."""
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise DocumentError(
            f"{where}: expected a rational string like \"1/2\" or \"-3\", got {text!r}"
        )
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    return str(value)


def _require(doc: dict, key: str, kind: type, where: str) -> Any:
    if key not in doc:
        raise DocumentError(f"{where}: missing required field \"{key}\"")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise DocumentError(f"{where}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def _parse_tree(doc: Any, where: str) -> ScenarioTree:
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object with a \"nodes\" list")
    raw_nodes = _require(doc, "nodes", list, where)
    nodes = []
    for k, raw in enumerate(raw_nodes):
        here = f"{where}.nodes[{k}]"
        if not isinstance(raw, dict):
            raise DocumentError(f"{here}: expected an object")
        node_id = _require(raw, "id", int, here)
        time = _require(raw, "time", int, here)
        parent = raw.get("parent")
        if parent is not None and (not isinstance(parent, int) or isinstance(parent, bool)):
            raise DocumentError(f"{here}.parent: expected an integer or null")
        prob = parse_rational(raw.get("prob"), f"{here}.prob")
        nodes.append(Node(id=node_id, time=time, parent=parent, branch_prob=prob))
    return ScenarioTree(tuple(nodes))


def _parse_values(
    raw: Any, tree: ScenarioTree, where: str
) -> dict[int, Fraction]:
    if not isinstance(raw, dict):
        raise DocumentError(f"{where}: expected an object mapping node ids to rationals")
    values: dict[int, Fraction] = {}
    for key, text in raw.items():
        try:
            node_id = int(key)
        except (TypeError, ValueError):
            raise DocumentError(f"{where}.{key}: node id is not an integer") from None
        if node_id not in tree:
            raise DocumentError(f"{where}.{key}: node {node_id} does not exist")
        values[node_id] = parse_rational(text, f"{where}.{key}")
    return values


def parse_game(text: str, enforce_assumption_a: bool = True) -> GameSpec:
    """Parse and fully validate a game document.

    The optional ``default_payoff`` entry (values only, no player or
    coalition) is expanded to every (player, coalition) pair the document
    does not list explicitly, before validation.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document root: expected a JSON object")

    version = _require(doc, "schema_version", str, "document")
    if version != SCHEMA_VERSION:
        raise DocumentError(
            f"document.schema_version: expected \"{SCHEMA_VERSION}\", got {version!r}"
        )
    players = _require(doc, "players", int, "document")
    horizon = _require(doc, "horizon", int, "document")
    tree = _parse_tree(_require(doc, "tree", dict, "document"), "document.tree")

    payoffs: dict[tuple[int, Coalition], AdaptedProcess] = {}
    raw_payoffs = _require(doc, "payoffs", list, "document")
    for k, raw in enumerate(raw_payoffs):
        here = f"document.payoffs[{k}]"
        if not isinstance(raw, dict):
            raise DocumentError(f"{here}: expected an object")
        player = _require(raw, "player", int, here)
        if not 1 <= player <= players:
            raise DocumentError(f"{here}.player: {player} outside 1..{players}")
        raw_coalition = _require(raw, "coalition", list, here)
        try:
            coalition = Coalition.of(raw_coalition)
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"{here}.coalition: {exc}") from None
        if any(p > players for p in coalition):
            raise DocumentError(
                f"{here}.coalition: members {list(coalition)} outside 1..{players}"
            )
        if (player, coalition) in payoffs:
            raise DocumentError(
                f"{here}: duplicate entry for player {player}, "
                f"coalition {list(coalition)}"
            )
        values = _parse_values(raw.get("values"), tree, f"{here}.values")
        payoffs[(player, coalition)] = AdaptedProcess(values)

    if "default_payoff" in doc:
        raw_default = doc["default_payoff"]
        if not isinstance(raw_default, dict):
            raise DocumentError("document.default_payoff: expected an object")
        default_values = _parse_values(
            raw_default.get("values"), tree, "document.default_payoff.values"
        )
        for i in range(1, players + 1):
            for coalition in all_coalitions(players):
                payoffs.setdefault((i, coalition), AdaptedProcess(dict(default_values)))

    spec = GameSpec(num_players=players, horizon=horizon, tree=tree, payoffs=payoffs)
    violations = validate_game(spec, enforce_assumption_a=enforce_assumption_a)
    if violations:
        raise DocumentError(
            "document failed validation: " + "; ".join(violations)
        )
    return spec


def serialize_game(spec: GameSpec) -> dict:
    """Canonical document for a game: nodes by id, payoffs by (player, coalition)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "players": spec.num_players,
        "horizon": spec.horizon,
        "tree": {
            "nodes": [
                {
                    "id": n.id,
                    "time": n.time,
                    "parent": n.parent,
                    "prob": format_rational(n.branch_prob),
                }
                for n in sorted(spec.tree.nodes, key=lambda n: n.id)
            ]
        },
        "payoffs": [
            {
                "player": player,
                "coalition": list(coalition.players),
                "values": {
                    str(node_id): format_rational(value)
                    for node_id, value in sorted(process.values.items())
                },
            }
            for (player, coalition), process in sorted(
                spec.payoffs.items(), key=lambda item: (item[0][0], item[0][1])
            )
        ],
    }


def document_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_profile(text: str, spec: GameSpec) -> StrategyProfile:
    """Parse a profile document: per-player stop node lists, empty = never."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"profile is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("profile root: expected a JSON object")
    raw_rules = _require(doc, "rules", list, "profile")
    by_player: dict[int, list[int]] = {}
    for k, raw in enumerate(raw_rules):
        here = f"profile.rules[{k}]"
        if not isinstance(raw, dict):
            raise DocumentError(f"{here}: expected an object")
        player = _require(raw, "player", int, here)
        stops = _require(raw, "stops", list, here)
        if player in by_player:
            raise DocumentError(f"{here}: duplicate player {player}")
        for node_id in stops:
            if not isinstance(node_id, int) or isinstance(node_id, bool):
                raise DocumentError(f"{here}.stops: expected node ids, got {node_id!r}")
            if node_id not in spec.tree:
                raise DocumentError(f"{here}.stops: node {node_id} does not exist")
        by_player[player] = stops
    missing = [i for i in spec.players if i not in by_player]
    if missing:
        raise DocumentError(f"profile: missing rules for players {missing}")
    extra = [p for p in by_player if p not in spec.players]
    if extra:
        raise DocumentError(f"profile: unknown players {sorted(extra)}")
    return StrategyProfile(
        tuple(canonicalize_rule(spec.tree, by_player[i]) for i in spec.players)
    )


def serialize_profile(profile: StrategyProfile) -> dict:
    return {
        "rules": [
            {"player": i + 1, "stops": sorted(rule.stop_set)}
            for i, rule in enumerate(profile.rules)
        ]
    }
