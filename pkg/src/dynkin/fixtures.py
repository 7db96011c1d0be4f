"""Built-in example games, emitted as canonical JSON documents.

Names are part of the command line contract.  All four games have every
coalition's terminal payoff coerced to the all-players value, which the
finite-horizon model requires (stopping at the horizon always involves
everyone); the two "counterexample" games additionally violate the
joint-stop hypothesis on purpose, so they load only with that check off.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .documents import SCHEMA_VERSION, format_rational
from .games import all_coalitions


def _doc(players: int, horizon: int, nodes: list[dict], payoffs: list[dict]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "players": players,
        "horizon": horizon,
        "tree": {"nodes": nodes},
        "payoffs": payoffs,
    }


def _payoff_entry(player: int, coalition, values: dict[int, Fraction]) -> dict:
    return {
        "player": player,
        "coalition": list(coalition.players),
        "values": {str(k): format_rational(v) for k, v in sorted(values.items())},
    }


def _single_path_nodes(horizon: int) -> list[dict]:
    nodes = [{"id": 0, "time": 0, "parent": None, "prob": "1"}]
    for t in range(1, horizon + 1):
        nodes.append({"id": t, "time": t, "parent": t - 1, "prob": "1"})
    return nodes


def three_player_deterministic() -> dict:
    """Three players, horizon 2, deterministic payoffs on a single branch.

    Everyone gets 1/8 for stopping at stage 0 and 0 at the end; the stage-1
    payoffs reward letting exactly one opponent stop (1/2 when player 1 or
    3 stops alone, 3/2 for player 2 stopping alone) and punish joint stops.
    Small tolerances make the sweep stop one player at stage 1 while both
    others wait, and which player that is depends on the visiting order.
    """
    table = {
        1: {(1,): "1/2", (2,): "1/4", (3,): "1/2", (1, 2): "1/4",
            (1, 3): "1/2", (2, 3): "1/4", (1, 2, 3): "1/4"},
        2: {(1,): "1/2", (2,): "3/2", (3,): "1/2", (1, 2): "1/4",
            (1, 3): "1/2", (2, 3): "1/4", (1, 2, 3): "1/2"},
        3: {(1,): "1/2", (2,): "1/4", (3,): "1/2", (1, 2): "1/4",
            (1, 3): "1/2", (2, 3): "1/4", (1, 2, 3): "1/4"},
    }
    payoffs = []
    for player in (1, 2, 3):
        for coalition in all_coalitions(3):
            values = {
                0: Fraction(1, 8),
                1: Fraction(table[player][coalition.players]),
                2: Fraction(0),
            }
            payoffs.append(_payoff_entry(player, coalition, values))
    return _doc(3, 2, _single_path_nodes(2), payoffs)


def two_player_walk() -> dict:
    """Two players, horizon 3, driven by a symmetric +-1 walk.

    Each stage reveals an independent pair (M, Q) uniform on {-1, 1}^2; the
    walk is the running sum of the M draws.  Player 1's payoffs track the
    walk (stopping alone pays the walk itself, +1/2 jointly, +1 when
    player 2 stops alone); player 2's add the fresh Q draw, so stopping is
    attractive exactly after an up-tick of Q.  Root payoffs sit at -2 (and
    -3/2 / -1 for the larger coalitions) so that no tolerance up to 1/2
    makes stopping before the first draw worthwhile.
    """
    branches = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    quarter = "1/4"
    nodes: list[dict] = [{"id": 0, "time": 0, "parent": None, "prob": "1"}]
    # state per node id: (walk sum, latest Q draw)
    state: dict[int, tuple[int, int]] = {0: (0, 0)}
    frontier = [0]
    next_id = 1
    for t in range(1, 4):
        new_frontier = []
        for parent in frontier:
            s_parent, _ = state[parent]
            for m, q in branches:
                nodes.append(
                    {"id": next_id, "time": t, "parent": parent, "prob": quarter}
                )
                state[next_id] = (s_parent + m, q)
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier

    half = Fraction(1, 2)
    base1: dict[int, Fraction] = {}
    base2: dict[int, Fraction] = {}
    terminal1: dict[int, Fraction] = {}
    terminal2: dict[int, Fraction] = {}
    for node in nodes:
        node_id, t = node["id"], node["time"]
        s, q = state[node_id]
        if t == 0:
            base1[node_id] = Fraction(-2)
            base2[node_id] = Fraction(-2)
        else:
            base1[node_id] = Fraction(s)
            base2[node_id] = Fraction(s + q)
        if t == 3:
            terminal1[node_id] = Fraction(s) + half
            terminal2[node_id] = Fraction(s + q) + half

    def process(base: dict[int, Fraction], bump: Fraction, terminal: dict[int, Fraction]) -> dict[int, Fraction]:
        values = {}
        for node_id, b in base.items():
            values[node_id] = terminal.get(node_id, b + bump)
        return values

    coalition_bumps = {
        # (player, coalition) -> bump over the player's base process
        (1, (1,)): Fraction(0),
        (1, (1, 2)): half,
        (1, (2,)): Fraction(1),
        (2, (2,)): Fraction(0),
        (2, (1, 2)): half,
        (2, (1,)): Fraction(1),
    }
    payoffs = []
    for player, base, terminal in ((1, base1, terminal1), (2, base2, terminal2)):
        for coalition in all_coalitions(2):
            bump = coalition_bumps[(player, coalition.players)]
            payoffs.append(
                _payoff_entry(player, coalition, process(base, bump, terminal))
            )
    return _doc(2, 3, nodes, payoffs)


def timing_matching_pennies() -> dict:
    """Two players, horizon 3, deterministic: player 1 wins 1 when both stop
    at the same effective stage, player 2 loses it.  No profile is stable
    for tolerances below 1, hence there is nothing for a solver to find.
    """
    p1 = {(1,): 0, (2,): 0, (1, 2): 1}
    p2 = {(2,): 0, (1,): 0, (1, 2): -1}
    payoffs = []
    for player, table in ((1, p1), (2, p2)):
        for coalition in all_coalitions(2):
            terminal = Fraction(table[(1, 2)])
            values = {
                t: (terminal if t == 3 else Fraction(table[coalition.players]))
                for t in range(4)
            }
            payoffs.append(_payoff_entry(player, coalition, values))
    return _doc(2, 3, _single_path_nodes(3), payoffs)


def one_sided_timing() -> dict:
    """Variant of the matching game where player 2 is fully indifferent:
    simultaneous stops at any stage are equilibria despite the violated
    joint-stop hypothesis.
    """
    payoffs = []
    for coalition in all_coalitions(2):
        values1 = {
            t: Fraction(1 if (coalition.players == (1, 2) or t == 3) else 0)
            for t in range(4)
        }
        payoffs.append(_payoff_entry(1, coalition, values1))
    for coalition in all_coalitions(2):
        payoffs.append(_payoff_entry(2, coalition, {t: Fraction(0) for t in range(4)}))
    return _doc(2, 3, _single_path_nodes(3), payoffs)


EXAMPLES: dict[str, Callable[[], dict]] = {
    "paper-5-1": three_player_deterministic,
    "paper-5-3": two_player_walk,
    "counterexample-a": timing_matching_pennies,
    "counterexample-b": one_sided_timing,
}


def example_document(name: str) -> dict:
    try:
        builder = EXAMPLES[name]
    except KeyError:
        known = ", ".join(sorted(EXAMPLES))
        raise KeyError(f"unknown example {name!r}; available: {known}") from None
    return builder()
