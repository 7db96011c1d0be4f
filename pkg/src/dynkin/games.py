"""N-player stopping games with coalition-dependent payoffs.

The game ends at the earliest stage any player stops; each player i is then
paid from the process attached to (i, coalition), where the coalition is
the set of players whose rule attains that earliest stage.  If nobody ever
stops, every player collects the all-players terminal value, which is why
the model requires every coalition's process to coincide at the terminal
stage.

The structural hypothesis validated here (joint stopping with another
player never beats letting that player stop alone) is what makes the
constructive solver in :mod:`dynkin.scheme` converge to an equilibrium.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator

from .trees import (
    NEVER,
    AdaptedProcess,
    NodeId,
    ScenarioTree,
    Stage,
    StoppingRule,
    min_of_rules,
    stop_everywhere_at,
    validate_tree,
)


@dataclass(frozen=True, order=True)
class Coalition:
    """Non-empty sorted set of player indices."""

    players: tuple[int, ...]

    @classmethod
    def of(cls, players: Iterable[int]) -> "Coalition":
        members = tuple(sorted(set(players)))
        if not members:
            raise ValueError("coalition must be non-empty")
        if any(p < 1 for p in members):
            raise ValueError(f"player indices must be >= 1, got {members}")
        return cls(members)

    @classmethod
    def everyone(cls, num_players: int) -> "Coalition":
        return cls.of(range(1, num_players + 1))

    def with_member(self, player: int) -> "Coalition":
        return Coalition.of(self.players + (player,))

    def __contains__(self, player: int) -> bool:
        return player in self.players

    def __iter__(self) -> Iterator[int]:
        return iter(self.players)

    def __len__(self) -> int:
        return len(self.players)


def all_coalitions(num_players: int) -> list[Coalition]:
    """Every non-empty subset of {1..N}, canonically ordered."""
    out = []
    for size in range(1, num_players + 1):
        for combo in itertools.combinations(range(1, num_players + 1), size):
            out.append(Coalition(combo))
    return sorted(out)


@dataclass(frozen=True)
class GameSpec:
    """Players, horizon, tree and one payoff process per (player, coalition)."""

    num_players: int
    horizon: int
    tree: ScenarioTree
    payoffs: dict[tuple[int, Coalition], AdaptedProcess]
    embedded: bool = field(default=False, compare=False)

    def payoff(self, player: int, coalition: Coalition) -> AdaptedProcess:
        try:
            return self.payoffs[(player, coalition)]
        except KeyError:
            raise KeyError(f"no payoff process for player {player}, coalition {coalition.players}") from None

    @property
    def players(self) -> range:
        return range(1, self.num_players + 1)


@dataclass(frozen=True)
class StrategyProfile:
    """One stopping rule per player, index i-1 for player i."""

    rules: tuple[StoppingRule, ...]

    def rule_for(self, player: int) -> StoppingRule:
        return self.rules[player - 1]

    def with_rule(self, player: int, rule: StoppingRule) -> "StrategyProfile":
        rules = list(self.rules)
        rules[player - 1] = rule
        return StrategyProfile(tuple(rules))

    def capped(self, tree: ScenarioTree) -> "StrategyProfile":
        """Replace every rule by its minimum with stop-at-horizon."""
        horizon_rule = stop_everywhere_at(tree, tree.horizon)
        return StrategyProfile(
            tuple(min_of_rules(tree, [r, horizon_rule]) for r in self.rules)
        )


def validate_game(spec: GameSpec, enforce_assumption_a: bool = True) -> list[str]:
    """Return all violated game invariants (empty if the game is well formed).

    Checked: the tree validates and its depth matches the horizon; a total
    payoff process exists for all N * (2^N - 1) (player, coalition) pairs;
    all coalition processes agree at every leaf; and, unless disabled, the
    joint-stop hypothesis X{i, {i,j}} <= X{i, {j}} at every pre-terminal
    node.  Disabling the hypothesis check lets deliberately ill-behaved
    games be loaded for brute-force analysis.
    """
    violations = [f"tree: {v}" for v in validate_tree(spec.tree)]
    if spec.num_players < 2:
        violations.append(f"num_players is {spec.num_players}, expected >= 2")
    if spec.horizon < 1:
        violations.append(f"horizon is {spec.horizon}, expected >= 1")
    if violations:
        return violations
    if spec.tree.horizon != spec.horizon:
        violations.append(
            f"tree depth {spec.tree.horizon} does not match horizon {spec.horizon}"
        )

    coalitions = all_coalitions(spec.num_players)
    for i in spec.players:
        for coalition in coalitions:
            process = spec.payoffs.get((i, coalition))
            if process is None:
                violations.append(
                    f"payoffs not total: missing (player {i}, coalition {coalition.players})"
                )
                continue
            for node_id in process.missing_on(spec.tree):
                violations.append(
                    f"payoff (player {i}, coalition {coalition.players}): "
                    f"no value at node {node_id}"
                )
    if violations:
        return violations

    everyone = Coalition.everyone(spec.num_players)
    for leaf in spec.tree.leaves:
        for i in spec.players:
            terminal = spec.payoff(i, everyone).at(leaf.id)
            for coalition in coalitions:
                if spec.payoff(i, coalition).at(leaf.id) != terminal:
                    violations.append(
                        f"terminal coincidence: player {i}, coalition "
                        f"{coalition.players} at leaf {leaf.id} is "
                        f"{spec.payoff(i, coalition).at(leaf.id)}, expected {terminal}"
                    )

    if enforce_assumption_a:
        for node in spec.tree.nodes:
            if node.time >= spec.horizon:
                continue
            for i in spec.players:
                for j in spec.players:
                    if i == j:
                        continue
                    joint = spec.payoff(i, Coalition.of((i, j))).at(node.id)
                    alone = spec.payoff(i, Coalition.of((j,))).at(node.id)
                    if joint > alone:
                        violations.append(
                            f"joint-stop hypothesis: player {i} vs {j} at node "
                            f"{node.id}: X(i,{{i,j}})={joint} > X(i,{{j}})={alone}"
                        )
    return violations


def realized_outcome(
    spec: GameSpec, profile: StrategyProfile, leaf_id: NodeId
) -> tuple[Stage, Coalition]:
    """Termination stage and stopping coalition on one path.

    The stage is the minimum of the players' stop times; the coalition is
    the set of players attaining it.  When nobody stops, the coalition is
    all players by convention.
    """
    times = {i: profile.rule_for(i).stop_time(spec.tree, leaf_id) for i in spec.players}
    stage = min(times.values())
    if stage == NEVER:
        return NEVER, Coalition.everyone(spec.num_players)
    return stage, Coalition.of(i for i, t in times.items() if t == stage)


def expected_payoffs(spec: GameSpec, profile: StrategyProfile) -> tuple[Fraction, ...]:
    """Expected payoff vector of the profile, one exact value per player.

    On never-stopped paths each player collects the all-players value at
    the leaf, which every coalition process shares by terminal coincidence.
    """
    totals = [Fraction(0) for _ in spec.players]
    for leaf in spec.tree.leaves:
        prob = spec.tree.path_probability(leaf.id)
        stage, coalition = realized_outcome(spec, profile, leaf.id)
        node_id = leaf.id if stage == NEVER else spec.tree.path_to(leaf.id)[int(stage)].id
        for i in spec.players:
            totals[i - 1] += prob * spec.payoff(i, coalition).at(node_id)
    return tuple(totals)


def embed_finite_horizon(spec: GameSpec) -> GameSpec:
    """Mark the game as embedded into the unbounded-stage model.

    The embedding treats every payoff process as constant from the terminal
    stage on; node-level data is unchanged because the never-stop
    convention in expectations already realizes it.  Requires terminal
    coincidence, which makes capped and uncapped payoff views agree.
    """
    violations = [v for v in validate_game(spec, enforce_assumption_a=False)]
    coincidence = [v for v in violations if v.startswith("terminal coincidence")]
    if coincidence:
        raise ValueError("cannot embed: " + "; ".join(coincidence))
    return replace(spec, embedded=True)
