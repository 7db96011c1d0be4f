"""Circular best-reply construction of epsilon-equilibrium stopping profiles.

Players are visited cyclically.  At each step the visited player faces a
one-player stopping problem against the latest rules of the others: before
their earliest stop the player collects their own solo payoff, and from
that stop on the reward freezes at the better of joining the stopping
coalition or letting it stop without them.  The player's answer is the
first-entry rule of the Snell envelope threshold, and their strategy is
updated where that answer strictly precedes the others' stop:

    theta_n = earliest stop among the other players' current rules
    U^n     = solo payoff before theta_n, frozen join/stay value after
    W^n     = Snell envelope of U^n
    mu_n    = first stage with W^n <= U^n + eps
    tau_n   = mu_n where mu_n < theta_n, else the player's previous rule

Rules start at "never stop" and can only move earlier, so on a finite tree
the sweep reaches a fixed point; the fixed profile is an eps-equilibrium of
the game (certified independently in :mod:`dynkin.verify`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .games import Coalition, GameSpec, StrategyProfile, validate_game
from .snell import eps_optimal_rule, snell_envelope
from .trees import (
    NEVER_RULE,
    AdaptedProcess,
    NodeId,
    ScenarioTree,
    StoppingRule,
    min_of_rules,
    rule_from_path_times,
    stop_everywhere_at,
)


@dataclass(frozen=True)
class SchemeConfig:
    """Tolerance, visiting order and a safety cap on sweep rounds.

    ``order[k]`` is the player visited at the (k+1)-th step of every round;
    it must be a permutation of 1..N (identity when omitted).  The reached
    equilibrium may genuinely depend on this order.  ``max_rounds = None``
    uses the worst-case bound N * leaves * (horizon + 1) + 1, past which a
    run cannot still be making progress.
    """

    epsilon: Fraction = Fraction(0)
    order: tuple[int, ...] | None = None
    max_rounds: int | None = None

    def order_for(self, num_players: int) -> tuple[int, ...]:
        order = self.order or tuple(range(1, num_players + 1))
        if sorted(order) != list(range(1, num_players + 1)):
            raise ValueError(f"order {order} is not a permutation of 1..{num_players}")
        return order


@dataclass(frozen=True)
class SchemeStep:
    """Everything computed while one player was visited at step ``n``."""

    n: int
    player: int
    theta: StoppingRule
    coalition_at_theta: dict[NodeId, Coalition]
    stage_reward: AdaptedProcess
    envelope: AdaptedProcess
    mu: StoppingRule
    tau: StoppingRule


@dataclass(frozen=True)
class SchemeState:
    """Step counter plus each player's current rule (index i-1 = player i)."""

    n: int
    taus: tuple[StoppingRule, ...]


@dataclass(frozen=True)
class EquilibriumProfile:
    """Fixed point of the sweep, with the full trace for auditing."""

    uncapped: StrategyProfile
    capped: StrategyProfile
    termination_rule: StoppingRule
    rounds_used: int
    trace: tuple[SchemeStep, ...]
    tree: ScenarioTree
    config: SchemeConfig
    initialized_at_horizon: bool = False


class ConvergenceError(RuntimeError):
    """Raised when the sweep hits the round cap; carries the partial trace."""

    def __init__(self, message: str, trace: tuple[SchemeStep, ...]):
        super().__init__(message)
        self.trace = trace


def rounds_bound(spec: GameSpec) -> int:
    """Worst-case sweep rounds: every rule can move earlier at most
    (horizon + 1) times on each path, and a non-final round moves some rule."""
    return spec.num_players * len(spec.tree.leaves) * (spec.horizon + 1) + 1


def initial_state(spec: GameSpec, at_horizon: bool = False) -> SchemeState:
    """All players start at never-stop; optionally at stop-at-horizon
    (a variant that must reach the same capped profile on valid games)."""
    start = stop_everywhere_at(spec.tree, spec.horizon) if at_horizon else NEVER_RULE
    return SchemeState(n=spec.num_players + 1, taus=(start,) * spec.num_players)


def build_stage_reward(
    spec: GameSpec,
    player: int,
    theta: StoppingRule,
    others: Mapping[int, StoppingRule],
) -> tuple[AdaptedProcess, dict[NodeId, Coalition]]:
    """Stage reward U^n for the visited player, plus the stop coalitions.

    Node by node: strictly before the path's theta stop the player earns
    their solo payoff; at the theta node the reward freezes at
    max(join, stay) where "join" adds the player to the coalition stopping
    there and "stay" leaves it alone; descendants inherit the frozen value.
    On paths the others never stop the solo payoff runs to the leaf, whose
    value equals the all-players terminal payoff by coincidence.
    """
    expected_theta = min_of_rules(spec.tree, list(others.values()))
    if theta != expected_theta:
        raise ValueError("theta is not the minimum of the other players' rules")

    coalition_at: dict[NodeId, Coalition] = {}
    for node_id in theta.stop_set:
        members = [j for j, rule in others.items() if node_id in rule.stop_set]
        coalition_at[node_id] = Coalition.of(members)

    solo = spec.payoff(player, Coalition.of((player,)))
    values: dict[NodeId, Fraction] = {}
    frozen: dict[NodeId, Fraction] = {}
    for node in sorted(spec.tree.nodes, key=lambda n: n.time):
        if node.id in coalition_at:
            coalition = coalition_at[node.id]
            join = spec.payoff(player, coalition.with_member(player)).at(node.id)
            stay = spec.payoff(player, coalition).at(node.id)
            frozen[node.id] = max(join, stay)
            values[node.id] = frozen[node.id]
        elif node.parent is not None and node.parent in frozen:
            frozen[node.id] = frozen[node.parent]
            values[node.id] = frozen[node.id]
        else:
            values[node.id] = solo.at(node.id)
    return AdaptedProcess(values), coalition_at


def _updated_tau(
    tree: ScenarioTree,
    mu: StoppingRule,
    theta: StoppingRule,
    previous: StoppingRule,
) -> StoppingRule:
    """Pathwise update: mu where it strictly precedes theta, else previous.

    Also evaluates the unsimplified update
    (mu & previous) where that precedes theta, else previous
    and asserts both agree; they provably do because the fresh answer never
    comes later than the player's previous rule.
    """
    times: dict[NodeId, float] = {}
    for leaf in tree.leaves:
        m = mu.stop_time(tree, leaf.id)
        th = theta.stop_time(tree, leaf.id)
        prev = previous.stop_time(tree, leaf.id)
        simplified = m if m < th else prev
        raw = min(m, prev) if min(m, prev) < th else prev
        assert simplified == raw, (
            f"tau update forms disagree on leaf {leaf.id}: "
            f"mu={m} theta={th} previous={prev}"
        )
        times[leaf.id] = simplified
    return rule_from_path_times(tree, times)


def scheme_step(spec: GameSpec, config: SchemeConfig, state: SchemeState) -> SchemeStep:
    """Visit one player and compute their updated rule."""
    order = config.order_for(spec.num_players)
    position = (state.n - 1) % spec.num_players
    player = order[position]
    others = {
        p: state.taus[p - 1] for p in spec.players if p != player
    }
    theta = min_of_rules(spec.tree, list(others.values()))
    stage_reward, coalition_at = build_stage_reward(spec, player, theta, others)
    envelope = snell_envelope(spec.tree, stage_reward)
    mu = eps_optimal_rule(spec.tree, stage_reward, envelope, config.epsilon)
    tau = _updated_tau(spec.tree, mu, theta, state.taus[player - 1])
    return SchemeStep(
        n=state.n,
        player=player,
        theta=theta,
        coalition_at_theta=coalition_at,
        stage_reward=stage_reward,
        envelope=envelope,
        mu=mu,
        tau=tau,
    )


def advance(state: SchemeState, step: SchemeStep) -> SchemeState:
    taus = list(state.taus)
    taus[step.player - 1] = step.tau
    return SchemeState(n=state.n + 1, taus=tuple(taus))


def run_scheme(
    spec: GameSpec,
    config: SchemeConfig,
    initialize_at_horizon: bool = False,
) -> EquilibriumProfile:
    """Sweep until a full round leaves every player's rule unchanged.

    The game must satisfy the joint-stop hypothesis; the returned profile
    is reported both uncapped (never-stop allowed) and capped at the
    horizon, which pay identically.  Raises :class:`ConvergenceError` with
    the partial trace if the round cap is hit, which cannot happen below
    the worst-case bound.
    """
    violations = validate_game(spec, enforce_assumption_a=True)
    if violations:
        raise ValueError("game is not valid for the scheme: " + "; ".join(violations))

    config.order_for(spec.num_players)  # fail fast on a bad order
    cap = config.max_rounds if config.max_rounds is not None else rounds_bound(spec)
    if cap < 1:
        raise ValueError(f"max_rounds must be >= 1, got {cap}")

    state = initial_state(spec, at_horizon=initialize_at_horizon)
    trace: list[SchemeStep] = []
    rounds = 0
    while True:
        if rounds >= cap:
            raise ConvergenceError(
                f"no stationary round within {cap} rounds", tuple(trace)
            )
        before = state.taus
        stationary = True
        for _ in range(spec.num_players):
            step = scheme_step(spec, config, state)
            if step.tau != state.taus[step.player - 1]:
                stationary = False
            trace.append(step)
            state = advance(state, step)
        rounds += 1
        if stationary:
            break
        # paranoia: a round must never push any player's rule later
        for p in spec.players:
            for leaf in spec.tree.leaves:
                assert state.taus[p - 1].stop_time(spec.tree, leaf.id) <= before[
                    p - 1
                ].stop_time(spec.tree, leaf.id)

    uncapped = StrategyProfile(state.taus)
    return EquilibriumProfile(
        uncapped=uncapped,
        capped=uncapped.capped(spec.tree),
        termination_rule=min_of_rules(spec.tree, list(state.taus)),
        rounds_used=rounds,
        trace=tuple(trace),
        tree=spec.tree,
        config=config,
        initialized_at_horizon=initialize_at_horizon,
    )


def trace_as_json(trace: Sequence[SchemeStep]) -> list[dict]:
    """Trace rows in the exportable shape used by the command line."""
    rows = []
    for step in trace:
        rows.append(
            {
                "n": step.n,
                "player": step.player,
                "theta_stops": sorted(step.theta.stop_set),
                "coalitions": {
                    str(node_id): list(coalition.players)
                    for node_id, coalition in sorted(step.coalition_at_theta.items())
                },
                "mu_stops": sorted(step.mu.stop_set),
                "tau_stops": sorted(step.tau.stop_set),
            }
        )
    return rows
