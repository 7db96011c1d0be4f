"""Independent certification of equilibrium claims by brute force.

Nothing here reuses the constructive sweep: rules are enumerated
exhaustively, best responses are computed from first principles on the
deviation reward, and traces are audited against the identities the sweep
is supposed to maintain.  Desk-scale guardrails fail loudly instead of
sampling when an enumeration would blow up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .games import (
    Coalition,
    GameSpec,
    StrategyProfile,
    expected_payoffs,
)
from .scheme import EquilibriumProfile, SchemeStep
from .snell import eps_optimal_rule, snell_envelope
from .trees import (
    NEVER,
    AdaptedProcess,
    NodeId,
    ScenarioTree,
    StoppingRule,
)

DEFAULT_RULE_CAP = 4096
DEFAULT_PROFILE_CAP = 1 << 20


class CapExceededError(RuntimeError):
    """An enumeration would exceed its configured size cap."""


@dataclass(frozen=True)
class NepCertificate:
    """Per-player best-response gap report for one profile.

    ``gains[i-1]`` is how much player i could improve by deviating alone;
    the profile is an eps-equilibrium exactly when every gain is <= eps.
    Gains are never negative since staying put is always a deviation.
    """

    epsilon: Fraction
    achieved: tuple[Fraction, ...]
    best_response: tuple[Fraction, ...]
    gains: tuple[Fraction, ...]
    is_eps_nep: bool


def count_rules(tree: ScenarioTree) -> int:
    """Number of canonical stopping rules: antichain count including empty.

    Product recursion over subtrees: a subtree's rules either stop at its
    root or combine independent choices in the child subtrees.
    """

    def subtree(node_id: NodeId) -> int:
        kids = tree.children(node_id)
        total = 1
        for kid in kids:
            total *= subtree(kid.id)
        return total + 1

    return subtree(tree.root.id)


def enumerate_rules(tree: ScenarioTree, cap: int = DEFAULT_RULE_CAP) -> list[StoppingRule]:
    """All canonical stopping rules on the tree, never-stop included.

    Distinct antichains induce distinct per-path stop times on a uniform
    tree, so generating each antichain once already deduplicates.  Raises
    :class:`CapExceededError` naming the count when it exceeds ``cap``.
    """
    total = count_rules(tree)
    if total > cap:
        raise CapExceededError(f"tree admits {total} stopping rules, cap is {cap}")

    def subtree(node_id: NodeId) -> list[frozenset[NodeId]]:
        choices: list[frozenset[NodeId]] = [frozenset((node_id,))]
        kid_sets = [subtree(k.id) for k in tree.children(node_id)]
        for combo in itertools.product(*kid_sets):
            choices.append(frozenset().union(*combo))
        return choices

    return [StoppingRule(s) for s in subtree(tree.root.id)]


def deviation_reward(
    spec: GameSpec, profile: StrategyProfile, player: int
) -> AdaptedProcess:
    """What the player earns, node by node, when deviating unilaterally.

    Strictly before the others' earliest stop: the solo payoff.  At the
    others' stop node: the payoff for joining that coalition.  After it:
    frozen at the payoff for having let the coalition stop alone (stopping
    later cannot reopen an ended game).  Expectations of this process under
    a deviation rule reproduce the game payoff of the deviated profile, so
    its optimal stopping value is the exact best-response value; the
    join-versus-stay comparison is left to the envelope recursion.
    """
    others = {
        j: profile.rule_for(j) for j in spec.players if j != player
    }
    solo = spec.payoff(player, Coalition.of((player,)))
    coalition_at: dict[NodeId, Coalition] = {}
    for node in spec.tree.nodes:
        members = [j for j, rule in others.items() if node.id in rule.stop_set]
        if members:
            coalition_at[node.id] = Coalition.of(members)

    values: dict[NodeId, Fraction] = {}
    frozen: dict[NodeId, Fraction] = {}
    for node in sorted(spec.tree.nodes, key=lambda n: n.time):
        if node.parent is not None and node.parent in frozen:
            frozen[node.id] = frozen[node.parent]
            values[node.id] = frozen[node.id]
        elif node.id in coalition_at:
            coalition = coalition_at[node.id]
            frozen[node.id] = spec.payoff(player, coalition).at(node.id)
            values[node.id] = spec.payoff(player, coalition.with_member(player)).at(node.id)
        else:
            values[node.id] = solo.at(node.id)
    return AdaptedProcess(values)


def best_response_value(
    spec: GameSpec,
    profile: StrategyProfile,
    player: int,
    cross_check_cap: int | None = None,
) -> tuple[Fraction, StoppingRule]:
    """Best expected payoff the player can get against the others' rules,
    with a rule achieving it.

    Pass ``cross_check_cap`` to re-derive the value by enumerating every
    deviation rule through the raw payoff functional and assert agreement.
    """
    reward = deviation_reward(spec, profile, player)
    envelope = snell_envelope(spec.tree, reward)
    best = envelope.at(spec.tree.root.id)
    rule = eps_optimal_rule(spec.tree, reward, envelope, Fraction(0))
    if cross_check_cap is not None:
        enumerated = max(
            expected_payoffs(spec, profile.with_rule(player, r))[player - 1]
            for r in enumerate_rules(spec.tree, cross_check_cap)
        )
        if enumerated != best:
            raise AssertionError(
                f"best response mismatch for player {player}: "
                f"envelope {best}, enumeration {enumerated}"
            )
    return best, rule


def certify(
    spec: GameSpec, profile: StrategyProfile, epsilon: Fraction
) -> NepCertificate:
    """Best-response analysis of a profile against the equilibrium bar."""
    achieved = expected_payoffs(spec, profile)
    best = tuple(
        best_response_value(spec, profile, i)[0] for i in spec.players
    )
    gains = tuple(b - a for b, a in zip(best, achieved))
    assert all(g >= 0 for g in gains)
    return NepCertificate(
        epsilon=epsilon,
        achieved=achieved,
        best_response=best,
        gains=gains,
        is_eps_nep=max(gains) <= epsilon,
    )


def find_all_eps_neps(
    spec: GameSpec,
    epsilon: Fraction,
    rule_cap: int = DEFAULT_RULE_CAP,
    profile_cap: int = DEFAULT_PROFILE_CAP,
) -> list[tuple[StrategyProfile, NepCertificate]]:
    """Exhaustive equilibrium search over all canonical profiles."""
    rules = enumerate_rules(spec.tree, rule_cap)
    total = len(rules) ** spec.num_players
    if total > profile_cap:
        raise CapExceededError(f"{total} profiles to scan, cap is {profile_cap}")
    found = []
    for combo in itertools.product(rules, repeat=spec.num_players):
        profile = StrategyProfile(combo)
        certificate = certify(spec, profile, epsilon)
        if certificate.is_eps_nep:
            found.append((profile, certificate))
    return found


def check_trace_invariants(
    trace: Sequence[SchemeStep], profile: EquilibriumProfile
) -> list[str]:
    """Audit a sweep trace pathwise against its structural identities.

    Checked on every root-leaf path and step where both sides exist:
    rules only move earlier between a player's consecutive visits (tau,
    theta and mu all non-increasing); mu = min(tau, theta); the fresh
    answer never comes later than the player's previous rule; a player's
    update never lands exactly on the others' finite stop; if mu is
    unchanged between visits then so is tau; and, at the fixed point,
    exactly one player attains any finite termination stage.  The two
    coincidence-flavored checks presume the never-stop initialization and
    are skipped for horizon-initialized runs, which violate them benignly.
    """
    violations: list[str] = []
    tree = profile.tree
    leaves = [leaf.id for leaf in tree.leaves]
    steps = list(trace)
    by_n = {step.n: step for step in steps}

    def t(rule: StoppingRule, leaf_id: NodeId) -> float:
        return rule.stop_time(tree, leaf_id)

    num_players = len(profile.uncapped.rules)
    for step in steps:
        previous = by_n.get(step.n - num_players)
        for leaf_id in leaves:
            if t(step.mu, leaf_id) != min(t(step.tau, leaf_id), t(step.theta, leaf_id)):
                violations.append(
                    f"step {step.n}, leaf {leaf_id}: mu != min(tau, theta)"
                )
            if not profile.initialized_at_horizon:
                if t(step.tau, leaf_id) == t(step.theta, leaf_id) != NEVER:
                    violations.append(
                        f"step {step.n}, leaf {leaf_id}: tau coincides with "
                        f"theta at finite stage {t(step.tau, leaf_id)}"
                    )
            if previous is None:
                continue
            if t(step.tau, leaf_id) > t(previous.tau, leaf_id):
                violations.append(
                    f"step {step.n}, leaf {leaf_id}: tau increased "
                    f"({t(previous.tau, leaf_id)} -> {t(step.tau, leaf_id)})"
                )
            if t(step.theta, leaf_id) > t(previous.theta, leaf_id):
                violations.append(
                    f"step {step.n}, leaf {leaf_id}: theta increased"
                )
            if t(step.mu, leaf_id) > t(previous.mu, leaf_id):
                violations.append(f"step {step.n}, leaf {leaf_id}: mu increased")
            if t(step.mu, leaf_id) > t(previous.tau, leaf_id):
                violations.append(
                    f"step {step.n}, leaf {leaf_id}: mu exceeds the player's "
                    "previous tau"
                )
            if t(previous.mu, leaf_id) == t(step.mu, leaf_id) and t(
                previous.tau, leaf_id
            ) != t(step.tau, leaf_id):
                violations.append(
                    f"step {step.n}, leaf {leaf_id}: mu stationary but tau moved"
                )

    if not profile.initialized_at_horizon:
        for leaf_id in leaves:
            stage = profile.termination_rule.stop_time(tree, leaf_id)
            if stage == NEVER:
                continue
            attaining = [
                i
                for i in range(1, num_players + 1)
                if t(profile.uncapped.rule_for(i), leaf_id) == stage
            ]
            if len(attaining) != 1:
                violations.append(
                    f"leaf {leaf_id}: players {attaining} jointly attain the "
                    f"finite termination stage {stage}"
                )

    bound = num_players * len(leaves) * (tree.horizon + 1) + 1
    if profile.rounds_used > bound:
        violations.append(
            f"rounds_used {profile.rounds_used} exceeds the bound {bound}"
        )
    return violations
