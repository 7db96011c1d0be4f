"""Snell envelopes and epsilon-optimal stopping rules on scenario trees.

The envelope of a reward process is the smallest supermartingale dominating
it, computed by the backward recursion

    envelope(leaf) = reward(leaf)
    envelope(v)    = max(reward(v), E[envelope at v's children])

Its root value is the optimal stopping value, and stopping the first time
``envelope <= reward + eps`` loses at most ``eps`` of it.  On a finite tree
the threshold always triggers by the terminal stage, and ``eps = 0`` is
allowed and exactly optimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .trees import (
    AdaptedProcess,
    ScenarioTree,
    StoppingRule,
    canonicalize_rule,
    one_step_expectation,
)


@dataclass(frozen=True)
class SnellResult:
    """Envelope, threshold rule and optimal value of one stopping problem."""

    envelope: AdaptedProcess
    eps_rule: StoppingRule
    value: Fraction


def snell_envelope(tree: ScenarioTree, reward: AdaptedProcess) -> AdaptedProcess:
    """Backward recursion over stages, deepest first."""
    values: dict = {}
    for node in sorted(tree.nodes, key=lambda n: -n.time):
        kids = tree.children(node.id)
        if not kids:
            values[node.id] = reward.at(node.id)
        else:
            continuation = sum(
                (k.branch_prob * values[k.id] for k in kids), Fraction(0)
            )
            values[node.id] = max(reward.at(node.id), continuation)
    return AdaptedProcess(values)


def eps_optimal_rule(
    tree: ScenarioTree,
    reward: AdaptedProcess,
    envelope: AdaptedProcess,
    epsilon: Fraction,
) -> StoppingRule:
    """First-entry rule of the region ``envelope <= reward + epsilon``.

    Ties stop.  Since envelope equals reward on leaves the rule stops every
    path by the terminal stage, never returning NEVER.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    flags = {
        node.id
        for node in tree.nodes
        if envelope.at(node.id) <= reward.at(node.id) + epsilon
    }
    return canonicalize_rule(tree, flags)


def optimal_value(tree: ScenarioTree, reward: AdaptedProcess) -> Fraction:
    """Best expected reward over all stopping rules (envelope at the root)."""
    return snell_envelope(tree, reward).at(tree.root.id)


def solve_stopping(
    tree: ScenarioTree, reward: AdaptedProcess, epsilon: Fraction
) -> SnellResult:
    envelope = snell_envelope(tree, reward)
    rule = eps_optimal_rule(tree, reward, envelope, epsilon)
    return SnellResult(envelope=envelope, eps_rule=rule, value=envelope.at(tree.root.id))


def is_supermartingale_dominating(
    tree: ScenarioTree, candidate: AdaptedProcess, reward: AdaptedProcess
) -> bool:
    """True iff candidate dominates the reward and one-step decreases in mean."""
    for node in tree.nodes:
        if candidate.at(node.id) < reward.at(node.id):
            return False
        if not tree.is_leaf(node.id):
            if candidate.at(node.id) < one_step_expectation(tree, candidate, node.id):
                return False
    return True
