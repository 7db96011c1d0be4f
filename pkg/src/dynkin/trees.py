"""Finite filtered probability spaces as uniform-depth scenario trees.

A scenario tree carries the whole probabilistic setup: outcomes are
root-to-leaf paths, the stage-t information is "which time-t node the path
goes through", and one-step transition probabilities live on the edges.
Adapted processes attach one rational value per node; stopping rules are
antichains of nodes ("stop the first time the path hits the set").

All probabilities and values are exact ``fractions.Fraction``; nothing in
this package ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

NodeId = int

# Sentinel stage for "never stops on this path".  Compares strictly greater
# than every integer stage; only ever used in stage comparisons, never in
# payoff arithmetic.
NEVER: float = math.inf

Stage = float  # an int stage or NEVER


@dataclass(frozen=True)
class Node:
    """One tree node: stage, parent link and conditional branch probability."""

    id: NodeId
    time: int
    parent: NodeId | None
    branch_prob: Fraction


@dataclass(frozen=True)
class ScenarioTree:
    """Rooted uniform-depth tree; see :func:`validate_tree` for the invariants.

    Construction is lenient so that malformed inputs can still be inspected
    and diagnosed; every other operation in this package assumes the tree
    validates cleanly.
    """

    nodes: tuple[Node, ...]

    def __post_init__(self) -> None:
        by_id: dict[NodeId, Node] = {}
        children: dict[NodeId, list[Node]] = {}
        for node in self.nodes:
            by_id.setdefault(node.id, node)
            children.setdefault(node.id, [])
        for node in self.nodes:
            if node.parent is not None and node.parent in children:
                children[node.parent].append(node)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(
            self, "_children", {i: tuple(c) for i, c in children.items()}
        )
        object.__setattr__(self, "_path_cache", {})
        object.__setattr__(self, "_prob_cache", {})

    # -- structure ---------------------------------------------------------

    def node(self, node_id: NodeId) -> Node:
        try:
            return self._by_id[node_id]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    def __contains__(self, node_id: NodeId) -> bool:
        return node_id in self._by_id  # type: ignore[attr-defined]

    def children(self, node_id: NodeId) -> tuple[Node, ...]:
        return self._children[node_id]  # type: ignore[attr-defined]

    def is_leaf(self, node_id: NodeId) -> bool:
        return not self.children(node_id)

    @property
    def root(self) -> Node:
        roots = [n for n in self.nodes if n.parent is None]
        if len(roots) != 1:
            raise ValueError(f"tree has {len(roots)} roots, expected exactly 1")
        return roots[0]

    @property
    def horizon(self) -> int:
        return max(n.time for n in self.nodes)

    @property
    def leaves(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if self.is_leaf(n.id))

    def nodes_at(self, time: int) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.time == time)

    def path_to(self, node_id: NodeId) -> tuple[Node, ...]:
        """Nodes from the root down to ``node_id``, inclusive (memoized)."""
        cache: dict = self._path_cache  # type: ignore[attr-defined]
        path = cache.get(node_id)
        if path is None:
            node = self.node(node_id)
            path = (node,) if node.parent is None else self.path_to(node.parent) + (node,)
            cache[node_id] = path
        return path

    def path_probability(self, leaf_id: NodeId) -> Fraction:
        cache: dict = self._prob_cache  # type: ignore[attr-defined]
        prob = cache.get(leaf_id)
        if prob is None:
            prob = Fraction(1)
            for node in self.path_to(leaf_id):
                prob *= node.branch_prob
            cache[leaf_id] = prob
        return prob


def validate_tree(tree: ScenarioTree) -> list[str]:
    """Return a description of every broken tree invariant (empty if valid).

    Checked: unique ids; exactly one root at time 0 with branch probability
    1; parent links exist and advance time by one step; sibling branch
    probabilities are in (0, 1] and sum to 1; all leaves sit at the same
    terminal stage; leaf path probabilities sum to 1.
    """
    violations: list[str] = []
    seen: set[NodeId] = set()
    for node in tree.nodes:
        if node.id in seen:
            violations.append(f"node {node.id}: duplicate id")
        seen.add(node.id)
    if not tree.nodes:
        return ["tree has no nodes"]

    roots = [n for n in tree.nodes if n.parent is None]
    if len(roots) != 1:
        violations.append(f"tree has {len(roots)} roots, expected exactly 1")
    else:
        root = roots[0]
        if root.time != 0:
            violations.append(f"node {root.id}: root time is {root.time}, expected 0")
        if root.branch_prob != 1:
            violations.append(
                f"node {root.id}: root branch probability is "
                f"{root.branch_prob}, expected 1"
            )

    linked = True
    for node in tree.nodes:
        if node.parent is not None:
            if node.parent not in tree:
                violations.append(f"node {node.id}: parent {node.parent} does not exist")
                linked = False
            else:
                parent = tree.node(node.parent)
                if node.time != parent.time + 1:
                    violations.append(
                        f"node {node.id}: time {node.time} is not parent time + 1"
                    )
        if not (0 < node.branch_prob <= 1):
            violations.append(
                f"node {node.id}: branch probability {node.branch_prob} "
                "outside (0, 1]"
            )

    for node in tree.nodes:
        kids = tree.children(node.id)
        if kids:
            total = sum((k.branch_prob for k in kids), Fraction(0))
            if total != 1:
                violations.append(
                    f"node {node.id}: children probabilities sum to {total}, expected 1"
                )

    if linked and len(roots) == 1 and not violations:
        horizon = tree.horizon
        for leaf in tree.leaves:
            if leaf.time != horizon:
                violations.append(
                    f"node {leaf.id}: leaf at time {leaf.time}, expected uniform depth {horizon}"
                )
        if not violations:
            mass = sum((tree.path_probability(l.id) for l in tree.leaves), Fraction(0))
            if mass != 1:
                violations.append(f"leaf path probabilities sum to {mass}, expected 1")
    return violations


@dataclass(frozen=True)
class AdaptedProcess:
    """One exact value per node.  Adaptedness is structural: a value hangs
    on a node, hence depends only on the information revealed by that node.
    """

    values: dict[NodeId, Fraction]

    def at(self, node_id: NodeId) -> Fraction:
        try:
            return self.values[node_id]
        except KeyError:
            raise KeyError(f"process has no value at node {node_id!r}") from None

    def missing_on(self, tree: ScenarioTree) -> list[NodeId]:
        return [n.id for n in tree.nodes if n.id not in self.values]


@dataclass(frozen=True)
class StoppingRule:
    """Pure strategy: stop the first time the path enters ``stop_set``.

    Canonical form is an antichain (no stop node strictly below another);
    build rules through :func:`canonicalize_rule` unless the set is known to
    be one.  The empty rule never stops anywhere.
    """

    stop_set: frozenset[NodeId]

    @property
    def is_never(self) -> bool:
        return not self.stop_set

    def stop_node(self, tree: ScenarioTree, leaf_id: NodeId) -> Node | None:
        """First stop node on the root path of ``leaf_id``, or None."""
        for node in tree.path_to(leaf_id):
            if node.id in self.stop_set:
                return node
        return None

    def stop_time(self, tree: ScenarioTree, leaf_id: NodeId) -> Stage:
        node = self.stop_node(tree, leaf_id)
        return NEVER if node is None else node.time


NEVER_RULE = StoppingRule(frozenset())


def _check_rule_on_tree(tree: ScenarioTree, rule: StoppingRule) -> None:
    unknown = [i for i in rule.stop_set if i not in tree]
    if unknown:
        raise ValueError(f"rule references nodes not in tree: {sorted(unknown)}")


def one_step_expectation(
    tree: ScenarioTree, process: AdaptedProcess, node_id: NodeId
) -> Fraction:
    """Conditional expectation of the next-stage value given ``node_id``."""
    kids = tree.children(node_id)
    if not kids:
        raise ValueError(f"node {node_id!r} has no successor stage")
    return sum((k.branch_prob * process.at(k.id) for k in kids), Fraction(0))


def expectation_under_rule(
    tree: ScenarioTree, process: AdaptedProcess, rule: StoppingRule
) -> Fraction:
    """Expected process value sampled at the rule's stop node.

    Paths the rule never stops contribute the value at their leaf: values
    are treated as constant from the terminal stage on, so "never stop" and
    "stop at the horizon" pay the same.
    """
    _check_rule_on_tree(tree, rule)
    total = Fraction(0)
    for leaf in tree.leaves:
        stop = rule.stop_node(tree, leaf.id)
        node_id = leaf.id if stop is None else stop.id
        total += tree.path_probability(leaf.id) * process.at(node_id)
    return total


def canonicalize_rule(tree: ScenarioTree, stop_flags: Iterable[NodeId]) -> StoppingRule:
    """Prune flags with a flagged strict ancestor; first-stop times are kept."""
    flags = set(stop_flags)
    unknown = [i for i in flags if i not in tree]
    if unknown:
        raise ValueError(f"unknown node ids in stop flags: {sorted(unknown)}")
    kept: set[NodeId] = set()
    for node_id in flags:
        node = tree.node(node_id)
        dominated = False
        while node.parent is not None:
            node = tree.node(node.parent)
            if node.id in flags:
                dominated = True
                break
        if not dominated:
            kept.add(node_id)
    return StoppingRule(frozenset(kept))


def min_of_rules(tree: ScenarioTree, rules: Sequence[StoppingRule]) -> StoppingRule:
    """Pathwise minimum of stopping rules (the never-rule is neutral).

    The first stop of the union of the stop sets is, on every path, the
    minimum of the individual first stops, so the pointwise minimum is just
    the canonicalized union.
    """
    if not rules:
        raise ValueError("min_of_rules needs at least one rule")
    union: set[NodeId] = set()
    for rule in rules:
        _check_rule_on_tree(tree, rule)
        union |= rule.stop_set
    return canonicalize_rule(tree, union)


def stop_everywhere_at(tree: ScenarioTree, time: int) -> StoppingRule:
    """The deterministic rule stopping at the given stage on every path."""
    nodes = tree.nodes_at(time)
    if not nodes:
        raise ValueError(f"tree has no nodes at time {time}")
    return StoppingRule(frozenset(n.id for n in nodes))


def rule_from_path_times(
    tree: ScenarioTree, times: Mapping[NodeId, Stage]
) -> StoppingRule:
    """Build the rule realizing a per-leaf stop time assignment.

    ``times`` maps every leaf id to an integer stage or NEVER.  Raises if
    the assignment is not realizable by an adapted rule, i.e. if two paths
    sharing their time-t node disagree about stopping there.
    """
    flags: set[NodeId] = set()
    for leaf in tree.leaves:
        t = times[leaf.id]
        if t != NEVER:
            flags.add(tree.path_to(leaf.id)[int(t)].id)
    rule = canonicalize_rule(tree, flags)
    for leaf in tree.leaves:
        if rule.stop_time(tree, leaf.id) != times[leaf.id]:
            raise ValueError(
                f"stop times are not adapted: leaf {leaf.id} wants "
                f"{times[leaf.id]}, rule induces {rule.stop_time(tree, leaf.id)}"
            )
    return rule
