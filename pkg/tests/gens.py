"""Shared builders and hypothesis strategies for small exact instances."""

from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st

from dynkin.trees import AdaptedProcess, Node, ScenarioTree


def single_path_tree(horizon: int) -> ScenarioTree:
    nodes = [Node(id=0, time=0, parent=None, branch_prob=Fraction(1))]
    for t in range(1, horizon + 1):
        nodes.append(Node(id=t, time=t, parent=t - 1, branch_prob=Fraction(1)))
    return ScenarioTree(tuple(nodes))


def full_binary_tree(depth: int) -> ScenarioTree:
    half = Fraction(1, 2)
    nodes = [Node(id=0, time=0, parent=None, branch_prob=Fraction(1))]
    frontier = [0]
    next_id = 1
    for t in range(1, depth + 1):
        new = []
        for parent in frontier:
            for _ in range(2):
                nodes.append(Node(id=next_id, time=t, parent=parent, branch_prob=half))
                new.append(next_id)
                next_id += 1
        frontier = new
    return ScenarioTree(tuple(nodes))


def path_process(tree: ScenarioTree, *values) -> AdaptedProcess:
    """Process on a single-path tree given values by stage."""
    return AdaptedProcess({t: Fraction(v) for t, v in enumerate(values)})


@st.composite
def rationals(draw, lo: int = -4, hi: int = 4) -> Fraction:
    denominator = draw(st.sampled_from((1, 2, 3, 4, 8)))
    numerator = draw(st.integers(lo * denominator, hi * denominator))
    return Fraction(numerator, denominator)


@st.composite
def scenario_trees(draw, max_depth: int = 3, max_nodes: int = 12) -> ScenarioTree:
    """Uniform-depth trees within a node budget, arbitrary fanout 1..3."""
    depth = draw(st.integers(1, max_depth))
    nodes = [Node(id=0, time=0, parent=None, branch_prob=Fraction(1))]
    frontier = [0]
    next_id = 1
    for t in range(1, depth + 1):
        levels_after = depth - t
        new: list[int] = []
        for position, parent in enumerate(frontier):
            pending = len(frontier) - position - 1
            slack = max_nodes - next_id - pending - levels_after * (len(new) + pending)
            largest = max(1, slack // (1 + levels_after))
            fanout = draw(st.integers(1, min(3, largest)))
            weights = draw(
                st.lists(st.integers(1, 6), min_size=fanout, max_size=fanout)
            )
            total = sum(weights)
            for w in weights:
                nodes.append(
                    Node(id=next_id, time=t, parent=parent, branch_prob=Fraction(w, total))
                )
                new.append(next_id)
                next_id += 1
        frontier = new
    return ScenarioTree(tuple(nodes))


@st.composite
def tree_with_process(draw, **tree_kwargs):
    tree = draw(scenario_trees(**tree_kwargs))
    values = {node.id: draw(rationals()) for node in tree.nodes}
    return tree, AdaptedProcess(values)


@st.composite
def tree_with_flags(draw, **tree_kwargs):
    tree = draw(scenario_trees(**tree_kwargs))
    ids = [node.id for node in tree.nodes]
    flags = draw(st.sets(st.sampled_from(ids)))
    return tree, flags
