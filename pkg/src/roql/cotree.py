"""Glueings, cotrees and cographs.

A glue tree (cotree) has integer leaves (0-based variables) and internal
:class:`CoNode` vertices labelled 0 or 1.  Labels alternate along every
edge and no internal vertex has a single child.  The graph of a cotree
joins two leaves exactly when their lowest common ancestor is labelled 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

import networkx as nx

from .canonical import LINEAR, CanonicalTree, Lit, Node


class NotACographError(ValueError):
    pass


class GlueingError(ValueError):
    pass


@dataclass(frozen=True)
class CoNode:
    label: int
    children: tuple["GlueTree", ...]

    def __str__(self):
        return f"{self.label}[" + ",".join(
            f"x{c + 1}" if isinstance(c, int) else str(c) for c in self.children
        ) + "]"


GlueTree = Union[int, CoNode]


def co_leaves(tree: GlueTree) -> list[int]:
    if isinstance(tree, int):
        return [tree]
    return [v for c in tree.children for v in co_leaves(c)]


def _min_leaf(tree: GlueTree) -> int:
    return tree if isinstance(tree, int) else min(_min_leaf(c) for c in tree.children)


def _conode(label: int, children) -> CoNode:
    return CoNode(label, tuple(sorted(children, key=_min_leaf)))


def is_cotree(tree: GlueTree) -> bool:
    def ok(node, parent_label):
        if isinstance(node, int):
            return True
        if node.label not in (0, 1) or len(node.children) < 2 or node.label == parent_label:
            return False
        return all(ok(c, node.label) for c in node.children)

    if not ok(tree, None):
        return False
    found = co_leaves(tree)
    return len(found) == len(set(found))


def glueing(tree: CanonicalTree) -> GlueTree:
    """Shape skeleton of a canonical tree: linear -> 0, non-linear -> 1,
    adjacent 1-vertices contracted, literal signs dropped."""
    if not isinstance(tree, Node):
        raise GlueingError("no glueing: the tree has no internal vertex")

    def walk(node):
        if isinstance(node, Lit):
            return node.var
        label = 0 if node.op in LINEAR else 1
        kids = []
        for c in node.children:
            sub = walk(c)
            if label == 1 and isinstance(sub, CoNode) and sub.label == 1:
                kids.extend(sub.children)
            else:
                kids.append(sub)
        return _conode(label, kids)

    return walk(tree)


def cotree_to_cograph(tree: GlueTree) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(co_leaves(tree))

    def walk(node):
        if isinstance(node, int):
            return
        groups = [co_leaves(c) for c in node.children]
        if node.label == 1:
            for ga, gb in combinations(groups, 2):
                graph.add_edges_from((a, b) for a in ga for b in gb)
        for c in node.children:
            walk(c)

    walk(tree)
    return graph


def cograph_to_cotree(graph: nx.Graph) -> GlueTree:
    if graph.number_of_nodes() == 0:
        raise NotACographError("empty vertex set")

    def build(vertices: frozenset) -> GlueTree:
        if len(vertices) == 1:
            return next(iter(vertices))
        sub = graph.subgraph(vertices)
        parts = list(nx.connected_components(sub))
        if len(parts) > 1:
            return _conode(0, (build(frozenset(p)) for p in parts))
        co_parts = list(nx.connected_components(nx.complement(sub)))
        if len(co_parts) > 1:
            return _conode(1, (build(frozenset(p)) for p in co_parts))
        raise NotACographError(
            f"not a cograph: vertices {sorted(vertices)} are connected in the graph and its complement"
        )

    return build(frozenset(graph.nodes))


def cograph_reduce(graph: nx.Graph) -> bool:
    """True iff complementing connected components repeatedly empties every edge."""
    adjacency = {v: set(graph.neighbors(v)) for v in graph.nodes}
    work = [(frozenset(adjacency), adjacency)]
    while work:
        vertices, adj = work.pop()
        comps = _components(vertices, adj)
        if len(comps) > 1:
            work.extend((c, adj) for c in comps)
            continue
        if all(not (adj[v] & vertices) for v in vertices):
            continue
        flipped = {v: (vertices - adj[v]) - {v} for v in vertices}
        co_comps = _components(vertices, flipped)
        if len(co_comps) == 1:
            return False
        work.extend((c, flipped) for c in co_comps)
    return True


def _components(vertices: frozenset, adj: dict) -> list[frozenset]:
    left = set(vertices)
    out = []
    while left:
        seed = left.pop()
        comp = {seed}
        frontier = [seed]
        while frontier:
            v = frontier.pop()
            for w in adj[v] & vertices:
                if w not in comp:
                    comp.add(w)
                    left.discard(w)
                    frontier.append(w)
        out.append(frozenset(comp))
    return out
