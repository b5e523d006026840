"""Small graph builders shared by tests."""

from __future__ import annotations

from medex.graph import RootedLabeledGraph


def from_edges(n, edges, root=0):
    g = RootedLabeledGraph()
    for _ in range(n):
        g.add_vertex()
    for u, v in edges:
        g.add_edge(u, v)
    g.root = root
    return g


def cycle(n):
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_tree(rng, n):
    return from_edges(n, [(int(rng.integers(0, v)), v) for v in range(1, n)])
