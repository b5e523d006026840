"""Hypercubes, half-grids and their leaf-extended, rooted versions.

Half-grid coordinates are 1-based pairs ``(i, j)``; ``H_n`` keeps the
vertices of the ``n x n`` grid with ``i == 1`` or ``i - 1 <= j``.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .graph import RootedLabeledGraph
from .mdt import TooFewPoints
from .symmap import SymMap

DEFAULT_HYPERCUBE_CAP = 12


class DimensionCapExceeded(ValueError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"hypercube dimension {n} exceeds cap {cap}")
        self.n = n
        self.cap = cap


class OutOfRange(ValueError):
    pass


def hypercube(n: int) -> RootedLabeledGraph:
    if n < 1:
        raise ValueError("hypercube dimension must be >= 1")
    g = RootedLabeledGraph()
    index = {}
    for bits in product((0, 1), repeat=n):
        index[bits] = g.add_vertex("q" + "".join(map(str, bits)), bits)
    for bits, v in index.items():
        for k in range(n):
            if bits[k] == 0:
                other = bits[:k] + (1,) + bits[k + 1:]
                g.add_edge(v, index[other])
    return g


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(n))


def extended_hypercube(points: Sequence[str]) -> RootedLabeledGraph:
    """``Q_n`` with leaf ``x_i`` on the i-th unit vector, rooted at all-ones."""
    n = len(points)
    if n < 2:
        raise TooFewPoints("extended hypercube needs at least two points")
    g = hypercube(n)
    g.root = g.vertex_at((1,) * n)
    for i, p in enumerate(points):
        x = g.add_vertex(p)
        g.add_edge(g.vertex_at(_unit(n, i)), x)
        g.leaves[x] = p
    return g


def hypercube_median_coord(n: int, i: int, j: int) -> tuple[int, ...]:
    """Coordinates of ``med(root, x_i, x_j)`` in ``Q^ext_n`` (0-based ``i != j``)."""
    return tuple(1 if k in (i, j) else 0 for k in range(n))


def in_half_grid(i: int, j: int, n: int) -> bool:
    if not (1 <= i <= n and 1 <= j <= n):
        return False
    return i == 1 or i - 1 <= j


def half_grid_size(n: int) -> tuple[int, int]:
    """Vertex and edge counts of ``H_n``."""
    return n * (n + 1) // 2 + n - 1, n * n + n - 2


def half_grid(n: int) -> RootedLabeledGraph:
    if n < 2:
        raise ValueError("half-grid needs n >= 2")
    g = RootedLabeledGraph()
    index = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if in_half_grid(i, j, n):
                index[(i, j)] = g.add_vertex(f"h{i},{j}", (i, j))
    for (i, j), v in index.items():
        for nb in ((i + 1, j), (i, j + 1)):
            if nb in index:
                g.add_edge(v, index[nb])
    return g


def halfgrid_attach(k: int, n: int) -> tuple[int, int]:
    """Grid vertex carrying leaf ``x_k`` (1-based) in ``H^ext_{n+1}``."""
    if k == 1:
        return (1, 1)
    if k == n + 1:
        return (n, n)
    return (k, k - 1)


def extended_half_grid(points: Sequence[str]) -> RootedLabeledGraph:
    """``H_n`` plus one leaf per point, rooted at ``(1, n)``; ``len(points) == n + 1``."""
    n = len(points) - 1
    if n < 2:
        raise TooFewPoints("extended half-grid needs at least three points")
    g = half_grid(n)
    where = {c: v for v, c in g.coords.items()}
    g.root = where[(1, n)]
    for k, p in enumerate(points, start=1):
        x = g.add_vertex(p)
        g.add_edge(where[halfgrid_attach(k, n)], x)
        g.leaves[x] = p
    return g


def halfgrid_median_formula(i: int, j: int, n: int) -> tuple[int, int]:
    if not (1 <= i < j <= n + 1):
        raise OutOfRange(f"need 1 <= i < j <= {n + 1}, got ({i}, {j})")
    return (i, j - 1)


def explain_by_halfgrid(delta: SymMap) -> RootedLabeledGraph:
    """Labeled extended half-grid (a rooted star for two points) explaining ``delta``."""
    if delta.n < 2:
        raise TooFewPoints("need at least two points")
    if delta.n == 2:
        g = RootedLabeledGraph()
        g.root = g.add_vertex("root")
        for p in delta.points:
            x = g.add_vertex(p)
            g.add_edge(g.root, x)
            g.leaves[x] = p
        g.labels[g.root] = delta.label(0, 1)
        return g
    g = extended_half_grid(delta.points)
    n = delta.n - 1
    where = {c: v for v, c in g.coords.items()}
    for i, j in combinations(range(delta.n), 2):
        g.labels[where[halfgrid_median_formula(i + 1, j + 1, n)]] = delta.label(i, j)
    return g


def explain_by_hypercube(delta: SymMap, cap: int = DEFAULT_HYPERCUBE_CAP) -> RootedLabeledGraph:
    n = delta.n
    if n < 2:
        raise TooFewPoints("need at least two points")
    if n > cap:
        raise DimensionCapExceeded(n, cap)
    g = extended_hypercube(delta.points)
    where = {c: v for v, c in g.coords.items()}
    for i, j in combinations(range(n), 2):
        g.labels[where[hypercube_median_coord(n, i, j)]] = delta.label(i, j)
    return g
