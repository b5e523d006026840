"""Rooted, partially labeled simple graphs and median computations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .symmap import SymMap

# full triple check is O(|V|^3 * |V|/8) byte operations; above this size only the
# triples a caller actually consults are checked
FULL_MEDIAN_CHECK_LIMIT = 300


class GraphError(ValueError):
    pass


class Disconnected(GraphError):
    pass


class PointAlreadyBound(GraphError):
    pass


class NotMedianGraph(GraphError):
    def __init__(self, triple, count):
        super().__init__(f"triple {triple} has {count} medians")
        self.triple = triple
        self.count = count


class UnlabeledMedian(GraphError):
    def __init__(self, pair, vertex):
        super().__init__(f"median {vertex} of pair {pair} carries no label")
        self.pair = pair
        self.vertex = vertex


class RootedLabeledGraph:
    """Undirected simple graph with a root, bound leaves and a partial labeling.

    Vertices are dense integers. ``leaves`` maps a leaf vertex to the point
    name it stands for; ``labels`` is the partial vertex labeling.
    """

    def __init__(self):
        self.adj: list[set[int]] = []
        self.names: list[str] = []
        self.root: int | None = None
        self.leaves: dict[int, str] = {}
        self.labels: dict[int, str] = {}
        self.coords: dict[int, tuple] = {}
        self.provenance: dict[int, str] = {}
        self._csr = None

    def __len__(self):
        return len(self.adj)

    @property
    def n_vertices(self) -> int:
        return len(self.adj)

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def add_vertex(self, name: str | None = None, coord: tuple | None = None) -> int:
        v = len(self.adj)
        self.adj.append(set())
        self.names.append(name if name is not None else f"v{v}")
        if coord is not None:
            self.coords[v] = coord
        self._csr = None
        return v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"loop at {self.names[u]}")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self._csr = None

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self._csr = None

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in range(len(self.adj)) for v in self.adj[u] if u < v)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def leaf_vertex(self, point: str) -> int:
        for v, p in self.leaves.items():
            if p == point:
                return v
        raise KeyError(point)

    def vertex_at(self, coord: tuple) -> int:
        for v, c in self.coords.items():
            if c == coord:
                return v
        raise KeyError(coord)

    def copy(self) -> "RootedLabeledGraph":
        g = RootedLabeledGraph()
        g.adj = [set(a) for a in self.adj]
        g.names = list(self.names)
        g.root = self.root
        g.leaves = dict(self.leaves)
        g.labels = dict(self.labels)
        g.coords = dict(self.coords)
        g.provenance = dict(self.provenance)
        return g

    def csr(self) -> csr_matrix:
        if self._csr is None:
            n = len(self.adj)
            rows = [u for u in range(n) for _ in self.adj[u]]
            cols = [v for u in range(n) for v in self.adj[u]]
            self._csr = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        return self._csr

    def is_connected(self) -> bool:
        if len(self.adj) <= 1:
            return True
        ncomp, _ = connected_components(self.csr(), directed=False)
        return ncomp == 1

    def validate(self) -> None:
        """Raise ``GraphError`` unless the rooted-graph invariants hold."""
        if not self.is_connected():
            raise Disconnected("graph is not connected")
        if self.root is None:
            raise GraphError("no root")
        if len(set(self.leaves.values())) != len(self.leaves):
            raise GraphError("a point is bound to two leaves")
        if len(self.adj) > 1:
            for v in self.leaves:
                if v == self.root:
                    raise GraphError("root is bound as a leaf")
                if len(self.adj[v]) != 1:
                    raise GraphError(f"leaf {self.names[v]} has degree {len(self.adj[v])}")


def distances_from(g: RootedLabeledGraph, s: int) -> np.ndarray:
    """BFS distances from ``s``; unreachable vertices get -1."""
    dist = np.full(len(g.adj), -1, dtype=np.int64)
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def distance_rows(g: RootedLabeledGraph, sources: Sequence[int]) -> np.ndarray:
    """Distance rows for several sources at once (BFS in compiled code)."""
    if len(g.adj) == 1:
        return np.zeros((len(sources), 1), dtype=np.int64)
    d = shortest_path(g.csr(), unweighted=True, directed=False, indices=list(sources))
    if np.isinf(d).any():
        raise Disconnected("graph is not connected")
    return d.astype(np.int64)


def distance_matrix(g: RootedLabeledGraph) -> np.ndarray:
    return distance_rows(g, range(len(g.adj)))


def interval(g: RootedLabeledGraph, x: int, y: int) -> set[int]:
    dx = distances_from(g, x)
    dy = distances_from(g, y)
    return set(np.flatnonzero(dx + dy == dx[y]).tolist())


@dataclass(frozen=True)
class MedianCertificate:
    triple: tuple[int, int, int]
    candidates: tuple[int, ...]

    @property
    def unique(self) -> bool:
        return len(self.candidates) == 1

    @property
    def vertex(self) -> int:
        if not self.unique:
            raise NotMedianGraph(self.triple, len(self.candidates))
        return self.candidates[0]


def _median_mask(du, dv, dw, u, v, w) -> np.ndarray:
    return (du + dv == du[v]) & (du + dw == du[w]) & (dv + dw == dv[w])


def median(g: RootedLabeledGraph, u: int, v: int, w: int) -> MedianCertificate:
    du, dv, dw = distance_rows(g, [u, v, w])
    cands = np.flatnonzero(_median_mask(du, dv, dw, u, v, w))
    return MedianCertificate((u, v, w), tuple(cands.tolist()))


@dataclass
class MedianCheck:
    ok: bool
    witness: tuple[int, int, int] | None = None
    count: int | None = None

    def __bool__(self):
        return self.ok


def _interval_bits(d: np.ndarray, lo: int, hi: int) -> np.ndarray:
    # bit x of [a, b] is set iff x lies on a shortest a-b path
    block = d[lo:hi, None, :] + d[None, :, :] == d[lo:hi, :, None]
    return np.packbits(block, axis=-1, bitorder="little")


def is_median_graph(g: RootedLabeledGraph) -> MedianCheck:
    """Check that every vertex triple has exactly one median.

    Intervals are stored as packed bitsets, so a triple costs one AND over
    ``|V|/8`` bytes plus a popcount.
    """
    n = len(g.adj)
    if n == 0:
        return MedianCheck(True)
    if not g.is_connected():
        raise Disconnected("graph is not connected")
    d = distance_matrix(g)
    chunk = max(1, (1 << 24) // (n * n))
    bits = np.concatenate([_interval_bits(d, a, min(n, a + chunk)) for a in range(0, n, chunk)])
    for u in range(n):
        iu = bits[u]
        for v0 in range(u, n, chunk):
            v1 = min(n, v0 + chunk)
            # counts[v, w] = |I(u,v) & I(u,w) & I(v,w)|
            common = iu[v0:v1, None, :] & iu[None, :, :] & bits[v0:v1]
            counts = np.bitwise_count(common).sum(axis=-1, dtype=np.int64)
            bad = np.argwhere(counts != 1)
            if len(bad):
                v, w = bad[0]
                return MedianCheck(False, (u, int(v0 + v), int(w)), int(counts[v, w]))
    return MedianCheck(True)


def median_set(g: RootedLabeledGraph, root: int | None = None, leaves: Iterable[int] | None = None,
               full_check: bool = False) -> set[int]:
    """All medians of ``(root, x, y)`` over distinct leaf pairs not involving the root."""
    root = g.root if root is None else root
    leaves = sorted(g.leaves) if leaves is None else sorted(leaves)
    if full_check:
        chk = is_median_graph(g)
        if not chk:
            raise NotMedianGraph(chk.witness, chk.count)
    return set(_root_medians(g, root, leaves).values())


def _root_medians(g: RootedLabeledGraph, root: int, leaves: Sequence[int]) -> dict[tuple[int, int], int]:
    leaves = [x for x in leaves if x != root]
    if len(leaves) < 2:
        return {}
    rows = distance_rows(g, [root, *leaves])
    dr = rows[0]
    out = {}
    for a, b in combinations(range(len(leaves)), 2):
        x, y = leaves[a], leaves[b]
        dx, dy = rows[a + 1], rows[b + 1]
        cands = np.flatnonzero((dr + dx == dr[x]) & (dr + dy == dr[y]) & (dx + dy == dx[y]))
        if len(cands) != 1:
            raise NotMedianGraph((root, x, y), len(cands))
        out[(x, y)] = int(cands[0])
    return out


@dataclass
class ExplainReport:
    ok: bool
    mismatches: list[tuple[str, str, str, str]] = field(default_factory=list)  # x, y, expected, found
    medians: dict[tuple[str, str], int] = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def explains(g: RootedLabeledGraph, delta: SymMap, full_check: bool | None = None) -> ExplainReport:
    """Does ``t(med(root, x, y)) == delta(x, y)`` hold for all distinct points?

    ``full_check=None`` runs the full median-graph test when the graph has at
    most ``FULL_MEDIAN_CHECK_LIMIT`` vertices; otherwise only the consulted
    triples are required to have a unique median.
    """
    by_point = {p: v for v, p in g.leaves.items()}
    missing = [p for p in delta.points if p not in by_point]
    if missing:
        raise GraphError(f"no leaf bound to point {missing[0]!r}")
    if full_check is None:
        full_check = len(g.adj) <= FULL_MEDIAN_CHECK_LIMIT
    if full_check:
        chk = is_median_graph(g)
        if not chk:
            raise NotMedianGraph(chk.witness, chk.count)
    order = [by_point[p] for p in delta.points]
    meds = _root_medians(g, g.root, order) if delta.n >= 2 else {}
    report = ExplainReport(True)
    for i, j in combinations(range(delta.n), 2):
        x, y = delta.points[i], delta.points[j]
        m = meds[(order[i], order[j])]
        report.medians[(x, y)] = m
        if m not in g.labels:
            raise UnlabeledMedian((x, y), g.names[m])
        want = delta.label(i, j)
        if g.labels[m] != want:
            report.ok = False
            report.mismatches.append((x, y, want, g.labels[m]))
    return report


class AncestorOrder:
    """``u ⪯ v`` iff ``v`` is ``u``, the root, or separates ``u`` from the root.

    Separation is answered by a BFS from the root in ``G - v``; results are
    cached per ``v``.
    """

    def __init__(self, g: RootedLabeledGraph, root: int | None = None):
        if not g.is_connected():
            raise Disconnected("graph is not connected")
        self.g = g
        self.root = g.root if root is None else root
        self._reach: dict[int, np.ndarray] = {}

    def _reachable_without(self, v: int) -> np.ndarray:
        got = self._reach.get(v)
        if got is None:
            seen = np.zeros(len(self.g.adj), dtype=bool)
            seen[v] = True
            seen[self.root] = True
            queue = deque([self.root])
            while queue:
                a = queue.popleft()
                for b in self.g.adj[a]:
                    if not seen[b]:
                        seen[b] = True
                        queue.append(b)
            seen[v] = False
            got = self._reach[v] = seen
        return got

    def precedes(self, u: int, v: int) -> bool:
        if u == v or v == self.root:
            return True
        if u == self.root:
            return False
        return not self._reachable_without(v)[u]

    def comparable(self, u: int, v: int) -> bool:
        return self.precedes(u, v) or self.precedes(v, u)


def ancestor_order(g: RootedLabeledGraph, root: int | None = None) -> AncestorOrder:
    return AncestorOrder(g, root)


def leaf_append(g: RootedLabeledGraph, v: int, point: str, name: str | None = None) -> RootedLabeledGraph:
    if point in g.leaves.values():
        raise PointAlreadyBound(point)
    h = g.copy()
    x = h.add_vertex(name if name is not None else point)
    h.add_edge(v, x)
    h.leaves[x] = point
    return h
