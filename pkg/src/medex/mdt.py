"""Modular decomposition tree of a symmetric map."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .symmap import PRIME_NAME, MapError, SymMap, _closure


class _Prime:
    __slots__ = ()

    def __repr__(self):
        return "PRIME"

    def __str__(self):
        return PRIME_NAME

    def __reduce__(self):
        return "PRIME"


PRIME = _Prime()


class TooFewPoints(MapError):
    pass


class NotAHierarchy(ValueError):
    def __init__(self, a, b):
        super().__init__(f"overlapping sets {sorted(a)} and {sorted(b)}")
        self.witness = (a, b)


@dataclass
class MDNode:
    members: frozenset[int]
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    label: object = None  # alphabet string, PRIME, or None on leaves

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def is_prime(self) -> bool:
        return self.label is PRIME


@dataclass
class Partition:
    parts: list[frozenset[int]]
    kind: object  # label string or PRIME

    @property
    def is_prime(self) -> bool:
        return self.kind is PRIME


def _sorted_parts(parts: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    return sorted((frozenset(p) for p in parts), key=min)


def _partition_indices(matrix: np.ndarray, idx: np.ndarray) -> tuple[list[np.ndarray], int | None]:
    """Maximal strong partition of the restriction to ``idx``.

    Returns parts as arrays of global indices and the complete label id, or
    ``None`` when the quotient is prime.
    """
    sub = matrix[np.ix_(idx, idx)]
    m = len(idx)
    labels = np.unique(sub[np.triu_indices(m, 1)])
    found: tuple[np.ndarray, int] | None = None
    for lab in labels:
        other = sub != lab
        np.fill_diagonal(other, False)
        ncomp, comp = connected_components(csr_matrix(other), directed=False)
        if ncomp > 1:
            # two disconnecting labels would force one pair to carry both
            assert found is None, "two labels disconnect the same restriction"
            found = (comp, int(lab))
    if found is not None:
        comp, lab = found
        parts = [idx[comp == c] for c in range(comp.max() + 1)]
        return parts, lab

    owner = np.full(m, -1)
    parts_local: list[np.ndarray] = []
    for v in range(m):
        if owner[v] >= 0:
            continue
        part = np.zeros(m, dtype=bool)
        part[v] = True
        # points already placed lie in other parts; with a prime quotient
        # their smallest common module with v is everything
        for w in range(v + 1, m):
            if part[w] or owner[w] >= 0:
                continue
            mod = _closure(sub, v, w)
            if not mod.all():
                part |= mod
        owner[part] = len(parts_local)
        parts_local.append(np.flatnonzero(part))
    return [idx[p] for p in parts_local], None


def maximal_strong_partition(delta: SymMap) -> Partition:
    if delta.n < 2:
        raise TooFewPoints("need at least two points")
    parts, lab = _partition_indices(delta.matrix, np.arange(delta.n))
    kind = PRIME if lab is None else delta.alphabet[lab]
    return Partition(_sorted_parts(p.tolist() for p in parts), kind)


class MDTree:
    """Rooted tree of strong modules; node 0 is the root ``X``.

    Children are ordered by their smallest point index and nodes are numbered
    in depth-first preorder.
    """

    def __init__(self, delta: SymMap | None, nodes: list[MDNode], points: Sequence[str] | None = None):
        self.delta = delta
        self.nodes = nodes
        self.points = tuple(points if points is not None else delta.points)
        self.leaf_of = {}
        for k, node in enumerate(nodes):
            if node.is_leaf:
                (x,) = node.members
                self.leaf_of[x] = k
        self._depth = [0] * len(nodes)
        for k, node in enumerate(nodes):
            if node.parent is not None:
                self._depth[k] = self._depth[node.parent] + 1

    root = 0

    def __len__(self):
        return len(self.nodes)

    def inner(self) -> list[int]:
        return [k for k, node in enumerate(self.nodes) if not node.is_leaf]

    def prime_nodes(self) -> list[int]:
        return [k for k, node in enumerate(self.nodes) if node.is_prime]

    def edges(self) -> list[tuple[int, int]]:
        return [(node.parent, k) for k, node in enumerate(self.nodes) if node.parent is not None]

    def ancestors(self, k: int) -> list[int]:
        """Proper ancestors of ``k``, nearest first."""
        out = []
        p = self.nodes[k].parent
        while p is not None:
            out.append(p)
            p = self.nodes[p].parent
        return out

    def lca(self, a: int, b: int) -> int:
        while self._depth[a] > self._depth[b]:
            a = self.nodes[a].parent
        while self._depth[b] > self._depth[a]:
            b = self.nodes[b].parent
        while a != b:
            a = self.nodes[a].parent
            b = self.nodes[b].parent
        return a

    def child_toward(self, v: int, k: int) -> int:
        """The child of ``v`` on the path down to descendant ``k``."""
        while self.nodes[k].parent != v:
            k = self.nodes[k].parent
            if k is None:
                raise ValueError("not a descendant")
        return k

    def point_lca(self, x: int, y: int) -> int:
        return self.lca(self.leaf_of[x], self.leaf_of[y])

    def module_sets(self) -> list[frozenset[int]]:
        return [node.members for node in self.nodes]

    def set_name(self, members: Iterable[int]) -> list[str]:
        return [self.points[i] for i in sorted(members)]

    # serialization

    def to_dict(self, k: int = 0) -> dict:
        node = self.nodes[k]
        return {
            "set": self.set_name(node.members),
            "label": None if node.label is None else str(node.label),
            "children": [self.to_dict(c) for c in node.children],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        lines = ["graph mdt {", "  node [fontname=Helvetica];"]
        for k, node in enumerate(self.nodes):
            if node.is_leaf:
                (x,) = node.members
                lines.append(f'  n{k} [label="{self.points[x]}", shape=plaintext];')
            else:
                shape = "box" if node.is_prime else "ellipse"
                extra = ", peripheries=2" if k == self.root else ""
                lines.append(f'  n{k} [label="{node.label}", shape={shape}{extra}];')
        for p, c in self.edges():
            lines.append(f"  n{p} -- n{c};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _preorder(nodes_by_set: dict, root_set, children_of) -> list[MDNode]:
    nodes: list[MDNode] = []
    stack = [(root_set, None)]
    while stack:
        s, parent = stack.pop()
        k = len(nodes)
        node = nodes_by_set[s]
        node.parent = parent
        node.children = []
        nodes.append(node)
        if parent is not None:
            nodes[parent].children.append(k)
        for c in reversed(children_of[s]):
            stack.append((c, k))
    return nodes


def compute_mdt(delta: SymMap) -> MDTree:
    n = delta.n
    root = frozenset(range(n))
    by_set = {root: MDNode(root)}
    children_of: dict[frozenset[int], list[frozenset[int]]] = {root: []}
    stack = [root]
    while stack:
        s = stack.pop()
        if len(s) == 1:
            continue
        parts, lab = _partition_indices(delta.matrix, np.array(sorted(s)))
        by_set[s].label = PRIME if lab is None else delta.alphabet[lab]
        kids = _sorted_parts(p.tolist() for p in parts)
        children_of[s] = kids
        for c in kids:
            by_set[c] = MDNode(c)
            children_of[c] = []
            stack.append(c)
    return MDTree(delta, _preorder(by_set, root, children_of))


def strong_modules(delta: SymMap) -> list[frozenset[int]]:
    return compute_mdt(delta).module_sets()


def tree_from_hierarchy(family: Iterable[Iterable[int]], points: Sequence[str]) -> MDTree:
    """Unlabeled tree of a hierarchy on ``range(len(points))`` by maximal proper inclusion."""
    sets = sorted({frozenset(s) for s in family}, key=lambda s: (-len(s), min(s) if s else -1))
    n = len(points)
    full = frozenset(range(n))
    if not sets or sets[0] != full:
        raise ValueError("family must contain the full point set")
    missing = [x for x in range(n) if frozenset([x]) not in sets]
    if missing:
        raise ValueError(f"family lacks singleton {points[missing[0]]!r}")
    for a_i, a in enumerate(sets):
        for b in sets[a_i + 1:]:
            inter = a & b
            if inter and inter != a and inter != b:
                raise NotAHierarchy(a, b)
    # each set's parent is the smallest strictly larger set containing it
    children_of: dict[frozenset[int], list[frozenset[int]]] = {s: [] for s in sets}
    for i, s in enumerate(sets[1:], start=1):
        parent = None
        for t in reversed(sets[:i]):
            if len(t) > len(s) and s <= t:
                parent = t
                break
        children_of[parent].append(s)
    for s in children_of:
        children_of[s].sort(key=min)
    by_set = {s: MDNode(s) for s in sets}
    return MDTree(None, _preorder(by_set, full, children_of), points)
