"""Prime-vertex replacement: expand a modular decomposition tree into a
rooted labeled median graph that explains the map.

Every prime node with ``k`` children is replaced by a labeled extended
half-grid on ``k`` leaves whose root is the prime node and whose leaves are
its children (in child order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.sparse.csgraph import connected_components

from .constructions import explain_by_halfgrid, half_grid_size, halfgrid_median_formula
from .graph import (
    FULL_MEDIAN_CHECK_LIMIT,
    GraphError,
    NotMedianGraph,
    RootedLabeledGraph,
    UnlabeledMedian,
    ancestor_order,
    distance_rows,
    explains,
    is_median_graph,
)
from .mdt import MDTree, compute_mdt
from .symmap import SymMap, from_matrix

MDT_ORIGIN = "mdt"


@dataclass
class PrimeReplacement:
    node: int  # MDT node index of the prime vertex
    graph: RootedLabeledGraph  # the labeled replacement graph as built
    children: list[int]  # MDT child nodes in replacement-leaf order
    vertex_map: dict[int, int]  # replacement vertex -> vertex of the expanded graph


@dataclass
class PvrResult:
    delta: SymMap
    tree: MDTree
    graph: RootedLabeledGraph
    tree_vertex: list[int]  # MDT node -> vertex of the expanded graph
    replacements: dict[int, PrimeReplacement] = field(default_factory=dict)

    def provenance(self, v: int) -> str:
        return self.graph.provenance[v]


def _quotient_at(delta: SymMap, tree: MDTree, v: int, names: list[str]) -> SymMap:
    reps = [min(tree.nodes[c].members) for c in tree.nodes[v].children]
    return from_matrix(names, delta.matrix[np.ix_(reps, reps)], delta.alphabet)


def glue_replacement(g: RootedLabeledGraph, v: int, leaf_targets: dict[str, int],
                     rg: RootedLabeledGraph, tag: str) -> dict[int, int]:
    """Splice ``rg`` into ``g``: its root becomes ``v``, its leaves existing vertices.

    ``leaf_targets`` maps the point bound to each ``rg`` leaf to a vertex of
    ``g``. Edges from ``v`` to those vertices must already be gone. Labels of
    ``rg`` are copied; a vertex receiving two different labels is an error.
    """
    if rg.root not in rg.labels:
        raise GraphError("replacement root must be one of its labeled medians")
    vmap: dict[int, int] = {}
    for u in range(len(rg.adj)):
        if u == rg.root:
            vmap[u] = v
        elif u in rg.leaves:
            vmap[u] = leaf_targets[rg.leaves[u]]
        else:
            c = rg.coords.get(u)
            name = f"{g.names[v]}:{rg.names[u]}"
            vmap[u] = g.add_vertex(name, c)
            g.provenance[vmap[u]] = tag
    for a, b in rg.edges():
        g.add_edge(vmap[a], vmap[b])
    for u, lab in rg.labels.items():
        old = g.labels.get(vmap[u])
        if old is not None and old != lab:
            raise GraphError(f"conflicting labels on {g.names[vmap[u]]}: {old!r} vs {lab!r}")
        g.labels[vmap[u]] = lab
    return vmap


def pvr_expand(delta: SymMap, tree: MDTree | None = None) -> PvrResult:
    tree = compute_mdt(delta) if tree is None else tree
    g = RootedLabeledGraph()
    tv: list[int] = []
    prefix = "m"
    while any(p.startswith(prefix) for p in delta.points):
        prefix += "_"
    for k, node in enumerate(tree.nodes):
        if node.is_leaf:
            (x,) = node.members
            u = g.add_vertex(delta.points[x])
            g.leaves[u] = delta.points[x]
        else:
            u = g.add_vertex(f"{prefix}{k}")
            if not node.is_prime:
                g.labels[u] = node.label
        g.provenance[u] = MDT_ORIGIN
        tv.append(u)
    g.root = tv[tree.root]
    for p, c in tree.edges():
        if not tree.nodes[p].is_prime:
            g.add_edge(tv[p], tv[c])

    result = PvrResult(delta, tree, g, tv)
    for v in tree.prime_nodes():
        kids = tree.nodes[v].children
        assert len(kids) >= 3, "a prime node has at least three children"
        names = [f"c{i}" for i in range(len(kids))]
        rg = explain_by_halfgrid(_quotient_at(delta, tree, v, names))
        targets = {name: tv[c] for name, c in zip(names, kids)}
        vmap = glue_replacement(g, tv[v], targets, rg, f"replacement:{g.names[tv[v]]}")
        result.replacements[v] = PrimeReplacement(v, rg, list(kids), vmap)
    return result


def pvr_size(delta: SymMap, tree: MDTree | None = None) -> tuple[int, int]:
    """Predicted ``(vertices, edges)`` of the expanded graph from the tree shape."""
    tree = compute_mdt(delta) if tree is None else tree
    nv = len(tree.nodes)
    ne = nv - 1
    for v in tree.prime_nodes():
        grid_v, grid_e = half_grid_size(len(tree.nodes[v].children) - 1)
        # root and leaves of the half-grid are existing tree vertices; the
        # child edges are replaced by grid edges plus one edge per leaf
        nv += grid_v - 1
        ne += grid_e
    return nv, ne


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class PvrReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{c.status.upper():4} {c.name}"
            if c.detail:
                line += f": {c.detail}"
            lines.append(line)
        return "\n".join(lines)


def _check_median_graph(g, limit) -> CheckResult:
    if len(g.adj) > limit:
        return CheckResult("median-graph", "skip", f"{len(g.adj)} vertices > limit {limit}")
    chk = is_median_graph(g)
    if chk:
        return CheckResult("median-graph", "pass")
    names = tuple(g.names[u] for u in chk.witness)
    return CheckResult("median-graph", "fail", f"triple {names} has {chk.count} medians")


def _check_labeling_domain(res: PvrResult) -> CheckResult:
    g, tree = res.graph, res.tree
    want = {res.tree_vertex[k] for k in tree.inner()}
    for rep in res.replacements.values():
        want |= {rep.vertex_map[u] for u in rep.graph.labels}
    got = set(g.labels)
    if got == want:
        return CheckResult("labeling-domain", "pass")
    extra = sorted(g.names[u] for u in got - want)
    missing = sorted(g.names[u] for u in want - got)
    return CheckResult("labeling-domain", "fail", f"unexpected {extra}, missing {missing}")


def _check_ancestors(res: PvrResult) -> CheckResult:
    g, tree, tv = res.graph, res.tree, res.tree_vertex
    order = ancestor_order(g)
    for u in range(len(tree.nodes)):
        for a in tree.ancestors(u):
            if not order.precedes(tv[u], tv[a]):
                return CheckResult("ancestor-preservation", "fail",
                                   f"{g.names[tv[u]]} not below {g.names[tv[a]]}")
    return CheckResult("ancestor-preservation", "pass")


def _check_tree_paths(res: PvrResult) -> CheckResult:
    # every inner tree vertex separates its descendants from its ancestors
    g, tree, tv = res.graph, res.tree, res.tree_vertex
    csr = g.csr()
    for w in tree.inner():
        ancestors = tree.ancestors(w)
        if not ancestors:
            continue
        keep = np.ones(len(g.adj), dtype=bool)
        keep[tv[w]] = False
        _, sub_comp = connected_components(csr[keep][:, keep], directed=False)
        comp = np.full(len(g.adj), -1)
        comp[keep] = sub_comp
        stack = list(tree.nodes[w].children)
        while stack:
            u = stack.pop()
            stack.extend(tree.nodes[u].children)
            for a in ancestors:
                if comp[tv[u]] == comp[tv[a]]:
                    return CheckResult("tree-paths", "fail",
                                       f"path {g.names[tv[u]]}-{g.names[tv[a]]} avoids {g.names[tv[w]]}")
    return CheckResult("tree-paths", "pass")


def _check_median_transfer(res: PvrResult, medians: dict) -> CheckResult:
    g, tree, tv, delta = res.graph, res.tree, res.tree_vertex, res.delta
    local_rows = {}
    for v, rep in res.replacements.items():
        local_rows[v] = dict(zip([tv[v]] + [tv[c] for c in rep.children],
                                 distance_rows(g, [tv[v]] + [tv[c] for c in rep.children])))
    for i, j in combinations(range(delta.n), 2):
        x, y = delta.points[i], delta.points[j]
        m = medians[(x, y)]
        v = tree.point_lca(i, j)
        if not tree.nodes[v].is_prime:
            if m != tv[v]:
                return CheckResult("median-transfer", "fail", f"med(root,{x},{y}) = {g.names[m]}, lca is {g.names[tv[v]]}")
            continue
        rep = res.replacements[v]
        cx = tree.child_toward(v, tree.leaf_of[i])
        cy = tree.child_toward(v, tree.leaf_of[j])
        a, b = sorted((rep.children.index(cx) + 1, rep.children.index(cy) + 1))
        coord = halfgrid_median_formula(a, b, len(rep.children) - 1)
        want = rep.vertex_map[rep.graph.vertex_at(coord)]
        rows = local_rows[v]
        dv, dx, dy = rows[tv[v]], rows[tv[cx]], rows[tv[cy]]
        local = np.flatnonzero((dv + dx == dv[tv[cx]]) & (dv + dy == dv[tv[cy]]) & (dx + dy == dx[tv[cy]]))
        if m != want or local.tolist() != [m]:
            return CheckResult("median-transfer", "fail",
                               f"med(root,{x},{y}) = {g.names[m]}, expected {g.names[want]}")
    return CheckResult("median-transfer", "pass")


def verify_pvr(res: PvrResult, delta: SymMap | None = None, limit: int = FULL_MEDIAN_CHECK_LIMIT) -> PvrReport:
    delta = res.delta if delta is None else delta
    g = res.graph
    checks = [_check_median_graph(g, limit)]
    medians = None
    try:
        rep = explains(g, delta, full_check=False)
    except UnlabeledMedian as exc:
        checks.append(CheckResult("explains", "fail", str(exc)))
    except NotMedianGraph as exc:
        names = tuple(g.names[u] for u in exc.triple)
        checks.append(CheckResult("explains", "fail", f"triple {names} has {exc.count} medians"))
    else:
        medians = rep.medians
        if rep.ok:
            checks.append(CheckResult("explains", "pass"))
        else:
            x, y, want, got = rep.mismatches[0]
            checks.append(CheckResult("explains", "fail",
                                      f"{len(rep.mismatches)} mismatches, first ({x},{y}): want {want}, got {got}"))
    checks.append(_check_labeling_domain(res))
    checks.append(_check_ancestors(res))
    checks.append(_check_tree_paths(res))
    if medians is None:
        checks.append(CheckResult("median-transfer", "fail", "medians unavailable"))
    else:
        transfer = _check_median_transfer(res, medians)
        if transfer.passed and not res.replacements:
            transfer.detail = "no prime vertex"
        checks.append(transfer)
    return PvrReport(checks)
