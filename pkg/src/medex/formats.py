"""Reading maps and reading/writing labeled graphs (JSON, DOT, GraphML)."""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from pathlib import Path

from .graph import GraphError, NotMedianGraph, RootedLabeledGraph, median_set
from .symmap import MapError, SymMap, build_map

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

# Okabe-Ito, then grays; cycles for larger alphabets
PALETTE = ["#0072B2", "#D55E00", "#009E73", "#CC79A7", "#E69F00", "#56B4E9", "#F0E442",
           "#999999", "#555555"]


class MapFormatError(MapError):
    pass


class GraphFormatError(GraphError):
    pass


# maps

def parse_map_json(text: str) -> SymMap:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "points" not in doc or "pairs" not in doc:
        raise MapFormatError("map JSON needs 'points' and 'pairs'")
    declared = doc.get("labels")
    entries = []
    for entry in doc["pairs"]:
        if not isinstance(entry, list) or len(entry) != 3:
            raise MapFormatError(f"pair entry must be [x, y, label], got {entry!r}")
        x, y, lab = (str(e) for e in entry)
        if declared is not None and lab not in declared:
            raise MapFormatError(f"label {lab!r} not declared in 'labels'")
        entries.append((x, y, lab))
    return build_map([str(p) for p in doc["points"]], entries)


def parse_map_tsv(text: str) -> SymMap:
    rows = list(csv.reader(io.StringIO(text), delimiter="\t"))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise MapFormatError("empty TSV")
    header = [c.strip() for c in rows[0][1:]]
    if len(rows) - 1 != len(header):
        raise MapFormatError(f"{len(header)} columns but {len(rows) - 1} rows")
    cells = {}
    for r, row in enumerate(rows[1:], start=1):
        name = row[0].strip()
        if name != header[r - 1]:
            raise MapFormatError(f"row {r} is {name!r}, column header is {header[r - 1]!r}")
        vals = [c.strip() for c in row[1:]]
        if len(vals) != len(header):
            raise MapFormatError(f"row {r} has {len(vals)} cells, expected {len(header)}")
        for c, val in enumerate(vals, start=1):
            if r == c:
                if val:
                    raise MapFormatError(f"diagonal cell ({r},{c}) must be empty")
                continue
            cells[(r, c)] = val
    entries = []
    for (r, c), val in cells.items():
        if r < c:
            other = cells[(c, r)]
            if val != other:
                raise MapFormatError(f"asymmetric cells ({r},{c})={val!r} and ({c},{r})={other!r}")
            if not val:
                raise MapFormatError(f"empty cell ({r},{c})")
            entries.append((header[r - 1], header[c - 1], val))
    return build_map(header, entries)


def read_map(path: str | Path) -> SymMap:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() in (".tsv", ".tab", ".txt") or not text.lstrip().startswith("{"):
        return parse_map_tsv(text)
    return parse_map_json(text)


def map_to_json(delta: SymMap) -> str:
    doc = {
        "points": list(delta.points),
        "labels": list(delta.alphabet),
        "pairs": [[x, y, lab] for x, y, lab in delta.pairs()],
    }
    return json.dumps(doc, indent=2)


# graphs

def _check_unique_names(g: RootedLabeledGraph) -> None:
    if len(set(g.names)) != len(g.names):
        raise GraphFormatError("vertex names are not unique")


def safe_median_set(g: RootedLabeledGraph) -> set[int]:
    try:
        return median_set(g)
    except NotMedianGraph:
        return set()


def graph_to_dict(g: RootedLabeledGraph) -> dict:
    _check_unique_names(g)
    vertices = []
    for v, name in enumerate(g.names):
        rec: dict = {"id": name}
        if v in g.labels:
            rec["label"] = g.labels[v]
        if v in g.leaves:
            rec["leaf"] = g.leaves[v]
        if v == g.root:
            rec["root"] = True
        if v in g.provenance:
            rec["provenance"] = g.provenance[v]
        if v in g.coords:
            rec["coord"] = list(g.coords[v])
        vertices.append(rec)
    edges = [[g.names[u], g.names[v]] for u, v in g.edges()]
    return {"vertices": vertices, "edges": edges}


def graph_to_json(g: RootedLabeledGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2)


def graph_from_dict(doc: dict) -> RootedLabeledGraph:
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphFormatError("graph JSON needs 'vertices' and 'edges'")
    g = RootedLabeledGraph()
    index = {}
    for rec in doc["vertices"]:
        vid = str(rec["id"])
        if vid in index:
            raise GraphFormatError(f"duplicate vertex id {vid!r}")
        coord = tuple(rec["coord"]) if "coord" in rec else None
        v = index[vid] = g.add_vertex(vid, coord)
        if rec.get("label") is not None:
            g.labels[v] = str(rec["label"])
        if rec.get("leaf") is not None:
            g.leaves[v] = str(rec["leaf"])
        if rec.get("root"):
            if g.root is not None:
                raise GraphFormatError("more than one root")
            g.root = v
        if rec.get("provenance") is not None:
            g.provenance[v] = str(rec["provenance"])
    for edge in doc["edges"]:
        a, b = (str(e) for e in edge)
        if a not in index or b not in index:
            raise GraphFormatError(f"edge {edge!r} names an unknown vertex")
        if a == b or index[b] in g.adj[index[a]]:
            raise GraphFormatError(f"edge {edge!r} is a loop or a repeat")
        g.add_edge(index[a], index[b])
    if g.root is None:
        raise GraphFormatError("no root vertex")
    return g


def graph_from_json(text: str) -> RootedLabeledGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    return graph_from_dict(doc)


def _colors(g: RootedLabeledGraph) -> dict[str, str]:
    labels = sorted(set(g.labels.values()))
    return {lab: PALETTE[i % len(PALETTE)] for i, lab in enumerate(labels)}


def _dq(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: RootedLabeledGraph, medians: set[int] | None = None) -> str:
    _check_unique_names(g)
    medians = safe_median_set(g) if medians is None else medians
    colors = _colors(g)
    lines = ["graph G {", "  node [fontname=Helvetica, style=filled, fillcolor=white];"]
    for v, name in enumerate(g.names):
        attrs = {}
        if v in g.leaves:
            attrs["label"] = g.leaves[v]
            attrs["shape"] = "plaintext"
        else:
            attrs["label"] = g.labels.get(v, "")
            attrs["shape"] = "doublecircle" if v == g.root else "circle"
        if v in g.labels:
            attrs["fillcolor"] = colors[g.labels[v]]
        if v in medians:
            attrs["median"] = "true"
        if v in g.provenance:
            attrs["provenance"] = g.provenance[v]
        c = g.coords.get(v)
        if c is not None and len(c) == 2:
            # grid coordinates: column j to the right, row i downward
            attrs["pos"] = f"{c[1]},{-c[0]}!"
        elif c is not None:
            attrs["layer"] = str(sum(c))
        body = ", ".join(f"{k}={_dq(val)}" for k, val in attrs.items())
        lines.append(f"  {_dq(name)} [{body}];")
    for u, v in g.edges():
        lines.append(f"  {_dq(g.names[u])} -- {_dq(g.names[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_GRAPHML_KEYS = [
    ("label", "string"),
    ("leaf", "string"),
    ("root", "boolean"),
    ("median", "boolean"),
    ("provenance", "string"),
    ("color", "string"),
    ("coord", "string"),
]


def graph_to_graphml(g: RootedLabeledGraph, medians: set[int] | None = None) -> str:
    _check_unique_names(g)
    medians = safe_median_set(g) if medians is None else medians
    colors = _colors(g)
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(f"{{{GRAPHML_NS}}}graphml")
    for name, typ in _GRAPHML_KEYS:
        ET.SubElement(root, f"{{{GRAPHML_NS}}}key", {"id": name, "for": "node", "attr.name": name, "attr.type": typ})
    graph = ET.SubElement(root, f"{{{GRAPHML_NS}}}graph", {"id": "G", "edgedefault": "undirected"})

    def data(node, key, value):
        el = ET.SubElement(node, f"{{{GRAPHML_NS}}}data", {"key": key})
        el.text = value

    for v, name in enumerate(g.names):
        node = ET.SubElement(graph, f"{{{GRAPHML_NS}}}node", {"id": name})
        if v in g.labels:
            data(node, "label", g.labels[v])
            data(node, "color", colors[g.labels[v]])
        if v in g.leaves:
            data(node, "leaf", g.leaves[v])
        if v == g.root:
            data(node, "root", "true")
        if v in medians:
            data(node, "median", "true")
        if v in g.provenance:
            data(node, "provenance", g.provenance[v])
        if v in g.coords:
            data(node, "coord", ",".join(map(str, g.coords[v])))
    for k, (u, v) in enumerate(g.edges()):
        ET.SubElement(graph, f"{{{GRAPHML_NS}}}edge", {"id": f"e{k}", "source": g.names[u], "target": g.names[v]})
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def graph_from_graphml(text: str) -> RootedLabeledGraph:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise GraphFormatError(f"invalid GraphML: {exc}") from None
    ns = {"g": GRAPHML_NS}
    graph = root.find("g:graph", ns)
    if graph is None:
        raise GraphFormatError("no <graph> element")
    vertices = []
    for node in graph.findall("g:node", ns):
        rec = {"id": node.get("id")}
        for d in node.findall("g:data", ns):
            key, val = d.get("key"), d.text or ""
            if key == "root":
                rec["root"] = val == "true"
            elif key == "coord":
                rec["coord"] = [int(c) for c in val.split(",")]
            elif key in ("label", "leaf", "provenance"):
                rec[key] = val
        vertices.append(rec)
    edges = [[e.get("source"), e.get("target")] for e in graph.findall("g:edge", ns)]
    return graph_from_dict({"vertices": vertices, "edges": edges})


def read_graph(path: str | Path) -> RootedLabeledGraph:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".graphml" or text.lstrip().startswith("<"):
        return graph_from_graphml(text)
    return graph_from_json(text)


def write_graph(g: RootedLabeledGraph, fmt: str) -> str:
    if fmt == "json":
        return graph_to_json(g) + "\n"
    if fmt == "dot":
        return graph_to_dot(g)
    if fmt == "graphml":
        return graph_to_graphml(g)
    raise ValueError(f"unknown graph format {fmt!r}")
