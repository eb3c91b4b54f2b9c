"""Attributed bipartite contour graphs.

A contour graph alternates two node families: Point nodes (critical points
of a traced shape) and Line nodes (the segments connecting them).  Every
edge joins exactly one Point and one Line, so walks always follow the
pattern Point - Line - Point.  Nodes carry typed attributes drawn from a
closed vocabulary; numeric attributes may be single values or ranges, which
is how learned concepts encode per-class variability.

Graphs are treated as immutable after construction.  All transformations in
the package build new graphs, so any number of threads may read a graph
concurrently.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Union

from .errors import InvalidGraph, MalformedDocument, MissingStartPoint, SchemaViolation

FORMAT_VERSION = 1

POINT = "point"
LINE = "line"


class PointKind(str, Enum):
    END = "EndPoint"
    CORNER = "CornerPoint"
    INTERSECTION = "IntersectionPoint"
    START = "StartPoint"


def quantize(value: float) -> float:
    """Round a real to 12 significant digits.

    All numeric attribute payloads pass through this on construction, which
    makes the decimal serialization below an exact round trip.
    """
    return float(format(float(value), ".12g"))


@dataclass(frozen=True)
class Scalar:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", quantize(self.value))


@dataclass(frozen=True)
class Range:
    min: float
    max: float
    center: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "min", quantize(self.min))
        object.__setattr__(self, "max", quantize(self.max))
        object.__setattr__(self, "center", quantize(self.center))
        if not (self.min <= self.center <= self.max):
            raise ValueError(f"range order violated: {self.min}, {self.center}, {self.max}")
        if self.count < 1:
            raise ValueError("range count must be >= 1")
        if self.count == 1 and not (self.min == self.max == self.center):
            raise ValueError("a single-observation range must be degenerate")


@dataclass(frozen=True)
class Category:
    label: str


@dataclass(frozen=True)
class TagSet:
    labels: frozenset[str]

    def __init__(self, labels: Iterable[str] = ()):
        object.__setattr__(self, "labels", frozenset(labels))


AttributeValue = Union[Scalar, Range, Category, TagSet]


def is_numeric(value: AttributeValue) -> bool:
    return isinstance(value, (Scalar, Range))


def numeric_value(value: AttributeValue) -> float:
    """Collapse a numeric attribute to a representative single value."""
    if isinstance(value, Scalar):
        return value.value
    if isinstance(value, Range):
        return value.center
    raise TypeError(f"not a numeric attribute: {value!r}")


def numeric_bounds(value: AttributeValue) -> tuple[float, float]:
    if isinstance(value, Scalar):
        return value.value, value.value
    if isinstance(value, Range):
        return value.min, value.max
    raise TypeError(f"not a numeric attribute: {value!r}")


# --- attribute vocabulary ---------------------------------------------------

NUMERIC = "numeric"
CATEGORICAL = "categorical"
TAGS = "tags"

POINT_ATTRS: Mapping[str, str] = {
    "x": NUMERIC,
    "y": NUMERIC,
    "normalized_x": NUMERIC,
    "normalized_y": NUMERIC,
    "angle": NUMERIC,
    "tags": TAGS,
}

LINE_ATTRS: Mapping[str, str] = {
    "length": NUMERIC,
    "mid_x": NUMERIC,
    "mid_y": NUMERIC,
    "normalized_mid_x": NUMERIC,
    "normalized_mid_y": NUMERIC,
    "quadrant": CATEGORICAL,
    "horizontal_direction": CATEGORICAL,
    "vertical_direction": CATEGORICAL,
    "tags": TAGS,
}

METADATA_ATTRS: Mapping[str, str] = {
    "source": CATEGORICAL,
    "contour_type": CATEGORICAL,
    "endpoint_counts": NUMERIC,
    "corner_point_counts": NUMERIC,
    "intersection_point_counts": NUMERIC,
}

_TYPE_OF_VALUE = {Scalar: NUMERIC, Range: NUMERIC, Category: CATEGORICAL, TagSet: TAGS}


def attr_vocabulary(kind: str) -> Mapping[str, str]:
    return POINT_ATTRS if kind == POINT else LINE_ATTRS


@dataclass(frozen=True)
class NodeRecord:
    id: str
    kind: str  # POINT or LINE
    point_kind: PointKind | None = None
    attrs: dict[str, AttributeValue] = field(default_factory=dict)

    def is_point(self) -> bool:
        return self.kind == POINT

    def with_attrs(self, attrs: Mapping[str, AttributeValue]) -> "NodeRecord":
        return NodeRecord(self.id, self.kind, self.point_kind, dict(attrs))

    def with_point_kind(self, point_kind: PointKind) -> "NodeRecord":
        return NodeRecord(self.id, self.kind, point_kind, dict(self.attrs))


def point_node(node_id: str, point_kind: PointKind, **attrs: AttributeValue) -> NodeRecord:
    return NodeRecord(node_id, POINT, point_kind, dict(attrs))


def line_node(node_id: str, **attrs: AttributeValue) -> NodeRecord:
    return NodeRecord(node_id, LINE, None, dict(attrs))


_NUM_RE = re.compile(r"(\d+)")


def natural_key(s: str):
    """Sort key treating digit runs numerically, so p2 < p10."""
    parts = tuple(
        (0, int(tok)) if tok.isdigit() else (1, tok)
        for tok in _NUM_RE.split(s)
        if tok != ""
    )
    return parts + ((1, s),)


class ContourGraph:
    """Immutable attributed bipartite graph of Point and Line nodes."""

    __slots__ = ("nodes", "edges", "metadata", "_adj")

    def __init__(
        self,
        nodes: Mapping[str, NodeRecord] | Iterable[NodeRecord] = (),
        edges: Iterable[tuple[str, str]] = (),
        metadata: Mapping[str, AttributeValue] | None = None,
    ):
        if isinstance(nodes, Mapping):
            self.nodes: dict[str, NodeRecord] = dict(nodes)
        else:
            self.nodes = {rec.id: rec for rec in nodes}
        self.edges: set[tuple[str, str]] = {edge_key(a, b) for a, b in edges}
        self.metadata: dict[str, AttributeValue] = dict(metadata or {})
        self._adj: dict[str, tuple[str, ...]] | None = None

    # -- plain collection helpers --

    def adjacency(self) -> dict[str, tuple[str, ...]]:
        if self._adj is None:
            adj: dict[str, list[str]] = {nid: [] for nid in self.nodes}
            for a, b in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            self._adj = {nid: tuple(sorted(nbrs, key=natural_key)) for nid, nbrs in adj.items()}
        return self._adj

    def neighbors(self, node_id: str) -> tuple[str, ...]:
        return self.adjacency().get(node_id, ())

    def degree(self, node_id: str) -> int:
        return len(self.neighbors(node_id))

    def point_ids(self) -> list[str]:
        return sorted((n for n, r in self.nodes.items() if r.kind == POINT), key=natural_key)

    def line_ids(self) -> list[str]:
        return sorted((n for n, r in self.nodes.items() if r.kind == LINE), key=natural_key)

    def points_of_kind(self, kind: PointKind) -> list[str]:
        return sorted(
            (n for n, r in self.nodes.items() if r.kind == POINT and r.point_kind == kind),
            key=natural_key,
        )

    def start_point(self) -> str | None:
        sps = self.points_of_kind(PointKind.START)
        return sps[0] if sps else None

    def sorted_ids(self) -> list[str]:
        return sorted(self.nodes, key=natural_key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ContourGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.metadata == other.metadata
        )

    def __repr__(self) -> str:
        return f"ContourGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"

    def copy(
        self,
        nodes: Mapping[str, NodeRecord] | None = None,
        edges: Iterable[tuple[str, str]] | None = None,
        metadata: Mapping[str, AttributeValue] | None = None,
    ) -> "ContourGraph":
        return ContourGraph(
            {nid: rec for nid, rec in (nodes if nodes is not None else self.nodes).items()},
            edges if edges is not None else self.edges,
            metadata if metadata is not None else self.metadata,
        )


def edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if natural_key(a) <= natural_key(b) else (b, a)


def node_position(rec: NodeRecord) -> tuple[float, float] | None:
    """The geometric position of a node, normalized coordinates preferred."""
    if rec.kind == POINT:
        names = (("normalized_x", "normalized_y"), ("x", "y"))
    else:
        names = (("normalized_mid_x", "normalized_mid_y"), ("mid_x", "mid_y"))
    for nx, ny in names:
        vx, vy = rec.attrs.get(nx), rec.attrs.get(ny)
        if vx is not None and vy is not None:
            return numeric_value(vx), numeric_value(vy)
    return None


# --- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    violations: list[str]


def validate(g: ContourGraph) -> ValidationReport:
    """Check every structural invariant; report instead of raising."""
    violations: list[str] = []

    for a, b in sorted(g.edges):
        if a not in g.nodes or b not in g.nodes:
            violations.append(f"edge references missing node ({a},{b})")
            continue
        ka, kb = g.nodes[a].kind, g.nodes[b].kind
        if {ka, kb} != {POINT, LINE}:
            violations.append(f"alternation broken at ({a},{b})")

    starts = g.points_of_kind(PointKind.START)
    if len(starts) > 1:
        violations.append(f"multiple StartPoints: {', '.join(starts)}")

    for nid in g.sorted_ids():
        rec = g.nodes[nid]
        if rec.kind == POINT and rec.point_kind is None:
            violations.append(f"{nid}: point node without a point kind")
        if rec.kind == LINE and rec.point_kind is not None:
            violations.append(f"{nid}: line node carries a point kind")
        vocab = attr_vocabulary(rec.kind)
        for name in sorted(rec.attrs):
            if name not in vocab:
                violations.append(f"{nid}: unknown attribute '{name}'")
                continue
            expected = vocab[name]
            actual = _TYPE_OF_VALUE.get(type(rec.attrs[name]))
            if actual != expected:
                violations.append(f"{nid}: attribute '{name}' must be {expected}")

    for name in sorted(g.metadata):
        if name not in METADATA_ATTRS:
            violations.append(f"metadata: unknown attribute '{name}'")
        else:
            actual = _TYPE_OF_VALUE.get(type(g.metadata[name]))
            if actual != METADATA_ATTRS[name]:
                violations.append(f"metadata: attribute '{name}' must be {METADATA_ATTRS[name]}")

    for nid in g.sorted_ids():
        rec = g.nodes[nid]
        deg = g.degree(nid)
        if rec.kind == LINE:
            if deg not in (1, 2):
                violations.append(f"{nid}: line degree {deg} outside {{1, 2}}")
        elif rec.point_kind == PointKind.END and deg != 1:
            violations.append(f"{nid}: EndPoint degree {deg} != 1")
        elif rec.point_kind == PointKind.CORNER and deg != 2:
            violations.append(f"{nid}: CornerPoint degree {deg} != 2")
        elif rec.point_kind == PointKind.INTERSECTION and deg < 3:
            violations.append(f"{nid}: IntersectionPoint degree {deg} < 3")

    if g.nodes and not _is_connected(g):
        violations.append("graph is disconnected")

    return ValidationReport(not violations, violations)


def _is_connected(g: ContourGraph) -> bool:
    ids = g.sorted_ids()
    if not ids:
        return True
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        for nbr in g.neighbors(stack.pop()):
            if nbr not in seen:
                seen.add(nbr)
                stack.append(nbr)
    return len(seen) == len(g.nodes)


def structural_complexity(g: ContourGraph) -> int:
    """Node count plus edge count; the graph-size measure used for tie-breaks."""
    return len(g.nodes) + len(g.edges)


# --- canonical traversal ------------------------------------------------------

def canonical_traversal(g: ContourGraph) -> list[str]:
    """Deterministic depth-first node order anchored at the StartPoint.

    At every branch the unvisited neighbors are taken in ascending
    (quadrant, direction angle, node id) order, all of which is in-graph
    data, so equal graphs always produce equal sequences.
    """
    sp = g.start_point()
    if sp is None:
        raise MissingStartPoint("graph has no StartPoint")
    order: list[str] = []
    visited: set[str] = set()
    stack = [sp]
    while stack:
        nid = stack.pop()
        if nid in visited:
            continue
        visited.add(nid)
        order.append(nid)
        nxt = [n for n in g.neighbors(nid) if n not in visited]
        nxt.sort(key=lambda n: _branch_key(g, nid, n), reverse=True)
        stack.extend(nxt)
    return order


def _branch_key(g: ContourGraph, from_id: str, to_id: str):
    rec = g.nodes[to_id]
    quad = ""
    if rec.kind == LINE:
        q = rec.attrs.get("quadrant")
        if isinstance(q, Category):
            quad = q.label
    angle = 0.0
    here = node_position(g.nodes[from_id])
    there = node_position(rec)
    if here is not None and there is not None:
        dx, dy = there[0] - here[0], there[1] - here[1]
        if dx or dy:
            angle = math.atan2(dy, dx) % (2.0 * math.pi)
    return (quad, angle, natural_key(to_id))


# --- serialization ------------------------------------------------------------

def _num_str(x: float) -> str:
    return format(float(x), ".12g")


def encode_value(value: AttributeValue) -> dict | list:
    if isinstance(value, Scalar):
        return {"scalar": _num_str(value.value)}
    if isinstance(value, Range):
        return {
            "range": {
                "min": _num_str(value.min),
                "max": _num_str(value.max),
                "center": _num_str(value.center),
                "count": value.count,
            }
        }
    if isinstance(value, Category):
        return {"category": value.label}
    if isinstance(value, TagSet):
        return {"tags": sorted(value.labels)}
    raise TypeError(f"unencodable attribute value: {value!r}")


def decode_value(doc, where: str) -> AttributeValue:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise SchemaViolation(f"{where}: malformed attribute value {doc!r}")
    tag, payload = next(iter(doc.items()))
    try:
        if tag == "scalar":
            return Scalar(float(payload))
        if tag == "range":
            return Range(
                float(payload["min"]),
                float(payload["max"]),
                float(payload["center"]),
                int(payload["count"]),
            )
        if tag == "category":
            if not isinstance(payload, str):
                raise ValueError("category label must be a string")
            return Category(payload)
        if tag == "tags":
            if not isinstance(payload, list):
                raise ValueError("tags must be a list")
            return TagSet(str(t) for t in payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"{where}: bad '{tag}' value: {exc}") from exc
    raise SchemaViolation(f"{where}: unknown value tag '{tag}'")


def to_document(g: ContourGraph) -> dict:
    """Plain-dict form of a graph, stable ordering throughout."""
    report = validate(g)
    if not report.ok:
        raise InvalidGraph("; ".join(report.violations))
    nodes = []
    for nid in g.sorted_ids():
        rec = g.nodes[nid]
        entry: dict = {"id": nid, "kind": rec.kind}
        if rec.point_kind is not None:
            entry["point_kind"] = rec.point_kind.value
        entry["attrs"] = {name: encode_value(rec.attrs[name]) for name in sorted(rec.attrs)}
        nodes.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "nodes": nodes,
        "edges": [list(e) for e in sorted(g.edges)],
        "metadata": {name: encode_value(g.metadata[name]) for name in sorted(g.metadata)},
    }


def from_document(doc: dict) -> ContourGraph:
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level document must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaViolation(f"unsupported format_version: {doc.get('format_version')!r}")
    for key in ("nodes", "edges", "metadata"):
        if key not in doc:
            raise MalformedDocument(f"missing top-level key '{key}'")
    nodes: dict[str, NodeRecord] = {}
    for entry in doc["nodes"]:
        if not isinstance(entry, dict) or "id" not in entry or "kind" not in entry:
            raise MalformedDocument(f"malformed node entry: {entry!r}")
        nid = str(entry["id"])
        kind = entry["kind"]
        if kind not in (POINT, LINE):
            raise SchemaViolation(f"{nid}: unknown node kind '{kind}'")
        pk = None
        if "point_kind" in entry:
            try:
                pk = PointKind(entry["point_kind"])
            except ValueError as exc:
                raise SchemaViolation(f"{nid}: unknown point kind") from exc
        attrs = {
            str(name): decode_value(val, f"{nid}.{name}")
            for name, val in entry.get("attrs", {}).items()
        }
        if nid in nodes:
            raise SchemaViolation(f"duplicate node id '{nid}'")
        nodes[nid] = NodeRecord(nid, kind, pk, attrs)
    edges = []
    for pair in doc["edges"]:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedDocument(f"malformed edge entry: {pair!r}")
        edges.append((str(pair[0]), str(pair[1])))
    metadata = {
        str(name): decode_value(val, f"metadata.{name}")
        for name, val in doc["metadata"].items()
    }
    g = ContourGraph(nodes, edges, metadata)
    report = validate(g)
    if not report.ok:
        raise SchemaViolation("; ".join(report.violations))
    return g


def serialize(g: ContourGraph) -> str:
    return json.dumps(to_document(g), indent=2) + "\n"


def deserialize(text: str) -> ContourGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    return from_document(doc)


# --- DOT export ----------------------------------------------------------------

def _dot_label(rec: NodeRecord) -> str:
    if rec.kind == POINT:
        return rec.point_kind.value if rec.point_kind else "Point"
    length = rec.attrs.get("length")
    if isinstance(length, Scalar):
        return f"len={_num_str(length.value)}"
    if isinstance(length, Range):
        return f"len∈[{_num_str(length.min)},{_num_str(length.max)}]"
    return "Line"


def to_dot(g: ContourGraph) -> str:
    """Render the graph in DOT format; output is stable for stable input."""
    report = validate(g)
    if not report.ok:
        raise InvalidGraph("; ".join(report.violations))
    lines = ["graph contour {"]
    for nid in g.sorted_ids():
        rec = g.nodes[nid]
        shape = "ellipse" if rec.kind == POINT else "box"
        lines.append(f'  "{nid}" [label="{_dot_label(rec)}", shape={shape}];')
    for a, b in sorted(g.edges):
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
