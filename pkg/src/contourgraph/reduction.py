"""Graph reduction operators.

Three families of pure transformations drive concept formation:

* parametric generalization - numeric attributes widen into ranges,
  categorical attributes survive only when consistent, tag sets intersect;
* structural noise removal - weakly supported endpoint branches are cut and
  near-coincident intersection points are consolidated;
* path pruning - of two aligned paths between matching critical points, the
  shorter one acts as a template and unmatched nodes of the longer one are
  marked for deletion, which evens out length variations.

Every operator returns a new graph and never increases the node or edge
count of what it transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoPathFound, NotAnEndpoint
from .graph_core import (
    POINT,
    AttributeValue,
    Category,
    ContourGraph,
    NodeRecord,
    PointKind,
    Range,
    Scalar,
    TagSet,
    edge_key,
    natural_key,
    node_position,
)

MAX_POSITION_DISTANCE = 2.0 * math.sqrt(2.0)  # opposite corners of [-1, 1]^2


@dataclass(frozen=True)
class SimilarityMatrix:
    concept_ids: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray  # [len(concept_ids), len(sample_ids)], entries in [0, 1]

    def entry(self, concept_id: str, sample_id: str) -> float:
        return float(
            self.values[self.concept_ids.index(concept_id), self.sample_ids.index(sample_id)]
        )


@dataclass(frozen=True)
class PathPair:
    path_a: tuple[str, ...]  # concept-side node sequence, endpoints included
    path_b: tuple[str, ...]  # sample-side node sequence
    match_score: float


# --- parametric generalization ------------------------------------------------

def _as_range(v: AttributeValue) -> Range:
    if isinstance(v, Range):
        return v
    if isinstance(v, Scalar):
        return Range(v.value, v.value, v.value, 1)
    raise TypeError(f"not numeric: {v!r}")


def merge_numeric(a: AttributeValue, b: AttributeValue) -> Range:
    """Widen two numeric attributes into one range.

    The center is the running arithmetic mean over every contributing
    observation, carried by the count field, so merge order cannot change it.
    """
    ra, rb = _as_range(a), _as_range(b)
    count = ra.count + rb.count
    center = (ra.center * ra.count + rb.center * rb.count) / count
    return Range(min(ra.min, rb.min), max(ra.max, rb.max), center, count)


def merge_categorical(a: Category, b: Category) -> Category | None:
    """Equal labels survive; a conflict removes the attribute (None)."""
    return a if a.label == b.label else None


def merge_tags(a: TagSet, b: TagSet) -> TagSet:
    return TagSet(a.labels & b.labels)


def merge_attr(a: AttributeValue, b: AttributeValue) -> AttributeValue | None:
    if isinstance(a, (Scalar, Range)) and isinstance(b, (Scalar, Range)):
        return merge_numeric(a, b)
    if isinstance(a, Category) and isinstance(b, Category):
        return merge_categorical(a, b)
    if isinstance(a, TagSet) and isinstance(b, TagSet):
        return merge_tags(a, b)
    return None


def merge_attr_maps(
    a: dict[str, AttributeValue], b: dict[str, AttributeValue]
) -> dict[str, AttributeValue]:
    """Merge two attribute maps name by name.

    Only names present on both sides survive; a categorical conflict removes
    the name entirely, which is how inconsistent observations disappear from
    a concept.
    """
    merged: dict[str, AttributeValue] = {}
    for name in sorted(set(a) & set(b)):
        value = merge_attr(a[name], b[name])
        if value is not None:
            merged[name] = value
    return merged


# --- node similarity ------------------------------------------------------------

def point_similarity(a: NodeRecord, b: NodeRecord, w_pos: float, w_attr: float) -> float:
    """Similarity in [0, 1]: weighted normalized-position closeness plus
    categorical-attribute compatibility.

    Compatibility is the fraction of the two nodes' pooled categorical
    attributes that are present on both sides with equal labels; two nodes
    with identical attribute maps are fully compatible.
    """
    pa, pb = node_position(a), node_position(b)
    if pa is None or pb is None:
        pos_term = 0.0
    else:
        d = math.hypot(pa[0] - pb[0], pa[1] - pb[1])
        pos_term = max(0.0, 1.0 - d / MAX_POSITION_DISTANCE)
    if a.attrs == b.attrs:
        compat = 1.0
    else:
        cats_a = {n: v.label for n, v in a.attrs.items() if isinstance(v, Category)}
        cats_b = {n: v.label for n, v in b.attrs.items() if isinstance(v, Category)}
        union = set(cats_a) | set(cats_b)
        if union:
            agree = sum(1 for n in cats_a if n in cats_b and cats_a[n] == cats_b[n])
            compat = agree / len(union)
        else:
            compat = 0.0
    return w_pos * pos_term + w_attr * compat


def endpoint_similarity(
    concept: ContourGraph, sample: ContourGraph, w_pos: float = 0.7, w_attr: float = 0.3
) -> SimilarityMatrix:
    """Pairwise similarity of the two graphs' EndPoint nodes."""
    c_ids = tuple(concept.points_of_kind(PointKind.END))
    g_ids = tuple(sample.points_of_kind(PointKind.END))
    values = np.zeros((len(c_ids), len(g_ids)))
    for i, cid in enumerate(c_ids):
        for j, gid in enumerate(g_ids):
            values[i, j] = point_similarity(concept.nodes[cid], sample.nodes[gid], w_pos, w_attr)
    return SimilarityMatrix(c_ids, g_ids, values)


# --- structural noise removal ---------------------------------------------------

def _reclassify(g: ContourGraph, node_id: str) -> ContourGraph:
    rec = g.nodes[node_id]
    if rec.kind != POINT or rec.point_kind == PointKind.START:
        return g
    deg = g.degree(node_id)
    if deg <= 1:
        pk = PointKind.END
    elif deg == 2:
        pk = PointKind.CORNER
    else:
        pk = PointKind.INTERSECTION
    if pk == rec.point_kind:
        return g
    nodes = dict(g.nodes)
    nodes[node_id] = rec.with_point_kind(pk)
    return ContourGraph(nodes, g.edges, g.metadata)


def remove_endpoint_branch(g: ContourGraph, endpoint_id: str) -> ContourGraph:
    """Delete an endpoint and its pendant segment up to (exclusive of) the
    next surviving point, then reclassify that point by its new degree."""
    rec = g.nodes.get(endpoint_id)
    if rec is None or rec.kind != POINT or rec.point_kind != PointKind.END:
        raise NotAnEndpoint(f"{endpoint_id!r} is not an EndPoint of this graph")
    doomed = {endpoint_id}
    survivor: str | None = None
    for line_id in g.neighbors(endpoint_id):
        doomed.add(line_id)
        for other in g.neighbors(line_id):
            if other != endpoint_id:
                survivor = other
    nodes = {nid: r for nid, r in g.nodes.items() if nid not in doomed}
    edges = [e for e in g.edges if e[0] not in doomed and e[1] not in doomed]
    out = ContourGraph(nodes, edges, g.metadata)
    if survivor is not None:
        out = _reclassify(out, survivor)
    return out


def merge_intersections(g: ContourGraph, distance_threshold: float) -> ContourGraph:
    """Consolidate IntersectionPoints lying within the threshold of each
    other (single linkage) into one attribute-merged node."""
    ips = g.points_of_kind(PointKind.INTERSECTION)
    positions = {}
    for nid in ips:
        pos = node_position(g.nodes[nid])
        if pos is not None:
            positions[nid] = pos
    parent = {nid: nid for nid in ips}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(ips):
        for b in ips[i + 1 :]:
            if a in positions and b in positions:
                d = math.hypot(
                    positions[a][0] - positions[b][0], positions[a][1] - positions[b][1]
                )
                if d <= distance_threshold:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb, key=natural_key)] = min(ra, rb, key=natural_key)

    clusters: dict[str, list[str]] = {}
    for nid in ips:
        clusters.setdefault(find(nid), []).append(nid)
    clusters = {k: sorted(v, key=natural_key) for k, v in clusters.items() if len(v) > 1}
    if not clusters:
        return g

    remap: dict[str, str] = {}
    merged_nodes: dict[str, NodeRecord] = {}
    for root, members in sorted(clusters.items(), key=lambda kv: natural_key(kv[0])):
        attrs = dict(g.nodes[members[0]].attrs)
        for other in members[1:]:
            attrs = merge_attr_maps(attrs, g.nodes[other].attrs)
        merged_nodes[root] = NodeRecord(root, POINT, PointKind.INTERSECTION, attrs)
        for member in members:
            remap[member] = root

    nodes: dict[str, NodeRecord] = {}
    for nid, rec in g.nodes.items():
        if nid in remap:
            if remap[nid] == nid:
                nodes[nid] = merged_nodes[nid]
        else:
            nodes[nid] = rec
    edges = {edge_key(remap.get(a, a), remap.get(b, b)) for a, b in g.edges}
    out = ContourGraph(nodes, edges, g.metadata)
    for root in sorted(merged_nodes, key=natural_key):
        out = _reclassify(out, root)
    return out


# --- path pruning ------------------------------------------------------------

def enumerate_simple_paths(
    g: ContourGraph,
    start: str,
    end: str,
    cap: int,
    forbidden_interior: frozenset[str] = frozenset(),
) -> list[tuple[str, ...]]:
    """Up to `cap` simple paths from start to end, shortest first.

    Interior nodes listed in `forbidden_interior` may not be used.  Paths of
    equal length come out in lexicographic node-id order.
    """
    results: list[tuple[str, ...]] = []
    queue: list[tuple[str, ...]] = [(start,)]
    while queue and len(results) < cap:
        path = queue.pop(0)
        tip = path[-1]
        for nbr in sorted(g.neighbors(tip), key=natural_key):
            if nbr == end:
                if len(path) > 1 or start != end:
                    results.append(path + (nbr,))
                    if len(results) >= cap:
                        break
            elif nbr not in path and nbr not in forbidden_interior:
                queue.append(path + (nbr,))
    return results


def align_paths(
    graph_short: ContourGraph,
    path_short: tuple[str, ...],
    graph_long: ContourGraph,
    path_long: tuple[str, ...],
    w_pos: float,
    w_attr: float,
) -> tuple[float, list[tuple[int, int]]]:
    """Best order- and parity-preserving matching of the shorter path's
    nodes onto the longer path's nodes, scored by summed node similarity.

    Both paths alternate Point/Line and share aligned ends, so slot i of the
    template may only match a slot of equal parity; the first and last slots
    are pinned to each other.  Returns (score, [(i_short, j_long), ...]).
    """
    ns, nl = len(path_short), len(path_long)
    sims = np.full((ns, nl), -math.inf)
    for i in range(ns):
        for j in range(i % 2, nl, 2):
            sims[i, j] = point_similarity(
                graph_short.nodes[path_short[i]], graph_long.nodes[path_long[j]], w_pos, w_attr
            )
    best = np.full((ns, nl), -math.inf)
    back = np.full((ns, nl), -1, dtype=np.int64)
    best[0, 0] = sims[0, 0]
    for i in range(1, ns):
        hi = nl - (ns - 1 - i)
        for j in range(i, hi):
            if (j - i) % 2:
                continue
            cand = -math.inf
            arg = -1
            for jp in range(i - 1, j):
                if (jp - (i - 1)) % 2:
                    continue
                if best[i - 1, jp] > cand:
                    cand = best[i - 1, jp]
                    arg = jp
            if arg >= 0:
                best[i, j] = cand + sims[i, j]
                back[i, j] = arg
    # pin last to last
    i, j = ns - 1, nl - 1
    score = float(best[i, j])
    mapping: list[tuple[int, int]] = []
    while i >= 0:
        mapping.append((i, j))
        j = int(back[i, j])
        i -= 1
    mapping.reverse()
    return score, mapping


@dataclass(frozen=True)
class PruneResult:
    template_side: str  # "a" (concept) or "b" (sample)
    template_path: tuple[str, ...]
    # longer-path node id -> matched template node id
    correspondence: dict[str, str]
    removed: tuple[str, ...]  # unmatched longer-path node ids


def find_best_path_pair(
    graph_a: ContourGraph,
    ends_a: tuple[str, str],
    graph_b: ContourGraph,
    ends_b: tuple[str, str],
    cap: int,
    w_pos: float,
    w_attr: float,
    forbidden_a: frozenset[str] = frozenset(),
    forbidden_b: frozenset[str] = frozenset(),
) -> PathPair:
    """Choose, over all simple-path pairs between the aligned ends, the pair
    whose best alignment has the highest summed node similarity."""
    paths_a = enumerate_simple_paths(graph_a, ends_a[0], ends_a[1], cap, forbidden_a)
    paths_b = enumerate_simple_paths(graph_b, ends_b[0], ends_b[1], cap, forbidden_b)
    if not paths_a or not paths_b:
        raise NoPathFound(f"no simple path between {ends_a} / {ends_b}")
    best: tuple[float, int, tuple, tuple] | None = None
    for pa in paths_a:
        for pb in paths_b:
            if len(pa) <= len(pb):
                score, _ = align_paths(graph_a, pa, graph_b, pb, w_pos, w_attr)
            else:
                score, _ = align_paths(graph_b, pb, graph_a, pa, w_pos, w_attr)
            key = (-score, len(pa) + len(pb), pa, pb)
            if best is None or key < best:
                best = key
    _, _, pa, pb = best
    return PathPair(tuple(pa), tuple(pb), -best[0])


def prune_paths(
    pair: PathPair,
    graph_a: ContourGraph,
    graph_b: ContourGraph,
    w_pos: float = 0.7,
    w_attr: float = 0.3,
) -> PruneResult:
    """Use the shorter of the two aligned paths as the surviving template.

    Nodes of the longer path that the alignment leaves unmatched are
    reported for deletion; matched nodes map onto their template partners.
    """
    if len(pair.path_a) <= len(pair.path_b):
        template_side = "a"
        short_g, short_p = graph_a, pair.path_a
        long_g, long_p = graph_b, pair.path_b
    else:
        template_side = "b"
        short_g, short_p = graph_b, pair.path_b
        long_g, long_p = graph_a, pair.path_a
    _, mapping = align_paths(short_g, short_p, long_g, long_p, w_pos, w_attr)
    correspondence = {long_p[j]: short_p[i] for i, j in mapping}
    matched_long = {long_p[j] for _, j in mapping}
    removed = tuple(nid for nid in long_p if nid not in matched_long)
    return PruneResult(template_side, tuple(short_p), correspondence, removed)
