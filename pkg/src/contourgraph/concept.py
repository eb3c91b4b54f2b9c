"""Concept graphs: per-class prototypes built by iterative reduction.

A concept starts as a copy of its first sample with every numeric attribute
lifted to a degenerate range.  Each further sample is folded in by a
five-stage merge:

1. start-point alignment - the sample anchor most similar to the concept's
   StartPoint becomes the sample's StartPoint for this merge;
2. critical-point pre-processing - unsupported endpoint branches are cut on
   both sides and near-coincident intersections consolidated;
3. traversal synchronization - critical points of both graphs are paired
   greedily in canonical traversal order by similarity;
4. common-structure identification - the paths between consecutive paired
   points are pruned to the shorter side's shape, deleting surplus concept
   nodes;
5. parametric merging - attributes of corresponding survivors merge into
   ranges (or vanish on categorical conflict), and the per-sample critical
   point tallies widen the concept's count ranges.

The fold is deliberately order-dependent; a fixed sample order always
produces the same concept.  Training one concept is sequential; distinct
concepts can be trained in parallel, and trained concepts are immutable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .errors import (
    AlignmentFailure,
    ContourGraphError,
    InvalidGraph,
    MalformedDocument,
    NoCommonStructure,
    NoPathFound,
    SchemaViolation,
)
from .graph_core import (
    FORMAT_VERSION,
    POINT,
    AttributeValue,
    ContourGraph,
    NodeRecord,
    PointKind,
    Range,
    Scalar,
    canonical_traversal,
    edge_key,
    from_document,
    natural_key,
    to_document,
    validate,
)
from .reduction import (
    endpoint_similarity,
    find_best_path_pair,
    merge_attr,
    merge_attr_maps,
    merge_intersections,
    point_similarity,
    prune_paths,
    remove_endpoint_branch,
)

logger = logging.getLogger(__name__)

LIBRARY_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ReductionSettings:
    """Knobs shared by pre-processing, pairing and pruning."""

    endpoint_sim_threshold: float = 0.5
    w_pos: float = 0.7
    w_attr: float = 0.3
    ip_merge_dist: float = 0.15
    max_simple_paths: int = 64


@dataclass(frozen=True)
class ConceptGraph:
    graph: ContourGraph
    label: str
    samples_absorbed: int


@dataclass
class ConceptLibrary:
    concepts: list[ConceptGraph]
    class_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.class_map:
            self.class_map = {c.label: class_of_label(c.label) for c in self.concepts}

    def labels(self) -> list[str]:
        return [c.label for c in self.concepts]

    def get(self, label: str) -> ConceptGraph:
        for c in self.concepts:
            if c.label == label:
                return c
        raise KeyError(label)


def class_of_label(label: str) -> str:
    """'2_1' names the first style of class '2'."""
    return label.rsplit("_", 1)[0] if "_" in label else label


# --- lifting -------------------------------------------------------------------

def _lift_value(v: AttributeValue) -> AttributeValue:
    if isinstance(v, Scalar):
        return Range(v.value, v.value, v.value, 1)
    return v


def _count_metadata(g: ContourGraph) -> dict[str, AttributeValue]:
    """Fall back to by-degree tallies when a hand-built graph lacks counts.

    The StartPoint is counted under the kind its degree implies, since it
    was promoted from an ordinary critical point.
    """
    counts = {"endpoint_counts": 0, "corner_point_counts": 0, "intersection_point_counts": 0}
    for nid, rec in g.nodes.items():
        if rec.kind != POINT:
            continue
        pk = rec.point_kind
        if pk == PointKind.START:
            deg = g.degree(nid)
            pk = PointKind.END if deg <= 1 else (
                PointKind.CORNER if deg == 2 else PointKind.INTERSECTION
            )
        if pk == PointKind.END:
            counts["endpoint_counts"] += 1
        elif pk == PointKind.CORNER:
            counts["corner_point_counts"] += 1
        elif pk == PointKind.INTERSECTION:
            counts["intersection_point_counts"] += 1
    return {name: Scalar(n) for name, n in counts.items()}


def _with_counts(g: ContourGraph) -> dict[str, AttributeValue]:
    meta = dict(g.metadata)
    for name, value in _count_metadata(g).items():
        meta.setdefault(name, value)
    return meta


def init_concept(g: ContourGraph, label: str) -> ConceptGraph:
    """C = first sample, scalars lifted to degenerate ranges."""
    report = validate(g)
    if not report.ok:
        raise InvalidGraph("; ".join(report.violations))
    nodes = {
        nid: rec.with_attrs({n: _lift_value(v) for n, v in rec.attrs.items()})
        for nid, rec in g.nodes.items()
    }
    metadata = {n: _lift_value(v) for n, v in _with_counts(g).items()}
    return ConceptGraph(ContourGraph(nodes, g.edges, metadata), label, 1)


# --- the five merge stages -------------------------------------------------------

def _align_start_point(
    concept_graph: ContourGraph, sample: ContourGraph, st: ReductionSettings
) -> ContourGraph:
    c_sp = concept_graph.start_point()
    g_sp = sample.start_point()
    if c_sp is None or g_sp is None:
        raise AlignmentFailure("both graphs need a StartPoint to align")
    c_rec = concept_graph.nodes[c_sp]
    candidates = [
        nid
        for nid, rec in sample.nodes.items()
        if rec.kind == POINT and rec.point_kind in (PointKind.END, PointKind.START)
    ]
    if not candidates:
        candidates = sample.point_ids()
    scored = sorted(
        ((point_similarity(c_rec, sample.nodes[nid], st.w_pos, st.w_attr), nid) for nid in candidates),
        key=lambda t: (-t[0], natural_key(t[1])),
    )
    best_sim, best = scored[0]
    if best_sim < st.endpoint_sim_threshold:
        raise AlignmentFailure(
            f"best anchor similarity {best_sim:.3f} below threshold {st.endpoint_sim_threshold}"
        )
    if best == g_sp:
        return sample
    nodes = dict(sample.nodes)
    old = nodes[g_sp]
    deg = sample.degree(g_sp)
    old_kind = PointKind.END if deg <= 1 else (
        PointKind.CORNER if deg == 2 else PointKind.INTERSECTION
    )
    nodes[g_sp] = old.with_point_kind(old_kind)
    nodes[best] = nodes[best].with_point_kind(PointKind.START)
    return ContourGraph(nodes, sample.edges, sample.metadata)


def _match_endpoints(
    concept_graph: ContourGraph, sample: ContourGraph, st: ReductionSettings
) -> tuple[list[str], list[str]]:
    """Greedy one-to-one endpoint matching, best similarity first.

    Returns the endpoints left without a partner at or above the threshold
    on each side; those are the unsupported (noise) branches.
    """
    sim = endpoint_similarity(concept_graph, sample, st.w_pos, st.w_attr)
    entries = []
    for i, cid in enumerate(sim.concept_ids):
        for j, gid in enumerate(sim.sample_ids):
            entries.append((-float(sim.values[i, j]), natural_key(cid), natural_key(gid), cid, gid))
    entries.sort()
    taken_c: set[str] = set()
    taken_g: set[str] = set()
    for neg_sim, _, _, cid, gid in entries:
        if -neg_sim < st.endpoint_sim_threshold:
            break
        if cid in taken_c or gid in taken_g:
            continue
        taken_c.add(cid)
        taken_g.add(gid)
    loose_c = [cid for cid in sim.concept_ids if cid not in taken_c]
    loose_g = [gid for gid in sim.sample_ids if gid not in taken_g]
    return loose_c, loose_g


def _preprocess(
    concept_graph: ContourGraph, sample: ContourGraph, st: ReductionSettings
) -> tuple[ContourGraph, ContourGraph]:
    loose_c, loose_g = _match_endpoints(concept_graph, sample, st)
    cg, gg = concept_graph, sample
    for eid in loose_c:
        rec = cg.nodes.get(eid)
        if rec is not None and rec.point_kind == PointKind.END:
            cg = remove_endpoint_branch(cg, eid)
    for eid in loose_g:
        rec = gg.nodes.get(eid)
        if rec is not None and rec.point_kind == PointKind.END:
            gg = remove_endpoint_branch(gg, eid)
    cg = merge_intersections(cg, st.ip_merge_dist)
    gg = merge_intersections(gg, st.ip_merge_dist)
    return cg, gg


def _pair_critical_points(
    concept_graph: ContourGraph, sample: ContourGraph, st: ReductionSettings
) -> list[tuple[str, str]]:
    """Greedy order-preserving pairing of critical points by similarity.

    Walking both graphs in canonical traversal order, every concept point
    takes the most similar not-yet-passed sample point at or above the
    threshold; points that find no partner stay unpaired and are tolerated.
    """
    c_points = [nid for nid in canonical_traversal(concept_graph) if concept_graph.nodes[nid].kind == POINT]
    g_points = [nid for nid in canonical_traversal(sample) if sample.nodes[nid].kind == POINT]
    pairs = [(c_points[0], g_points[0])]  # both traversals begin at the StartPoint
    j = 1
    for cid in c_points[1:]:
        c_rec = concept_graph.nodes[cid]
        best_k = -1
        best_sim = st.endpoint_sim_threshold
        for k in range(j, len(g_points)):
            sim = point_similarity(c_rec, sample.nodes[g_points[k]], st.w_pos, st.w_attr)
            if sim > best_sim or (best_k < 0 and sim == best_sim):
                best_k = k
                best_sim = sim
        if best_k >= 0:
            pairs.append((cid, g_points[best_k]))
            j = best_k + 1
    return pairs


def _section_edges(path: tuple[str, ...]) -> set[tuple[str, str]]:
    return {edge_key(path[t], path[t + 1]) for t in range(len(path) - 1)}


def _prune_sections(
    concept_graph: ContourGraph,
    sample: ContourGraph,
    pairs: list[tuple[str, str]],
    st: ReductionSettings,
) -> tuple[ContourGraph, dict[str, str]]:
    """Stage 4: even out the paths between consecutive paired points.

    Returns the (possibly pruned) concept graph plus the node-for-node
    correspondence concept-id -> sample-id used for parametric merging.
    Sections whose pruning would tear off side branches are left structurally
    intact; their matched nodes still merge parameters.
    """
    correspondence: dict[str, str] = dict(pairs)
    anchors_c = {c for c, _ in pairs}
    anchors_g = {g for _, g in pairs}
    consumed: set[str] = set()
    cg = concept_graph
    for k in range(len(pairs) - 1):
        (ca, ga), (cb, gb) = pairs[k], pairs[k + 1]
        if ca == cb or ga == gb:
            continue
        forbidden_c = frozenset((anchors_c - {ca, cb}) | consumed)
        forbidden_g = frozenset(anchors_g - {ga, gb})
        try:
            pair = find_best_path_pair(
                cg, (ca, cb), sample, (ga, gb),
                st.max_simple_paths, st.w_pos, st.w_attr,
                forbidden_a=forbidden_c, forbidden_b=forbidden_g,
            )
        except NoPathFound:
            continue
        result = prune_paths(pair, cg, sample, st.w_pos, st.w_attr)
        if result.template_side == "a":
            # concept path is the template: no surgery, invert the mapping
            for g_nid, c_nid in result.correspondence.items():
                correspondence[c_nid] = g_nid
        else:
            for c_nid, g_nid in result.correspondence.items():
                correspondence[c_nid] = g_nid
            removed = set(result.removed)
            if removed:
                internal = _section_edges(pair.path_a)
                safe = all(
                    all(edge_key(nid, nbr) in internal for nbr in cg.neighbors(nid))
                    for nid in removed
                )
                if safe:
                    surviving = [nid for nid in pair.path_a if nid not in removed]
                    nodes = {nid: rec for nid, rec in cg.nodes.items() if nid not in removed}
                    edges = {
                        e for e in cg.edges
                        if e not in internal and e[0] not in removed and e[1] not in removed
                    }
                    for t in range(len(surviving) - 1):
                        edges.add(edge_key(surviving[t], surviving[t + 1]))
                    cg = ContourGraph(nodes, edges, cg.metadata)
        consumed |= set(pair.path_a[1:-1])
    if not cg.nodes:
        raise NoCommonStructure("pruning deleted the whole concept")
    return cg, correspondence


def _merge_parameters(
    concept_graph: ContourGraph,
    correspondence: dict[str, str],
    sample: ContourGraph,
    sample_metadata: dict[str, AttributeValue],
) -> ContourGraph:
    nodes: dict[str, NodeRecord] = {}
    for nid, rec in concept_graph.nodes.items():
        partner = correspondence.get(nid)
        if partner is not None and partner in sample.nodes:
            lifted = {n: _lift_value(v) for n, v in rec.attrs.items()}
            nodes[nid] = rec.with_attrs(merge_attr_maps(lifted, sample.nodes[partner].attrs))
        else:
            nodes[nid] = rec
    metadata: dict[str, AttributeValue] = {}
    for name in sorted(set(concept_graph.metadata) & set(sample_metadata)):
        merged = merge_attr(_lift_value(concept_graph.metadata[name]), sample_metadata[name])
        if merged is not None:
            metadata[name] = merged
    return ContourGraph(nodes, concept_graph.edges, metadata)


def merge_sample(
    concept: ConceptGraph, sample: ContourGraph, st: ReductionSettings | None = None
) -> ConceptGraph:
    """Fold one sample graph into a concept (the five stages in order)."""
    st = st or ReductionSettings()
    sample_meta = {n: v for n, v in _with_counts(sample).items()}
    aligned = _align_start_point(concept.graph, sample, st)
    cg, gg = _preprocess(concept.graph, aligned, st)
    pairs = _pair_critical_points(cg, gg, st)
    cg, correspondence = _prune_sections(cg, gg, pairs, st)
    merged = _merge_parameters(cg, correspondence, gg, sample_meta)
    report = validate(merged)
    if not report.ok:
        raise InvalidGraph("merge produced an invalid graph: " + "; ".join(report.violations))
    return ConceptGraph(merged, concept.label, concept.samples_absorbed + 1)


def train_concept(
    samples: list[ContourGraph], label: str, st: ReductionSettings | None = None
) -> ConceptGraph:
    """Left fold of merge_sample over the sample list (order matters).

    A sample that cannot be aligned or would erase the concept is skipped
    with a warning instead of aborting the fold.
    """
    if not samples:
        raise InvalidGraph(f"concept {label!r} needs at least one sample")
    st = st or ReductionSettings()
    concept = init_concept(samples[0], label)
    for index, g in enumerate(samples[1:], start=2):
        try:
            concept = merge_sample(concept, g, st)
        except (AlignmentFailure, NoCommonStructure) as exc:
            logger.warning("concept %s: sample %d skipped (%s)", label, index, exc)
        except ContourGraphError as exc:
            raise type(exc)(f"concept {label!r}, sample {index}: {exc}") from exc
    return concept


# --- persistence -----------------------------------------------------------------

def concept_to_document(concept: ConceptGraph) -> dict:
    return {
        "label": concept.label,
        "samples_absorbed": concept.samples_absorbed,
        "graph": to_document(concept.graph),
    }


def concept_from_document(doc: dict) -> ConceptGraph:
    try:
        return ConceptGraph(
            from_document(doc["graph"]), str(doc["label"]), int(doc["samples_absorbed"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"malformed concept entry: {exc}") from exc


def library_to_json(lib: ConceptLibrary) -> str:
    doc = {
        "format_version": LIBRARY_FORMAT_VERSION,
        "concepts": [
            concept_to_document(c)
            for c in sorted(lib.concepts, key=lambda c: natural_key(c.label))
        ],
        "class_map": {k: lib.class_map[k] for k in sorted(lib.class_map, key=natural_key)},
    }
    return json.dumps(doc, indent=2) + "\n"


def library_from_json(text: str) -> ConceptLibrary:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != LIBRARY_FORMAT_VERSION:
        raise SchemaViolation("unsupported library document")
    concepts = [concept_from_document(entry) for entry in doc.get("concepts", [])]
    labels = [c.label for c in concepts]
    if len(set(labels)) != len(labels):
        raise SchemaViolation("duplicate concept labels in library")
    class_map = {str(k): str(v) for k, v in doc.get("class_map", {}).items()}
    return ConceptLibrary(concepts, class_map)


def save_library(lib: ConceptLibrary, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(library_to_json(lib))


def load_library(path) -> ConceptLibrary:
    with open(path, "r", encoding="utf-8") as fh:
        return library_from_json(fh.read())
