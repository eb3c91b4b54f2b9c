"""Winner-takes-all classification against a concept library.

The test graph is compared with every concept; the smallest edit distance
wins.  Exact distance ties go to the structurally more complex concept
(nodes plus edges), and any residual tie falls back to lexicographic label
order.  The report keeps the full per-concept evidence: every distance,
the winning edit path, which attributes matched inside their learned
ranges, and what the distance was actually spent on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .concept import ConceptGraph, ConceptLibrary
from .errors import EmptyLibrary
from .ged import CostConfig, GedResult, ged_search
from .ged import CATEGORICAL_ATTR_ORDER, NUMERIC_ATTR_ORDER
from .graph_core import (
    ContourGraph,
    PointKind,
    numeric_bounds,
    numeric_value,
    structural_complexity,
)


@dataclass(frozen=True)
class AttributeMatch:
    test_node: str
    concept_node: str
    attribute: str


@dataclass(frozen=True)
class CostItem:
    description: str
    cost: float


@dataclass(frozen=True)
class Explanation:
    concept_label: str
    node_count: int
    edge_count: int
    endpoint_count: int
    corner_count: int
    intersection_count: int
    start_count: int
    has_cycle: bool
    in_range: tuple[AttributeMatch, ...]
    cost_items: tuple[CostItem, ...]

    def to_json_dict(self) -> dict:
        return {
            "concept_label": self.concept_label,
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "critical_points": {
                "EndPoint": self.endpoint_count,
                "CornerPoint": self.corner_count,
                "IntersectionPoint": self.intersection_count,
                "StartPoint": self.start_count,
            },
            "has_cycle": self.has_cycle,
            "in_range": [vars(m) | {} for m in self.in_range],
            "cost_items": [{"description": c.description, "cost": c.cost} for c in self.cost_items],
        }


@dataclass(frozen=True)
class ClassificationReport:
    winner_label: str
    winner_class: str
    distances: dict[str, GedResult]
    tie_break_applied: bool
    tie_labels: tuple[str, ...]
    explanation: Explanation

    def to_json_dict(self) -> dict:
        return {
            "winner_label": self.winner_label,
            "winner_class": self.winner_class,
            "distances": {
                label: result.to_json_dict() for label, result in self.distances.items()
            },
            "tie_break_applied": self.tie_break_applied,
            "tie_labels": list(self.tie_labels),
            "explanation": self.explanation.to_json_dict(),
        }


def _attr_costs(test_rec, concept_rec, cfg: CostConfig):
    """Per-attribute breakdown of one substitution: (name, cost) pairs."""
    items = []
    for name in NUMERIC_ATTR_ORDER:
        in_u, in_v = name in test_rec.attrs, name in concept_rec.attrs
        if in_u and in_v:
            val = numeric_value(test_rec.attrs[name])
            lo, hi = numeric_bounds(concept_rec.attrs[name])
            dev = lo - val if val < lo else (val - hi if val > hi else 0.0)
            items.append((name, cfg.weight(name) * dev))
        elif in_u or in_v:
            items.append((name, cfg.weight(name) * cfg.presence_penalty))
    for name in CATEGORICAL_ATTR_ORDER:
        a = test_rec.attrs.get(name)
        b = concept_rec.attrs.get(name)
        if a is not None and b is not None:
            items.append((name, 0.0 if a.label == b.label else cfg.infinity))
        elif a is not None or b is not None:
            items.append((name, cfg.weight(name) * cfg.presence_penalty))
    return items


def _build_explanation(
    g: ContourGraph, concept: ConceptGraph, result: GedResult, cfg: CostConfig
) -> Explanation:
    cg = concept.graph
    in_range: list[AttributeMatch] = []
    cost_items: list[CostItem] = []
    for op in result.edit_path:
        if op.op == "substitute-node":
            u = g.nodes[op.source]
            v = cg.nodes[op.target]
            for name, cost in _attr_costs(u, v, cfg):
                if cost == 0.0 and name in u.attrs and name in v.attrs:
                    in_range.append(AttributeMatch(op.source, op.target, name))
                elif cost > 0.0:
                    cost_items.append(
                        CostItem(f"{name} on {op.source}->{op.target} outside range", cost)
                    )
        elif op.cost > 0.0:
            where = op.source if op.source is not None else op.target
            cost_items.append(CostItem(f"{op.op} {where}", op.cost))
    cost_items.sort(key=lambda c: (-c.cost, c.description))
    return Explanation(
        concept_label=concept.label,
        node_count=len(cg.nodes),
        edge_count=len(cg.edges),
        endpoint_count=len(cg.points_of_kind(PointKind.END)),
        corner_count=len(cg.points_of_kind(PointKind.CORNER)),
        intersection_count=len(cg.points_of_kind(PointKind.INTERSECTION)),
        start_count=len(cg.points_of_kind(PointKind.START)),
        has_cycle=len(cg.edges) >= len(cg.nodes) and len(cg.nodes) > 0,
        in_range=tuple(in_range),
        cost_items=tuple(cost_items[:3]),
    )


def classify(
    g: ContourGraph,
    library: ConceptLibrary,
    cfg: CostConfig | None = None,
    budget: float = 60.0,
) -> ClassificationReport:
    """Compare the test graph with every concept and pick the closest.

    Each comparison gets its own wall-clock budget (seconds).  Ties on exact
    distance go to the concept with the larger structural complexity, then
    to the lexicographically smaller label.
    """
    cfg = cfg or CostConfig()
    if not library.concepts:
        raise EmptyLibrary("cannot classify against an empty library")
    distances: dict[str, GedResult] = {}
    for concept in library.concepts:
        distances[concept.label] = ged_search(g, concept.graph, cfg, budget)
    minimum = min(r.distance for r in distances.values())
    tied = sorted(label for label, r in distances.items() if r.distance == minimum)
    tie_break = len(tied) > 1
    if tie_break:
        by_complexity = sorted(
            tied,
            key=lambda label: (-structural_complexity(library.get(label).graph), label),
        )
        winner = by_complexity[0]
    else:
        winner = tied[0]
    concept = library.get(winner)
    explanation = _build_explanation(g, concept, distances[winner], cfg)
    return ClassificationReport(
        winner_label=winner,
        winner_class=library.class_map.get(winner, winner),
        distances=distances,
        tie_break_applied=tie_break,
        tie_labels=tuple(tied) if tie_break else (),
        explanation=explanation,
    )


def _plural(n: int, noun: str) -> str:
    return f"{n} {noun}" + ("" if n == 1 else "s")


def explain(report: ClassificationReport) -> str:
    """Human-readable account of a classification decision."""
    ex = report.explanation
    result = report.distances[report.winner_label]
    lines = [
        f"winner: {report.winner_label} (class {report.winner_class}), "
        f"distance {result.distance:.4f}" + ("" if result.exact else " (budget-limited)"),
    ]
    ip_part = _plural(ex.intersection_count, "IntersectionPoint")
    if ex.has_cycle and ex.intersection_count > 0:
        ip_part += " (cycle)"
    lines.append(
        f"concept signature: {ex.node_count} nodes, {ex.edge_count} edges; "
        + ", ".join(
            [
                ip_part,
                _plural(ex.endpoint_count, "EndPoint"),
                _plural(ex.corner_count, "CornerPoint"),
                _plural(ex.start_count, "StartPoint"),
            ]
        )
    )
    if report.tie_break_applied:
        lines.append(
            "tie on distance between "
            + ", ".join(report.tie_labels)
            + "; broken by structural complexity (nodes + edges)"
        )
    if not ex.cost_items:
        lines.append("all attributes in range")
    else:
        if ex.in_range:
            matched = ", ".join(
                f"{m.attribute} ({m.test_node}->{m.concept_node})" for m in ex.in_range[:6]
            )
            lines.append(f"in-range evidence: {matched}")
        lines.append(
            "top cost contributors: "
            + "; ".join(f"{c.description} ({c.cost:.3f})" for c in ex.cost_items)
        )
    return "\n".join(lines) + "\n"
