"""Shared test fixtures and graph builders."""

from __future__ import annotations

import numpy as np
import pytest

from contourgraph.graph_core import (
    Category,
    ContourGraph,
    PointKind,
    Scalar,
    line_node,
    point_node,
)


def path_graph(coords, with_corner_angles=False, length=1.0):
    """Alternating path SP - L - P - L - ... - EP through the given
    normalized (x, y) point coordinates."""
    nodes = []
    edges = []
    n = len(coords)
    for i, (x, y) in enumerate(coords):
        if i == 0:
            kind = PointKind.START
        elif i == n - 1:
            kind = PointKind.END
        else:
            kind = PointKind.CORNER
        attrs = {"normalized_x": Scalar(x), "normalized_y": Scalar(y)}
        if kind == PointKind.CORNER and with_corner_angles:
            attrs["angle"] = Scalar(90.0)
        nodes.append(point_node(f"p{i}", kind, **attrs))
    for i in range(n - 1):
        (x0, y0), (x1, y1) = coords[i], coords[i + 1]
        nodes.append(
            line_node(
                f"s{i}",
                length=Scalar(length),
                normalized_mid_x=Scalar((x0 + x1) / 2),
                normalized_mid_y=Scalar((y0 + y1) / 2),
            )
        )
        edges.append((f"p{i}", f"s{i}"))
        edges.append((f"s{i}", f"p{i+1}"))
    return ContourGraph(nodes, edges)


def stroke_graph():
    """The canonical 3-node stroke: SP - L - EP."""
    return path_graph([(0.0, -1.0), (0.0, 1.0)], length=2.0)


def y_graph(quadrants=("1", "2")):
    """A Y: stem SP - L0 - IP with two arms, each IP - L - EP.

    Arm lines carry the given quadrant labels so traversal order is
    controllable.
    """
    nodes = [
        point_node("p0", PointKind.START, normalized_x=Scalar(0.0), normalized_y=Scalar(-1.0)),
        point_node("p1", PointKind.INTERSECTION, normalized_x=Scalar(0.0), normalized_y=Scalar(0.0)),
        point_node("p2", PointKind.END, normalized_x=Scalar(0.8), normalized_y=Scalar(1.0)),
        point_node("p3", PointKind.END, normalized_x=Scalar(-0.8), normalized_y=Scalar(1.0)),
        line_node("s0", length=Scalar(1.0), normalized_mid_x=Scalar(0.0), normalized_mid_y=Scalar(-0.5)),
        line_node(
            "s1",
            length=Scalar(1.2),
            normalized_mid_x=Scalar(0.4),
            normalized_mid_y=Scalar(0.5),
            quadrant=Category(quadrants[0]),
        ),
        line_node(
            "s2",
            length=Scalar(1.2),
            normalized_mid_x=Scalar(-0.4),
            normalized_mid_y=Scalar(0.5),
            quadrant=Category(quadrants[1]),
        ),
    ]
    edges = [("p0", "s0"), ("s0", "p1"), ("p1", "s1"), ("s1", "p2"), ("p1", "s2"), ("s2", "p3")]
    return ContourGraph(nodes, edges)


def six_graph():
    """A '6'-like shape: stem into a loop; 10 nodes, 10 edges.

    Points: SP (stem top), IP (loop closure), 3 corners around the loop.
    """
    pts = [
        ("p0", PointKind.START, (0.4, -1.0)),
        ("p1", PointKind.INTERSECTION, (-0.4, 0.0)),
        ("p2", PointKind.CORNER, (-1.0, 0.7)),
        ("p3", PointKind.CORNER, (0.2, 1.0)),
        ("p4", PointKind.CORNER, (1.0, 0.5)),
    ]
    nodes = [
        point_node(nid, kind, normalized_x=Scalar(x), normalized_y=Scalar(y))
        for nid, kind, (x, y) in pts
    ]
    segs = [
        ("s0", "p0", "p1"),
        ("s1", "p1", "p2"),
        ("s2", "p2", "p3"),
        ("s3", "p3", "p4"),
        ("s4", "p4", "p1"),
    ]
    edges = []
    for sid, a, b in segs:
        ax, ay = next(p[2] for p in pts if p[0] == a)
        bx, by = next(p[2] for p in pts if p[0] == b)
        nodes.append(
            line_node(
                sid,
                length=Scalar(1.0),
                normalized_mid_x=Scalar((ax + bx) / 2),
                normalized_mid_y=Scalar((ay + by) / 2),
            )
        )
        edges.append((a, sid))
        edges.append((sid, b))
    return ContourGraph(nodes, edges)


def nine_graph():
    """A '9'-like shape: loop on top, tail below; 8 nodes, 8 edges,
    2 corners + 1 intersection + 1 start, no endpoints."""
    pts = [
        ("p0", PointKind.START, (0.2, 1.0)),
        ("p1", PointKind.INTERSECTION, (0.6, -0.2)),
        ("p2", PointKind.CORNER, (-0.2, -1.0)),
        ("p3", PointKind.CORNER, (-0.8, -0.3)),
    ]
    nodes = [
        point_node(nid, kind, normalized_x=Scalar(x), normalized_y=Scalar(y))
        for nid, kind, (x, y) in pts
    ]
    segs = [("s0", "p0", "p1"), ("s1", "p1", "p2"), ("s2", "p2", "p3"), ("s3", "p3", "p1")]
    edges = []
    for sid, a, b in segs:
        ax, ay = next(p[2] for p in pts if p[0] == a)
        bx, by = next(p[2] for p in pts if p[0] == b)
        nodes.append(
            line_node(
                sid,
                length=Scalar(1.0),
                normalized_mid_x=Scalar((ax + bx) / 2),
                normalized_mid_y=Scalar((ay + by) / 2),
            )
        )
        edges.append((a, sid))
        edges.append((sid, b))
    return ContourGraph(nodes, edges)


def random_valid_graph(rng: np.random.Generator, max_points: int = 3) -> ContourGraph:
    """Small random valid contour graph on a 0.25 coordinate grid.

    Shapes: single StartPoint, 2..3-point paths, a 2-node self loop, or a
    lollipop.  Used to feed the edit-distance oracle, so node totals stay
    small.
    """
    def coord():
        return float(rng.integers(-4, 5)) * 0.25

    def pattrs():
        return {"normalized_x": Scalar(coord()), "normalized_y": Scalar(coord())}

    def lattrs():
        attrs = {
            "length": Scalar(float(rng.integers(1, 9)) * 0.25),
            "normalized_mid_x": Scalar(coord()),
            "normalized_mid_y": Scalar(coord()),
        }
        if rng.random() < 0.5:
            attrs["quadrant"] = Category(str(rng.integers(1, 5)))
        if rng.random() < 0.3:
            attrs["horizontal_direction"] = Category(str(rng.choice(["Left", "Right", "None"])))
        return attrs

    shape = rng.choice(["single", "path2", "path3", "loop", "lollipop"])
    if shape == "single":
        return ContourGraph([point_node("p0", PointKind.START, **pattrs())], [])
    if shape == "loop":
        nodes = [
            point_node("p0", PointKind.START, **pattrs()),
            line_node("s0", **lattrs()),
        ]
        return ContourGraph(nodes, [("p0", "s0")])
    if shape == "lollipop":
        nodes = [
            point_node("p0", PointKind.START, **pattrs()),
            point_node("p1", PointKind.CORNER, **pattrs()),
            line_node("s0", **lattrs()),
            line_node("s1", **lattrs()),
        ]
        return ContourGraph(nodes, [("p0", "s0"), ("s0", "p1"), ("p1", "s1")])
    n = 2 if shape == "path2" else 3
    coords = [(coord(), coord()) for _ in range(n)]
    nodes = []
    edges = []
    for i, (x, y) in enumerate(coords):
        kind = PointKind.START if i == 0 else (PointKind.END if i == n - 1 else PointKind.CORNER)
        attrs = {"normalized_x": Scalar(x), "normalized_y": Scalar(y)}
        if kind == PointKind.CORNER and rng.random() < 0.5:
            attrs["angle"] = Scalar(float(rng.integers(30, 150)))
        nodes.append(point_node(f"p{i}", kind, **attrs))
    for i in range(n - 1):
        nodes.append(line_node(f"s{i}", **lattrs()))
        edges.append((f"p{i}", f"s{i}"))
        edges.append((f"s{i}", f"p{i+1}"))
    return ContourGraph(nodes, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
