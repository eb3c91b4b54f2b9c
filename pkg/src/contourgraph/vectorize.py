"""Raster-to-graph pipeline.

A grayscale image is binarized, thinned to a one-pixel skeleton, decomposed
into critical points (stroke ends, junctions, corners) and the polylines
between them, and assembled into a bipartite contour graph whose
coordinates are normalized to [-1, 1].

Pixel positions are (row, col); geometric attributes use x = col, y = row,
so y grows downward as usual for images.  All steps are pure functions of
their inputs and are safe to run concurrently on different images.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateBounds, DisconnectedGraph, EmptyImage, ZeroVector
from .graph_core import (
    LINE,
    POINT,
    Category,
    ContourGraph,
    NodeRecord,
    PointKind,
    Scalar,
    natural_key,
    numeric_value,
    validate,
)

# Walk priority: 4-neighbors before diagonals, each group scanned top-left first.
_NEIGH_ORDER = ((-1, 0), (0, -1), (0, 1), (1, 0), (-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class RawCriticalPoint:
    """A skeleton pixel (or consolidated pixel cluster) of structural interest."""

    x: float
    y: float
    kind: str  # "endpoint" | "junction" | "corner"
    angle: float | None = None
    pixels: frozenset = frozenset()

    def pixel(self) -> tuple[int, int]:
        return (int(self.y), int(self.x))


def binarize(image: np.ndarray, threshold: float) -> np.ndarray:
    """Threshold a grayscale raster: a pixel is on iff
    intensity >= threshold * maximum representable intensity."""
    arr = np.asarray(image)
    if arr.size == 0:
        raise EmptyImage("cannot binarize an empty image")
    if np.issubdtype(arr.dtype, np.floating):
        max_intensity = 1.0
    else:
        max_intensity = float(np.iinfo(arr.dtype).max)
    return arr.astype(np.float64) >= threshold * max_intensity


def skeletonize(bitmap: np.ndarray) -> np.ndarray:
    """Thin a binary bitmap to a 1-pixel-wide 8-connected skeleton.

    Two-subiteration thinning runs to a fixed point, then redundant
    staircase pixels (pixels whose on-neighbors stay one 8-connected blob
    without them) are peeled off in deterministic scan order; the whole
    procedure loops until nothing changes, so it is idempotent.
    """
    b = np.asarray(bitmap).astype(bool)
    if b.size == 0 or not b.any():
        return b.copy()
    current = _kernels.thin(b)
    while True:
        simplified = _remove_redundant_pixels(current)
        if simplified is current:
            return current
        current = _kernels.thin(simplified)
        if current.tobytes() == simplified.tobytes():
            return current


def _remove_redundant_pixels(skel: np.ndarray) -> np.ndarray:
    """Peel pixels that only thicken the skeleton.

    A pixel with two or three on-neighbors that already form a single
    8-connected blob contributes nothing to connectivity (the classic
    staircase leftover of two-subiteration thinning); removing them in
    row-major order until a fixed point keeps the result deterministic.
    Returns the input object itself when nothing was removed.
    """
    img = skel.copy()
    h, w = img.shape
    removed_any = False
    changed = True
    while changed:
        changed = False
        for r, c in np.argwhere(img):
            nbrs = []
            for dr, dc in _NEIGH_ORDER:
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w and img[rr, cc]:
                    nbrs.append((rr, cc))
            if not 2 <= len(nbrs) <= 3:
                # degree-1 pixels are stroke ends; higher degrees are
                # junction centers, which must stay put
                continue
            # count 8-connected components among the neighbors
            seen: set[tuple[int, int]] = set()
            components = 0
            for p in nbrs:
                if p in seen:
                    continue
                components += 1
                stack = [p]
                seen.add(p)
                while stack:
                    qr, qc = stack.pop()
                    for q in nbrs:
                        if q not in seen and max(abs(q[0] - qr), abs(q[1] - qc)) == 1:
                            seen.add(q)
                            stack.append(q)
            if components == 1:
                img[r, c] = False
                changed = True
                removed_any = True
    return img if removed_any else skel


def _neighbor_counts(skel: np.ndarray) -> np.ndarray:
    img = np.pad(skel.astype(np.uint8), 1)
    total = np.zeros_like(img[1:-1, 1:-1], dtype=np.uint8)
    for dr, dc in _NEIGH_ORDER:
        total += img[1 + dr : img.shape[0] - 1 + dr, 1 + dc : img.shape[1] - 1 + dc]
    return total


def extract_critical_points(skel: np.ndarray) -> list[RawCriticalPoint]:
    """Find stroke endpoints and junctions on a thinned bitmap.

    A pixel with at most one on-neighbor is an endpoint; pixels with three
    or more are junction pixels, and adjacent junction pixels are
    consolidated into a single critical point near their centroid (thinning
    tends to smear junctions over a couple of pixels).  Corners are detected
    later, on traced polylines.
    """
    skel = np.asarray(skel).astype(bool)
    counts = _neighbor_counts(skel)
    criticals: list[RawCriticalPoint] = []

    end_px = sorted(map(tuple, np.argwhere(skel & (counts <= 1))))
    for r, c in end_px:
        criticals.append(
            RawCriticalPoint(x=float(c), y=float(r), kind="endpoint", pixels=frozenset([(r, c)]))
        )

    junction_mask = skel & (counts >= 3)
    seen: set[tuple[int, int]] = set()
    clusters: list[list[tuple[int, int]]] = []
    for r, c in sorted(map(tuple, np.argwhere(junction_mask))):
        if (r, c) in seen:
            continue
        comp = [(r, c)]
        seen.add((r, c))
        stack = [(r, c)]
        while stack:
            pr, pc = stack.pop()
            for dr, dc in _NEIGH_ORDER:
                q = (pr + dr, pc + dc)
                if (
                    0 <= q[0] < skel.shape[0]
                    and 0 <= q[1] < skel.shape[1]
                    and junction_mask[q]
                    and q not in seen
                ):
                    seen.add(q)
                    comp.append(q)
                    stack.append(q)
        clusters.append(sorted(comp))
    for comp in clusters:
        cy = sum(p[0] for p in comp) / len(comp)
        cx = sum(p[1] for p in comp) / len(comp)
        rep = min(comp, key=lambda p: ((p[0] - cy) ** 2 + (p[1] - cx) ** 2, p))
        criticals.append(
            RawCriticalPoint(x=float(rep[1]), y=float(rep[0]), kind="junction", pixels=frozenset(comp))
        )
    return criticals


def _cluster_path(pixels: frozenset, src: tuple[int, int], dst: tuple[int, int]) -> list[tuple[int, int]]:
    """Deterministic shortest pixel path between two pixels of one cluster."""
    if src == dst:
        return [src]
    prev: dict[tuple[int, int], tuple[int, int]] = {src: src}
    queue = [src]
    while queue:
        cur = queue.pop(0)
        if cur == dst:
            break
        for dr, dc in _NEIGH_ORDER:
            q = (cur[0] + dr, cur[1] + dc)
            if q in pixels and q not in prev:
                prev[q] = cur
                queue.append(q)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def trace_segments(skel: np.ndarray, criticals: list[RawCriticalPoint]) -> list[list[tuple[int, int]]]:
    """Partition skeleton pixels into polylines between critical points.

    Every polyline terminates at critical points; when a connected component
    has none (a closed ring), a single closed polyline is produced, anchored
    at the ring's lexicographically smallest pixel.  The union of the
    returned polylines covers every skeleton pixel, and interiors of
    distinct polylines are disjoint.
    """
    skel = np.asarray(skel).astype(bool)
    on: set[tuple[int, int]] = set(map(tuple, np.argwhere(skel)))
    pix_to_crit: dict[tuple[int, int], int] = {}
    for idx, crit in enumerate(criticals):
        for px in crit.pixels:
            pix_to_crit[px] = idx

    consumed: set[tuple[int, int]] = set()
    used_pairs: set[frozenset] = set()
    polylines: list[list[tuple[int, int]]] = []

    def on_neighbors(p):
        for dr, dc in _NEIGH_ORDER:
            q = (p[0] + dr, p[1] + dc)
            if q in on:
                yield q

    for idx, crit in enumerate(criticals):
        rep = crit.pixel()
        for cp in sorted(crit.pixels):
            for q in on_neighbors(cp):
                if q in crit.pixels:
                    continue
                if q in pix_to_crit:
                    pair = frozenset((cp, q))
                    if pair in used_pairs:
                        continue
                    used_pairs.add(pair)
                    other = criticals[pix_to_crit[q]]
                    poly = _cluster_path(crit.pixels, rep, cp)
                    poly += _cluster_path(other.pixels, q, other.pixel())
                    polylines.append(poly)
                    continue
                if q in consumed:
                    continue
                interior = [q]
                consumed.add(q)
                prev, cur = cp, q
                end_entry = None
                while True:
                    stop = None
                    nxt = None
                    for cand in on_neighbors(cur):
                        if cand == prev or cand in interior:
                            continue
                        if cand in pix_to_crit:
                            stop = cand
                            break
                        if nxt is None and cand not in consumed:
                            nxt = cand
                    if stop is not None:
                        end_entry = stop
                        break
                    if nxt is None:
                        break
                    interior.append(nxt)
                    consumed.add(nxt)
                    prev, cur = cur, nxt
                poly = _cluster_path(crit.pixels, rep, cp) + interior
                if end_entry is not None:
                    other = criticals[pix_to_crit[end_entry]]
                    poly += _cluster_path(other.pixels, end_entry, other.pixel())
                polylines.append(poly)

    # Isolated critical points (lone dots) still own their pixel.
    covered_so_far = set()
    for poly in polylines:
        covered_so_far.update(poly)
    for crit in criticals:
        if not any(px in covered_so_far for px in crit.pixels):
            polylines.append([crit.pixel()])

    # Closed rings: components that touch no critical point at all.
    leftover = on - consumed - set(pix_to_crit)
    covered = set()
    for poly in polylines:
        covered.update(poly)
    leftover -= covered
    while leftover:
        anchor = min(leftover)
        ring = [anchor]
        ringset = {anchor}
        prev, cur = None, anchor
        while True:
            step = None
            for cand in on_neighbors(cur):
                if cand == prev or (cand in ringset and cand != anchor):
                    continue
                if cand in leftover or cand == anchor:
                    step = cand
                    break
            if step is None or step == anchor:
                break
            ring.append(step)
            ringset.add(step)
            prev, cur = cur, step
        ring.append(anchor)
        polylines.append(ring)
        leftover -= ringset

    # Cluster pixels can escape every walk in dense junction blobs; splice
    # each one into an adjacent polyline as a zero-area detour so pixel
    # conservation holds exactly.
    covered = set()
    for poly in polylines:
        covered.update(poly)
    for u in sorted(on - covered):
        for poly in polylines:
            spliced = False
            for k, p in enumerate(poly):
                if max(abs(p[0] - u[0]), abs(p[1] - u[1])) == 1:
                    poly[k + 1 : k + 1] = [u, p]
                    spliced = True
                    break
            if spliced:
                break
    return polylines


def detect_corners(
    polyline: list[tuple[int, int]], angle_threshold: float, window: int = 2
) -> tuple[list[list[tuple[int, int]]], list[RawCriticalPoint]]:
    """Split a polyline where its turning angle exceeds the threshold.

    The turning angle is measured between the chords entering and leaving a
    sliding window of 2*window+1 pixels; runs of above-threshold pixels are
    reduced to their sharpest pixel.  Each detected corner records the
    interior angle (180 minus the turning angle) for the `angle` attribute.
    """
    n = len(polyline)
    if n < 2 * window + 1:
        return [list(polyline)], []
    pts = np.array([(c, r) for r, c in polyline], dtype=np.float64)
    turning = np.zeros(n)
    for i in range(window, n - window):
        a = pts[i] - pts[i - window]
        b = pts[i + window] - pts[i]
        na, nb = np.hypot(*a), np.hypot(*b)
        if na == 0 or nb == 0:
            continue
        cosang = float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))
        turning[i] = math.degrees(math.acos(cosang))
    above = turning > angle_threshold
    corner_idx: list[int] = []
    i = window
    while i < n - window:
        if above[i]:
            j = i
            while j + 1 < n - window and above[j + 1]:
                j += 1
            run = range(i, j + 1)
            best = max(run, key=lambda k: (turning[k], -k))
            corner_idx.append(best)
            i = j + 1
        else:
            i += 1
    corners = [
        RawCriticalPoint(
            x=float(polyline[k][1]),
            y=float(polyline[k][0]),
            kind="corner",
            angle=180.0 - turning[k],
            pixels=frozenset([polyline[k]]),
        )
        for k in corner_idx
    ]
    pieces = _split_at(polyline, corner_idx)
    return pieces, corners


def _split_at(polyline, indices):
    if not indices:
        return [list(polyline)]
    cuts = [0] + sorted(indices) + [len(polyline) - 1]
    return [list(polyline[cuts[k] : cuts[k + 1] + 1]) for k in range(len(cuts) - 1)]


def _arclengths(polyline) -> np.ndarray:
    pts = np.array(polyline, dtype=np.float64)
    steps = np.hypot(*(pts[1:] - pts[:-1]).T)
    return np.concatenate([[0.0], np.cumsum(steps)])


def _force_split(polyline):
    """Break a corner-free closed polyline at its half-arclength pixel."""
    cum = _arclengths(polyline)
    half = cum[-1] / 2.0
    k = int(np.argmin(np.abs(cum - half)))
    k = min(max(k, 1), len(polyline) - 2)
    corner = RawCriticalPoint(
        x=float(polyline[k][1]), y=float(polyline[k][0]), kind="corner",
        pixels=frozenset([polyline[k]]),
    )
    return _split_at(polyline, [k]), [corner]


def _snap_axis(vector: tuple[float, float], band: float = 0.25) -> tuple[float, float]:
    """Zero a chord component that is tiny relative to the chord length.

    Chord directions of near-axis segments otherwise flip their discretized
    quadrant and direction labels under one-pixel jitter.
    """
    dx, dy = vector
    length = math.hypot(dx, dy)
    if length == 0:
        return vector
    if abs(dx) <= band * length:
        dx = 0.0
    elif abs(dy) <= band * length:
        dy = 0.0
    return (dx, dy)


def quadrant_of(vector: tuple[float, float]) -> int:
    """Discretize a direction vector into one of four quadrants by sign.

    Zero components count as positive, so axis-aligned vectors land on the
    positive side deterministically.  Image coordinates: y grows downward.
    """
    dx, dy = vector
    if dx == 0 and dy == 0:
        raise ZeroVector("cannot take the quadrant of a zero vector")
    if dx >= 0:
        return 1 if dy >= 0 else 4
    return 2 if dy >= 0 else 3


def directions_of(vector: tuple[float, float]) -> tuple[str, str]:
    dx, dy = vector
    if dx == 0 and dy == 0:
        raise ZeroVector("cannot take directions of a zero vector")
    horizontal = "Right" if dx > 0 else ("Left" if dx < 0 else "None")
    vertical = "Down" if dy > 0 else ("Up" if dy < 0 else "None")
    return horizontal, vertical


def build_graph(
    segments: list[list[tuple[int, int]]], criticals: list[RawCriticalPoint]
) -> ContourGraph:
    """Assemble Point and Line nodes from polylines and critical points.

    Each critical point becomes a Point node and each polyline a Line node
    linked to the Point nodes at its two ends.  Point kinds are then
    reclassified from their final degree, one StartPoint is promoted, and a
    disconnected result raises (it signals a skeletonization failure that
    callers record and skip).
    """
    crit_list = list(criticals)
    pix_to_idx: dict[tuple[int, int], int] = {}
    for idx, crit in enumerate(crit_list):
        for px in crit.pixels:
            pix_to_idx[px] = idx

    def entity_of(pixel: tuple[int, int]) -> int:
        if pixel not in pix_to_idx:
            # A closed ring's anchor pixel. Give it a point of its own.
            crit_list.append(
                RawCriticalPoint(
                    x=float(pixel[1]), y=float(pixel[0]), kind="corner",
                    pixels=frozenset([pixel]),
                )
            )
            pix_to_idx[pixel] = len(crit_list) - 1
        return pix_to_idx[pixel]

    segments = [poly for poly in segments if len(poly) >= 2]
    seg_ends = [(entity_of(poly[0]), entity_of(poly[-1])) for poly in segments]

    kind_of = {
        "endpoint": PointKind.END,
        "junction": PointKind.INTERSECTION,
        "corner": PointKind.CORNER,
    }
    nodes: dict[str, NodeRecord] = {}
    point_id = {}
    for idx, crit in enumerate(crit_list):
        nid = f"p{idx}"
        point_id[idx] = nid
        attrs = {"x": Scalar(crit.x), "y": Scalar(crit.y)}
        if crit.angle is not None:
            attrs["angle"] = Scalar(crit.angle)
        nodes[nid] = NodeRecord(nid, POINT, kind_of[crit.kind], attrs)

    edges: list[tuple[str, str]] = []
    for j, poly in enumerate(segments):
        sid = f"s{j}"
        start_px, end_px = poly[0], poly[-1]
        if start_px <= end_px:
            ox, oy = start_px[1], start_px[0]
            tx, ty = end_px[1], end_px[0]
        else:
            ox, oy = end_px[1], end_px[0]
            tx, ty = start_px[1], start_px[0]
        vec = _snap_axis((float(tx - ox), float(ty - oy)))
        cum = _arclengths(poly)
        total = float(cum[-1])
        mid = _point_at_arclength(poly, cum, total / 2.0)
        attrs = {
            "length": Scalar(total),
            "mid_x": Scalar(mid[0]),
            "mid_y": Scalar(mid[1]),
        }
        chord = math.hypot(*vec)
        # a discretized direction only describes near-straight segments; on
        # curved arcs the chord's lean is unstable split-to-split noise
        if vec != (0.0, 0.0) and chord >= 0.9 * total:
            h, v = directions_of(vec)
            attrs["quadrant"] = Category(str(quadrant_of(vec)))
            attrs["horizontal_direction"] = Category(h)
            attrs["vertical_direction"] = Category(v)
        nodes[sid] = NodeRecord(sid, LINE, None, attrs)
        a, b = seg_ends[j]
        edges.append((point_id[a], sid))
        if b != a:
            edges.append((point_id[b], sid))

    g = ContourGraph(nodes, edges)

    # Reclassify every point by its final degree.
    reclassified = {}
    for nid, rec in g.nodes.items():
        if rec.kind != POINT:
            reclassified[nid] = rec
            continue
        deg = g.degree(nid)
        if deg <= 1:
            pk = PointKind.END
        elif deg == 2:
            pk = PointKind.CORNER
        else:
            pk = PointKind.INTERSECTION
        reclassified[nid] = rec.with_point_kind(pk)
    g = ContourGraph(reclassified, g.edges)

    if g.nodes and not _connected(g):
        raise DisconnectedGraph("skeleton produced more than one component")

    n_end = len(g.points_of_kind(PointKind.END))
    n_corner = len(g.points_of_kind(PointKind.CORNER))
    n_inter = len(g.points_of_kind(PointKind.INTERSECTION))
    open_contour = any(
        g.degree(nid) <= 1 for nid, rec in g.nodes.items() if rec.kind == POINT
    )
    metadata = {
        "contour_type": Category("OPEN" if open_contour else "CLOSED"),
        "endpoint_counts": Scalar(n_end),
        "corner_point_counts": Scalar(n_corner),
        "intersection_point_counts": Scalar(n_inter),
    }

    # Promote the top-left endpoint (or, for closed contours, the top-left
    # critical point) to the canonical traversal anchor.
    candidates = g.points_of_kind(PointKind.END) or g.point_ids()
    if candidates:
        def topleft(nid):
            rec = g.nodes[nid]
            return (numeric_value(rec.attrs["y"]), numeric_value(rec.attrs["x"]), natural_key(nid))

        chosen = min(candidates, key=topleft)
        nodes2 = dict(g.nodes)
        nodes2[chosen] = nodes2[chosen].with_point_kind(PointKind.START)
        g = ContourGraph(nodes2, g.edges, metadata)
    else:
        g = ContourGraph(g.nodes, g.edges, metadata if g.nodes else {})
    return g


def _point_at_arclength(poly, cum, target) -> tuple[float, float]:
    if cum[-1] == 0:
        r, c = poly[0]
        return (float(c), float(r))
    k = int(np.searchsorted(cum, target, side="right") - 1)
    k = min(max(k, 0), len(poly) - 2)
    seg = cum[k + 1] - cum[k]
    t = 0.0 if seg == 0 else (target - cum[k]) / seg
    (r0, c0), (r1, c1) = poly[k], poly[k + 1]
    return (c0 + t * (c1 - c0), r0 + t * (r1 - r0))


def _connected(g: ContourGraph) -> bool:
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


def normalize(g: ContourGraph) -> ContourGraph:
    """Map pixel coordinates into [-1, 1] about the bounding-box center.

    Each axis is scaled by half its bounding-box extent; lengths divide by
    the larger of the two half-extents.  The output is invariant to uniform
    scaling and translation of the input coordinates.  An axis with zero
    extent maps to coordinate 0; a graph with no extent at all raises.
    """
    xs: list[float] = []
    ys: list[float] = []
    for rec in g.nodes.values():
        if rec.kind == POINT:
            nx_, ny_ = rec.attrs.get("x"), rec.attrs.get("y")
        else:
            nx_, ny_ = rec.attrs.get("mid_x"), rec.attrs.get("mid_y")
        if nx_ is not None and ny_ is not None:
            xs.append(numeric_value(nx_))
            ys.append(numeric_value(ny_))
    if not xs:
        raise DegenerateBounds("graph has no coordinates to normalize")
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    cx = (max_x - min_x) / 2.0
    cy = (max_y - min_y) / 2.0
    if cx == 0 and cy == 0:
        raise DegenerateBounds("graph has zero spatial extent")
    scale = max(cx, cy)

    def norm_x(v: float) -> float:
        return (v - min_x - cx) / cx if cx > 0 else 0.0

    def norm_y(v: float) -> float:
        return (v - min_y - cy) / cy if cy > 0 else 0.0

    nodes: dict[str, NodeRecord] = {}
    for nid, rec in g.nodes.items():
        attrs = dict(rec.attrs)
        if rec.kind == POINT:
            if "x" in attrs:
                attrs["normalized_x"] = Scalar(norm_x(numeric_value(attrs.pop("x"))))
            if "y" in attrs:
                attrs["normalized_y"] = Scalar(norm_y(numeric_value(attrs.pop("y"))))
        else:
            if "mid_x" in attrs:
                attrs["normalized_mid_x"] = Scalar(norm_x(numeric_value(attrs.pop("mid_x"))))
            if "mid_y" in attrs:
                attrs["normalized_mid_y"] = Scalar(norm_y(numeric_value(attrs.pop("mid_y"))))
            if "length" in attrs:
                attrs["length"] = Scalar(numeric_value(attrs["length"]) / scale)
        nodes[nid] = rec.with_attrs(attrs)
    return ContourGraph(nodes, g.edges, g.metadata)


def vectorize_image(
    image: np.ndarray, threshold: float = 0.5, corner_angle: float = 45.0
) -> ContourGraph:
    """Full pipeline: grayscale raster in, validated normalized graph out."""
    bitmap = binarize(image, threshold)
    skel = skeletonize(bitmap)
    criticals = extract_critical_points(skel)
    polylines = trace_segments(skel, criticals)
    crit_pixels = {px for crit in criticals for px in crit.pixels}

    segments: list[list[tuple[int, int]]] = []
    all_criticals = list(criticals)
    for poly in polylines:
        pieces, corners = detect_corners(poly, corner_angle)
        closed = poly[0] == poly[-1] or (
            poly[0] in crit_pixels
            and poly[-1] in crit_pixels
            and _same_entity(criticals, poly[0], poly[-1])
        )
        if closed and not corners and len(poly) >= 3:
            pieces, corners = _force_split(poly)
        segments.extend(pieces)
        all_criticals.extend(corners)

    g = build_graph(segments, all_criticals)
    if not g.nodes:
        raise DegenerateBounds("image contains no strokes")
    g = normalize(g)
    report = validate(g)
    if not report.ok:  # pragma: no cover - pipeline bug guard
        raise DisconnectedGraph("; ".join(report.violations))
    return g


def _same_entity(criticals, p0, p1) -> bool:
    for crit in criticals:
        if p0 in crit.pixels:
            return p1 in crit.pixels
    return False
