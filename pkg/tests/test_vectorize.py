import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from contourgraph.errors import DegenerateBounds, DisconnectedGraph, EmptyImage, ZeroVector
from contourgraph.graph_core import PointKind, numeric_value, validate
from contourgraph.vectorize import (
    binarize,
    build_graph,
    detect_corners,
    directions_of,
    extract_critical_points,
    normalize,
    quadrant_of,
    skeletonize,
    trace_segments,
    vectorize_image,
)

from .conftest import path_graph, stroke_graph


def bar_image(r0, r1, c0, c1, size=28):
    img = np.zeros((size, size), dtype=np.uint8)
    img[r0:r1, c0:c1] = 255
    return img


def plus_bitmap():
    b = np.zeros((21, 21), dtype=bool)
    b[10, 3:18] = True
    b[3:18, 10] = True
    return b


def ring_bitmap(radius=6, size=21):
    yy, xx = np.mgrid[0:size, 0:size]
    d = np.hypot(yy - size // 2, xx - size // 2)
    return np.abs(d - radius) < 0.6


class TestBinarize:
    def test_all_black_all_off(self):
        assert not binarize(np.zeros((5, 5), dtype=np.uint8), 0.5).any()

    def test_all_white_all_on(self):
        assert binarize(np.full((5, 5), 255, dtype=np.uint8), 0.5).all()

    def test_mid_gray_threshold(self):
        img = np.full((3, 3), 128, dtype=np.uint8)
        assert binarize(img, 0.5).all()          # 128 >= 127.5
        assert not binarize(img, 0.6).any()

    def test_float_images_use_unit_max(self):
        img = np.full((3, 3), 0.6)
        assert binarize(img, 0.5).all()
        assert not binarize(img, 0.7).any()

    def test_empty_image(self):
        with pytest.raises(EmptyImage):
            binarize(np.zeros((0, 0), dtype=np.uint8), 0.5)

    def test_partial_coverage_on_a_glyph(self):
        img = bar_image(4, 24, 12, 16)
        on = int(binarize(img, 0.5).sum())
        assert 0 < on < img.size


class TestSkeletonize:
    def test_thin_line_unchanged(self):
        b = np.zeros((9, 9), dtype=bool)
        b[4, 1:8] = True
        assert (skeletonize(b) == b).all()

    def test_horizontal_bar_thins_to_single_pixel_path(self):
        b = np.zeros((15, 60), dtype=bool)
        b[5:10, 5:55] = True
        sk = skeletonize(b)
        cols = sk[:, 10:50]
        assert (cols.sum(axis=0) == 1).all()

    def test_empty_stays_empty(self):
        b = np.zeros((8, 8), dtype=bool)
        assert not skeletonize(b).any()

    @settings(max_examples=25, deadline=None)
    @given(arrays(bool, (16, 16), elements=st.booleans()))
    def test_idempotent(self, bitmap):
        once = skeletonize(bitmap)
        assert (skeletonize(once) == once).all()

    def test_subset_of_input_closure(self):
        b = np.zeros((12, 40), dtype=bool)
        b[4:8, 3:37] = True
        sk = skeletonize(b)
        assert not (sk & ~b).any()


class TestCriticalPoints:
    def test_straight_stroke_two_endpoints(self):
        b = np.zeros((9, 20), dtype=bool)
        b[4, 2:18] = True
        crits = extract_critical_points(b)
        kinds = [c.kind for c in crits]
        assert kinds.count("endpoint") == 2
        assert kinds.count("junction") == 0

    def test_plus_four_endpoints_one_junction(self):
        crits = extract_critical_points(plus_bitmap())
        kinds = [c.kind for c in crits]
        assert kinds.count("endpoint") == 4
        assert kinds.count("junction") == 1

    def test_ring_no_criticals(self):
        crits = extract_critical_points(skeletonize(ring_bitmap()))
        assert crits == []

    def test_criticals_lie_on_skeleton(self):
        sk = skeletonize(ring_bitmap() | plus_bitmap())
        for crit in extract_critical_points(sk):
            assert sk[crit.pixel()]


class TestTraceSegments:
    def test_straight_stroke_single_polyline(self):
        b = np.zeros((9, 20), dtype=bool)
        b[4, 2:18] = True
        crits = extract_critical_points(b)
        polys = trace_segments(b, crits)
        assert len(polys) == 1
        ends = {polys[0][0], polys[0][-1]}
        assert ends == {c.pixel() for c in crits}

    def test_plus_four_polylines_sharing_junction(self):
        b = plus_bitmap()
        crits = extract_critical_points(b)
        polys = trace_segments(b, crits)
        assert len(polys) == 4
        junction = next(c.pixel() for c in crits if c.kind == "junction")
        assert all(junction in (p[0], p[-1]) for p in polys)

    def test_ring_closed_polyline_at_smallest_pixel(self):
        sk = skeletonize(ring_bitmap())
        polys = trace_segments(sk, [])
        assert len(polys) == 1
        poly = polys[0]
        assert poly[0] == poly[-1]
        assert poly[0] == min(map(tuple, np.argwhere(sk)))

    def test_pixel_conservation(self):
        for bitmap in (plus_bitmap(), skeletonize(ring_bitmap())):
            sk = skeletonize(bitmap)
            crits = extract_critical_points(sk)
            polys = trace_segments(sk, crits)
            covered = set()
            interiors = []
            for p in polys:
                covered.update(p)
                interiors.append(set(p[1:-1]))
            on = set(map(tuple, np.argwhere(sk)))
            assert covered == on
            for i in range(len(interiors)):
                for j in range(i + 1, len(interiors)):
                    assert not (interiors[i] & interiors[j])

    @settings(max_examples=20, deadline=None)
    @given(arrays(bool, (14, 14), elements=st.booleans()))
    def test_pixel_conservation_random(self, bitmap):
        sk = skeletonize(bitmap)
        crits = extract_critical_points(sk)
        polys = trace_segments(sk, crits)
        covered = set()
        for p in polys:
            covered.update(p)
        assert covered == set(map(tuple, np.argwhere(sk)))


class TestDetectCorners:
    def test_straight_no_corners(self):
        poly = [(4, c) for c in range(2, 20)]
        pieces, corners = detect_corners(poly, 45.0)
        assert corners == []
        assert pieces == [poly]

    def test_right_angle_l(self):
        poly = [(r, 3) for r in range(2, 13)] + [(12, c) for c in range(4, 14)]
        pieces, corners = detect_corners(poly, 45.0)
        assert len(corners) == 1
        assert corners[0].angle == pytest.approx(90.0, abs=10.0)
        assert len(pieces) == 2

    def test_seven_stroke_has_a_corner(self):
        from contourgraph import datagen

        rng = np.random.default_rng(3)
        g = vectorize_image(datagen.render_digit("7", rng), corner_angle=50.0)
        assert len(g.points_of_kind(PointKind.CORNER)) >= 1


class TestDirections:
    def test_axis_right(self):
        assert quadrant_of((1.0, 0.0)) == 1
        assert directions_of((1.0, 0.0)) == ("Right", "None")

    def test_up_left_quadrant_three(self):
        assert quadrant_of((-1.0, -1.0)) == 3
        assert directions_of((-1.0, -1.0)) == ("Left", "Up")

    def test_straight_down(self):
        assert directions_of((0.0, 1.0)) == ("None", "Down")
        assert quadrant_of((0.0, 1.0)) == 1

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            quadrant_of((0.0, 0.0))
        with pytest.raises(ZeroVector):
            directions_of((0.0, 0.0))


class TestBuildGraph:
    def test_straight_stroke_three_nodes(self):
        g = vectorize_image(bar_image(4, 24, 13, 16))
        assert len(g.nodes) == 3
        assert len(g.edges) == 2
        assert len(g.points_of_kind(PointKind.START)) == 1
        assert len(g.points_of_kind(PointKind.END)) == 1

    def test_two_blobs_disconnected(self):
        img = bar_image(2, 10, 3, 6)
        img[15:25, 20:23] = 255
        with pytest.raises(DisconnectedGraph):
            vectorize_image(img)

    def test_plus_intersection_degree_four(self):
        img = np.zeros((28, 28), dtype=np.uint8)
        img[13:16, 4:24] = 255
        img[4:24, 13:16] = 255
        g = vectorize_image(img)
        ips = g.points_of_kind(PointKind.INTERSECTION)
        assert len(ips) == 1
        assert g.degree(ips[0]) == 4
        points = [r for r in g.nodes.values() if r.kind == "point"]
        assert len(g.points_of_kind(PointKind.END)) == 3
        assert len(g.points_of_kind(PointKind.START)) == 1
        assert len(points) == 5

    def test_start_point_top_left_endpoint(self):
        g = vectorize_image(bar_image(4, 24, 13, 16))
        sp = g.nodes[g.start_point()]
        assert numeric_value(sp.attrs["normalized_y"]) == -1.0

    def test_metadata_counts(self):
        g = vectorize_image(bar_image(4, 24, 13, 16))
        assert numeric_value(g.metadata["endpoint_counts"]) == 2
        assert g.metadata["contour_type"].label == "OPEN"

    def test_pipeline_output_is_valid(self):
        from contourgraph import datagen

        for cls in datagen.CLASSES:
            rng = np.random.default_rng((1, int(cls)))
            g = vectorize_image(datagen.render_digit(cls, rng))
            assert validate(g).ok


class TestPipelineRobustness:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_never_returns_an_invalid_graph(self, seed):
        rng = np.random.default_rng(seed)
        img = (rng.random((20, 20)) < rng.uniform(0.05, 0.9)).astype(np.uint8) * 255
        try:
            g = vectorize_image(img)
        except (DisconnectedGraph, DegenerateBounds):
            return
        report = validate(g)
        assert report.ok, report.violations


class TestNormalize:
    def build_pixel_graph(self, coords):
        from contourgraph.graph_core import ContourGraph, Scalar, line_node, point_node

        nodes = []
        edges = []
        for i, (x, y) in enumerate(coords):
            kind = (
                PointKind.START
                if i == 0
                else (PointKind.END if i == len(coords) - 1 else PointKind.CORNER)
            )
            nodes.append(point_node(f"p{i}", kind, x=Scalar(x), y=Scalar(y)))
        for i in range(len(coords) - 1):
            (x0, y0), (x1, y1) = coords[i], coords[i + 1]
            length = float(np.hypot(x1 - x0, y1 - y0))
            nodes.append(
                line_node(
                    f"s{i}",
                    length=Scalar(length),
                    mid_x=Scalar((x0 + x1) / 2),
                    mid_y=Scalar((y0 + y1) / 2),
                )
            )
            edges.append((f"p{i}", f"s{i}"))
            edges.append((f"s{i}", f"p{i+1}"))
        return ContourGraph(nodes, edges)

    def test_center_maps_to_zero(self):
        g = self.build_pixel_graph([(0, 0), (10, 0), (20, 20)])
        out = normalize(g)
        # p1 x = 10 is the x-center of [0, 20]
        assert numeric_value(out.nodes["p1"].attrs["normalized_x"]) == 0.0

    def test_right_bound_maps_to_one(self):
        g = self.build_pixel_graph([(0, 0), (10, 5), (20, 20)])
        out = normalize(g)
        assert numeric_value(out.nodes["p2"].attrs["normalized_x"]) == 1.0
        assert numeric_value(out.nodes["p0"].attrs["normalized_x"]) == -1.0

    def test_all_coordinates_in_unit_box(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            pts = [(float(rng.uniform(0, 30)), float(rng.uniform(0, 30))) for _ in range(3)]
            out = normalize(self.build_pixel_graph(pts))
            for rec in out.nodes.values():
                for name in ("normalized_x", "normalized_y", "normalized_mid_x", "normalized_mid_y"):
                    if name in rec.attrs:
                        assert -1.0 <= numeric_value(rec.attrs[name]) <= 1.0

    def test_translation_and_scale_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            pts = [(float(rng.uniform(0, 20)), float(rng.uniform(0, 20))) for _ in range(3)]
            g = self.build_pixel_graph(pts)
            moved = self.build_pixel_graph([(3 * x + 7, 3 * y + 13) for x, y in pts])
            a, b = normalize(g), normalize(moved)
            for nid in a.nodes:
                for name, val in a.nodes[nid].attrs.items():
                    assert numeric_value(val) == pytest.approx(
                        numeric_value(b.nodes[nid].attrs[name]), abs=1e-9
                    )

    def test_degenerate_bounds(self):
        g = self.build_pixel_graph([(5.0, 5.0), (5.0, 5.0)])
        with pytest.raises(DegenerateBounds):
            normalize(g)

    def test_single_zero_extent_axis_allowed(self):
        g = self.build_pixel_graph([(5.0, 0.0), (5.0, 20.0)])
        out = normalize(g)
        assert numeric_value(out.nodes["p0"].attrs["normalized_x"]) == 0.0
        assert numeric_value(out.nodes["p0"].attrs["normalized_y"]) == -1.0
