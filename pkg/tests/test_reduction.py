import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contourgraph.errors import NoPathFound, NotAnEndpoint
from contourgraph.graph_core import (
    Category,
    ContourGraph,
    PointKind,
    Range,
    Scalar,
    TagSet,
    line_node,
    point_node,
    structural_complexity,
    validate,
)
from contourgraph.reduction import (
    PathPair,
    endpoint_similarity,
    enumerate_simple_paths,
    find_best_path_pair,
    merge_categorical,
    merge_intersections,
    merge_numeric,
    merge_tags,
    point_similarity,
    prune_paths,
    remove_endpoint_branch,
)

from .conftest import path_graph, stroke_graph, y_graph


class TestMergeNumeric:
    def test_running_mean_reproduces_published_counts(self):
        merged = merge_numeric(Scalar(2), Scalar(4))
        merged = merge_numeric(merged, Scalar(2))
        assert merged.min == 2
        assert merged.max == 4
        assert merged.center == pytest.approx(2.67, abs=0.01)
        assert merged.count == 3

    def test_identical_scalars(self):
        merged = merge_numeric(Scalar(5), Scalar(5))
        assert (merged.min, merged.max, merged.center, merged.count) == (5, 5, 5, 2)

    def test_order_insensitive(self):
        values = [1.0, 2.0, 3.0]
        results = set()
        for perm in itertools.permutations(values):
            acc = Scalar(perm[0])
            for v in perm[1:]:
                acc = merge_numeric(acc, Scalar(v))
            results.add((acc.min, acc.max, acc.center, acc.count))
        assert results == {(1.0, 3.0, 2.0, 3)}

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(-50, 50), min_size=2, max_size=6))
    def test_fold_matches_batch_statistics(self, values):
        acc = Scalar(values[0])
        for v in values[1:]:
            acc = merge_numeric(acc, Scalar(v))
        assert acc.min == min(values)
        assert acc.max == max(values)
        assert acc.center == pytest.approx(sum(values) / len(values), rel=1e-9)
        assert acc.count == len(values)


class TestMergeCategorical:
    def test_equal_labels_survive(self):
        assert merge_categorical(Category("OPEN"), Category("OPEN")) == Category("OPEN")

    def test_conflict_removes(self):
        assert merge_categorical(Category("Left"), Category("Right")) is None

    def test_chain(self):
        acc = Category("X")
        for _ in range(2):
            acc = merge_categorical(acc, Category("X"))
        assert acc == Category("X")


class TestMergeTags:
    def test_intersection(self):
        assert merge_tags(TagSet(["p", "q"]), TagSet(["q", "r"])) == TagSet(["q"])

    def test_idempotent(self):
        s = TagSet(["a", "b"])
        assert merge_tags(s, s) == s

    def test_disjoint_keeps_empty_set(self):
        assert merge_tags(TagSet(["p"]), TagSet(["q"])) == TagSet([])


def _ep(x, y, **attrs):
    return point_node("e", PointKind.END, normalized_x=Scalar(x), normalized_y=Scalar(y), **attrs)


class TestPointSimilarity:
    def test_identical_endpoint_is_one(self):
        a = _ep(0.3, -0.2)
        assert point_similarity(a, a, 0.7, 0.3) == pytest.approx(1.0)

    def test_opposite_corners_no_shared_categories_is_zero(self):
        # records built directly: each side carries its own categorical name
        a = point_node(
            "a", PointKind.END, normalized_x=Scalar(-1), normalized_y=Scalar(-1)
        )
        b = point_node(
            "b", PointKind.END, normalized_x=Scalar(1), normalized_y=Scalar(1)
        )
        a = a.with_attrs(dict(a.attrs, **{"tags": TagSet(["x"])}))
        sim = point_similarity(a, b, 0.7, 0.3)
        assert sim == pytest.approx(0.0, abs=1e-12)

    def test_one_disagreement_of_two_shared(self):
        a = line_node(
            "a",
            normalized_mid_x=Scalar(0.0),
            normalized_mid_y=Scalar(0.0),
            quadrant=Category("1"),
            horizontal_direction=Category("Left"),
        )
        b = line_node(
            "b",
            normalized_mid_x=Scalar(0.0),
            normalized_mid_y=Scalar(0.0),
            quadrant=Category("1"),
            horizontal_direction=Category("Right"),
        )
        assert point_similarity(a, b, 0.7, 0.3) == pytest.approx(0.7 * 1.0 + 0.3 * 0.5)


class TestEndpointSimilarity:
    def test_matrix_shape_and_bounds(self):
        c = y_graph()
        g = y_graph()
        sim = endpoint_similarity(c, g)
        assert sim.values.shape == (2, 2)
        assert ((sim.values >= 0) & (sim.values <= 1)).all()
        assert sim.entry("p2", "p2") == pytest.approx(1.0)


class TestRemoveEndpointBranch:
    def test_y_arm_removal_reclassifies_intersection(self):
        g = y_graph()
        out = remove_endpoint_branch(g, "p2")
        assert "p2" not in out.nodes
        assert "s1" not in out.nodes
        assert out.nodes["p1"].point_kind == PointKind.CORNER
        assert validate(out).ok
        # remaining graph is the simple path p0 - s0 - p1 - s2 - p3
        assert len(out.nodes) == 5

    def test_stroke_leaves_single_start_point(self):
        g = stroke_graph()
        before = structural_complexity(g)
        out = remove_endpoint_branch(g, "p1")
        assert list(out.nodes) == ["p0"]
        assert structural_complexity(out) < before
        assert validate(out).ok

    def test_double_removal_raises(self):
        g = y_graph()
        out = remove_endpoint_branch(g, "p2")
        with pytest.raises(NotAnEndpoint):
            remove_endpoint_branch(out, "p2")

    def test_non_endpoint_rejected(self):
        with pytest.raises(NotAnEndpoint):
            remove_endpoint_branch(y_graph(), "p1")


def twin_junction_graph(gap=0.01):
    """Two IntersectionPoints `gap` apart, each with two pendant arms,
    joined by a bridge line."""
    nodes = [
        point_node("p0", PointKind.START, normalized_x=Scalar(-1.0), normalized_y=Scalar(-1.0)),
        point_node("p1", PointKind.INTERSECTION, normalized_x=Scalar(0.0), normalized_y=Scalar(0.0)),
        point_node("p2", PointKind.INTERSECTION, normalized_x=Scalar(gap), normalized_y=Scalar(0.0)),
        point_node("p3", PointKind.END, normalized_x=Scalar(-1.0), normalized_y=Scalar(1.0)),
        point_node("p4", PointKind.END, normalized_x=Scalar(1.0), normalized_y=Scalar(-1.0)),
        point_node("p5", PointKind.END, normalized_x=Scalar(1.0), normalized_y=Scalar(1.0)),
        line_node("s0", length=Scalar(1.0), normalized_mid_x=Scalar(-0.5), normalized_mid_y=Scalar(-0.5)),
        line_node("s1", length=Scalar(1.0), normalized_mid_x=Scalar(-0.5), normalized_mid_y=Scalar(0.5)),
        line_node("s2", length=Scalar(gap), normalized_mid_x=Scalar(gap / 2), normalized_mid_y=Scalar(0.0)),
        line_node("s3", length=Scalar(1.0), normalized_mid_x=Scalar(0.5), normalized_mid_y=Scalar(-0.5)),
        line_node("s4", length=Scalar(1.0), normalized_mid_x=Scalar(0.5), normalized_mid_y=Scalar(0.5)),
    ]
    edges = [
        ("p0", "s0"), ("s0", "p1"),
        ("p3", "s1"), ("s1", "p1"),
        ("p1", "s2"), ("s2", "p2"),
        ("p2", "s3"), ("s3", "p4"),
        ("p2", "s4"), ("s4", "p5"),
    ]
    return ContourGraph(nodes, edges)


class TestMergeIntersections:
    def test_twin_junctions_consolidate(self):
        g = twin_junction_graph(gap=0.01)
        before_nodes = len(g.nodes)
        before_edges = len(g.edges)
        out = merge_intersections(g, 0.05)
        assert len(out.nodes) == before_nodes - 1
        assert len(out.edges) < before_edges
        assert "p1" in out.nodes and "p2" not in out.nodes
        assert validate(out).ok

    def test_far_junctions_untouched(self):
        g = twin_junction_graph(gap=0.5)
        assert merge_intersections(g, 0.05) == g

    def test_merged_position_becomes_range(self):
        g = twin_junction_graph(gap=0.01)
        out = merge_intersections(g, 0.05)
        x = out.nodes["p1"].attrs["normalized_x"]
        assert isinstance(x, Range)
        assert (x.min, x.max) == (0.0, 0.01)

    def test_complexity_monotone(self):
        g = twin_junction_graph(gap=0.01)
        assert structural_complexity(merge_intersections(g, 0.05)) < structural_complexity(g)


class TestSimplePaths:
    def test_path_enumeration_shortest_first(self):
        g = y_graph()
        paths = enumerate_simple_paths(g, "p0", "p2", cap=10)
        assert paths[0] == ("p0", "s0", "p1", "s1", "p2")

    def test_cycle_has_two_paths(self):
        from .conftest import six_graph

        g = six_graph()
        paths = enumerate_simple_paths(g, "p1", "p3", cap=10)
        assert len(paths) == 2

    def test_cap_respected(self):
        from .conftest import six_graph

        paths = enumerate_simple_paths(six_graph(), "p1", "p3", cap=1)
        assert len(paths) == 1


class TestPrunePaths:
    def test_identical_paths_identity_correspondence(self):
        a = path_graph([(0, -1), (0, 0), (0, 1)])
        b = path_graph([(0, -1), (0, 0), (0, 1)])
        pair = find_best_path_pair(a, ("p0", "p2"), b, ("p0", "p2"), 16, 0.7, 0.3)
        result = prune_paths(pair, a, b)
        assert result.removed == ()
        assert result.correspondence == {nid: nid for nid in pair.path_a}

    def test_longer_path_pruned_to_template(self):
        short = path_graph([(0, -1), (0, 0), (0, 1)])            # 5 nodes
        long = path_graph([(0, -1), (0, -0.5), (0, 0.5), (0, 1)])  # 7 nodes
        pair = find_best_path_pair(short, ("p0", "p2"), long, ("p0", "p3"), 16, 0.7, 0.3)
        result = prune_paths(pair, short, long)
        assert result.template_side == "a"
        assert len(result.template_path) == 5
        assert len(result.removed) == 2
        # endpoints pinned
        assert result.correspondence["p0"] == "p0"
        assert result.correspondence["p3"] == "p2"

    def test_unreachable_endpoints_raise(self):
        a = path_graph([(0, -1), (0, 0), (0, 1)])
        with pytest.raises(NoPathFound):
            find_best_path_pair(
                a, ("p0", "p2"), a, ("p0", "p2"), 16, 0.7, 0.3,
                forbidden_a=frozenset({"p1"}), forbidden_b=frozenset({"p1"}),
            )


class TestStructuralMonotonicity:
    def test_operators_never_grow_complexity(self):
        cases = [
            (remove_endpoint_branch, (y_graph(), "p2")),
            (merge_intersections, (twin_junction_graph(0.01), 0.05)),
            (merge_intersections, (twin_junction_graph(0.5), 0.05)),
        ]
        for fn, args in cases:
            before = structural_complexity(args[0])
            out = fn(*args)
            assert structural_complexity(out) <= before
            assert validate(out).ok
