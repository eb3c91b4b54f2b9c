"""Acceptance suite: one test per release criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.  The end-to-end criteria (9, 10) share a single trained library
and a 600-image evaluation; the determinism criterion (12) re-runs training
and a 60-image evaluation twice from scratch.
"""

import itertools
from pathlib import Path

import numpy as np
import pytest

from contourgraph import datagen, harness
from contourgraph.classify import classify
from contourgraph.concept import (
    ConceptLibrary,
    init_concept,
    library_to_json,
    merge_sample,
    train_concept,
)
from contourgraph.config import load_config
from contourgraph.ged import CostConfig, exact_ged, ged_search, node_subst_cost
from contourgraph.graph_core import (
    Category,
    ContourGraph,
    PointKind,
    Range,
    Scalar,
    line_node,
    point_node,
    structural_complexity,
)
from contourgraph.reduction import merge_categorical, merge_numeric
from contourgraph.vectorize import normalize, vectorize_image

from .conftest import path_graph, random_valid_graph
from .test_classify import TIE_CFG, five_node_path, tie_library
from .test_concept import three_with_branch, three_without_branch

CONFIG_PATH = Path(__file__).resolve().parent.parent / "configs" / "synth.cfg"

EXACT_CFG = CostConfig(
    node_insert_cost=1.0,
    node_delete_cost=1.0,
    edge_insert_cost=0.125,
    edge_delete_cost=0.125,
    attr_weight={"angle": 0.5},
    presence_penalty=0.25,
)


@pytest.fixture(scope="module")
def protocol_config():
    return load_config(str(CONFIG_PATH))


@pytest.fixture(scope="module")
def trained_library(protocol_config):
    train = harness.DatasetSlice(
        *datagen.make_dataset(per_class=12, seed=7, salt=0), "train"
    )
    groups = harness.build_groups(train, protocol_config)
    return harness.train_library(groups, protocol_config)


@pytest.fixture(scope="module")
def full_evaluation(protocol_config, trained_library):
    test = harness.DatasetSlice(
        *datagen.make_dataset(per_class=100, seed=7, salt=1), "test"
    )
    return harness.evaluate(trained_library, test, protocol_config)


def test_criterion_01_parametric_merge_reproduction():
    merged = merge_numeric(merge_numeric(Scalar(2), Scalar(4)), Scalar(2))
    assert merged.min == 2
    assert merged.max == 4
    assert merged.center == pytest.approx(2.67, abs=0.01)
    print("PASS criterion 1: endpoint counts 2,4,2 merge to "
          f"{{min {merged.min:g}, max {merged.max:g}, center {merged.center:.2f}}}")


def test_criterion_02_categorical_merge_reproduction():
    kept = Category("OPEN")
    for _ in range(4):
        kept = merge_categorical(kept, Category("OPEN"))
    assert kept == Category("OPEN")
    assert merge_categorical(Category("Left"), Category("Right")) is None
    print("PASS criterion 2: consistent OPEN survives, Left/Right conflict removed")


def test_criterion_03_stroke_attractor_shape():
    samples = []
    for thickness, col in ((1, 12), (2, 14), (3, 11), (2, 15)):
        img = np.zeros((28, 28), dtype=np.uint8)
        img[4:24, col : col + thickness] = 255
        samples.append(vectorize_image(img))
    concept = train_concept(samples, "1_1")
    g = concept.graph
    assert len(g.nodes) == 3
    assert len(g.edges) == 2
    assert len(g.points_of_kind(PointKind.END)) == 1
    assert len(g.points_of_kind(PointKind.START)) == 1
    print("PASS criterion 3: straight strokes converge to a 3-node, 2-edge attractor")


def test_criterion_04_branch_removal_monotonicity():
    concept = init_concept(three_with_branch(), "3_1")
    before = len(concept.graph.nodes)
    merged = merge_sample(concept, three_without_branch())
    assert len(merged.graph.nodes) < before
    print(
        "PASS criterion 4: pendant-branch merge shrinks the concept "
        f"({before} -> {len(merged.graph.nodes)} nodes)"
    )


def test_criterion_05_ged_oracle_equivalence():
    rng = np.random.default_rng(20240202)
    exact_checked = 0
    for trial in range(200):
        g = random_valid_graph(rng)
        c = init_concept(random_valid_graph(rng), "x").graph
        oracle = exact_ged(g, c, EXACT_CFG)
        generous = ged_search(g, c, EXACT_CFG, budget=30.0)
        assert generous.exact, f"trial {trial} did not finish"
        assert generous.distance == oracle.distance, f"trial {trial}"
        tiny = ged_search(g, c, EXACT_CFG, budget=0.0)
        assert tiny.distance >= oracle.distance - 1e-12, f"trial {trial}"
        exact_checked += 1
    print(f"PASS criterion 5: search equals the oracle on {exact_checked} random pairs")


def test_criterion_06_range_cost_rules():
    cfg = CostConfig()
    rng = np.random.default_rng(99)
    for _ in range(300):
        lo = float(rng.uniform(-3, 3))
        hi = lo + float(rng.uniform(0, 4))
        value = float(rng.uniform(-6, 6))
        weight = float(rng.uniform(0.1, 3.0))
        u = line_node("u", length=Scalar(value))
        v = line_node("v", length=Range(lo, hi, (lo + hi) / 2, 2))
        got = node_subst_cost(u, v, CostConfig(attr_weight={"length": weight}))
        value, lo, hi = Scalar(value).value, Range(lo, hi, (lo + hi) / 2, 2).min, Range(lo, hi, (lo + hi) / 2, 2).max
        if lo <= value <= hi:
            assert got == 0.0
        else:
            expected = weight * (lo - value if value < lo else value - hi)
            assert got == pytest.approx(expected, rel=1e-9)
    assert (
        node_subst_cost(line_node("u", length=Scalar(1.0)), point_node("v", PointKind.CORNER), cfg)
        == cfg.infinity
    )
    print("PASS criterion 6: in-range free, boundary-distance outside, kind mismatch infinite")


def test_criterion_07_tie_break_reproduction():
    report = classify(five_node_path(), tie_library(), TIE_CFG, budget=30.0)
    assert report.distances["1_1"].distance == report.distances["2_2"].distance
    assert report.tie_break_applied
    assert report.winner_label == "2_2"
    small = structural_complexity(tie_library().get("1_1").graph)
    big = structural_complexity(tie_library().get("2_2").graph)
    assert (small, big) == (5, 24)
    print("PASS criterion 7: equal distances, complexities 5 vs 24, complexity-24 concept wins")


def test_criterion_08_normalization_invariance():
    rng = np.random.default_rng(4711)
    from .test_vectorize import TestNormalize

    build = TestNormalize().build_pixel_graph
    for _ in range(1000):
        pts = [
            (float(rng.uniform(0, 25)), float(rng.uniform(0, 25))) for _ in range(3)
        ]
        scale = float(rng.uniform(0.5, 5.0))
        tx, ty = float(rng.uniform(-40, 40)), float(rng.uniform(-40, 40))
        a = normalize(build(pts))
        b = normalize(build([(scale * x + tx, scale * y + ty) for x, y in pts]))
        for nid in a.nodes:
            for name, value in a.nodes[nid].attrs.items():
                assert value.value == pytest.approx(
                    b.nodes[nid].attrs[name].value, abs=1e-9
                )
    print("PASS criterion 8: 1000 random graphs normalize invariantly under translate+scale")


def test_criterion_09_end_to_end_accuracy(full_evaluation):
    result = full_evaluation
    assert result.classified_count + result.failed_count == 600
    assert result.accuracy >= 70.0
    print(
        f"PASS criterion 9: desk-scale accuracy {result.accuracy:.2f}% "
        f"(precision {result.precision:.2f}%, recall {result.recall:.2f}%, "
        f"f1 {result.f1:.2f}%) on 600 held-out images, {result.failed_count} failures"
    )


def test_criterion_10_error_structure(full_evaluation):
    result = full_evaluation
    curved = result.confusion_count("2", "3") + result.confusion_count("3", "2")
    open_closed = result.confusion_count("6", "1") + result.confusion_count("1", "6")
    assert curved > open_closed
    print(
        f"PASS criterion 10: 2<->3 confusion ({curved}) exceeds 1<->6 confusion ({open_closed})"
    )


def test_criterion_11_failure_accounting(protocol_config):
    img = np.zeros((28, 28), dtype=np.uint8)
    img[2:10, 3:6] = 255
    img[15:25, 20:23] = 255
    good = np.zeros((28, 28), dtype=np.uint8)
    good[4:24, 13:16] = 255
    from .conftest import stroke_graph

    lib = ConceptLibrary([init_concept(stroke_graph(), "1_1")])
    test = harness.DatasetSlice(np.array([img, good]), np.array([1, 1]), "test")
    result = harness.evaluate(lib, test, protocol_config, budget=2.0)
    assert result.failed_count == 1
    assert result.classified_count == 1
    assert int(result.confusion.sum()) == 1
    print("PASS criterion 11: disconnected skeleton counted as failure, excluded from confusion")


def test_criterion_12_determinism(protocol_config):
    def one_run():
        train = harness.DatasetSlice(
            *datagen.make_dataset(per_class=12, seed=7, salt=0), "train"
        )
        lib = harness.train_library(
            harness.build_groups(train, protocol_config), protocol_config
        )
        test_images, test_labels = datagen.make_dataset(per_class=10, seed=7, salt=1)
        test = harness.DatasetSlice(test_images, test_labels, "test")
        result = harness.evaluate(lib, test, protocol_config)
        return library_to_json(lib), result.to_json()

    lib_a, metrics_a = one_run()
    lib_b, metrics_b = one_run()
    assert lib_a == lib_b
    assert metrics_a == metrics_b
    print("PASS criterion 12: repeated runs produce byte-identical library and metrics JSON")
