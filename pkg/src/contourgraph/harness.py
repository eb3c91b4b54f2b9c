"""Experiment harness: dataset IO, augmentation, training and evaluation.

IDX files (the classic big-endian image/label container) are the dataset
interface.  Training vectorizes the configured base samples plus their
augmented variants and folds each group into one concept; evaluation
vectorizes every test image, classifies it against the library, and
aggregates support-weighted precision/recall/F1 with a confusion matrix.
Images whose skeleton falls apart are counted as failures and excluded from
the matrix rather than raised.
"""

from __future__ import annotations

import json
import logging
import struct
import time
from dataclasses import dataclass

import numpy as np

from .classify import classify
from .concept import ConceptLibrary, train_concept
from .config import Config
from .errors import (
    BadMagic,
    ContourGraphError,
    CountMismatch,
    DegenerateBounds,
    DisconnectedGraph,
    TrainingError,
    TruncatedFile,
)
from .graph_core import Category, ContourGraph
from .vectorize import vectorize_image

logger = logging.getLogger(__name__)

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801


@dataclass
class DatasetSlice:
    images: np.ndarray  # [n, h, w] uint8
    labels: np.ndarray  # [n] int64
    split: str = "unsplit"

    def __len__(self) -> int:
        return len(self.images)

    def filter_classes(self, classes: set[str]) -> "DatasetSlice":
        wanted = np.array([str(lbl) in classes for lbl in self.labels])
        return DatasetSlice(self.images[wanted], self.labels[wanted], self.split)


def load_idx_images(images_path) -> np.ndarray:
    """Read one IDX image file, honoring its header exactly."""
    with open(images_path, "rb") as fh:
        header = fh.read(16)
        if len(header) < 16:
            raise TruncatedFile(f"{images_path}: header shorter than 16 bytes")
        magic, count, rows, cols = struct.unpack(">IIII", header)
        if magic != IDX_IMAGE_MAGIC:
            raise BadMagic(f"{images_path}: magic {magic:#010x} != {IDX_IMAGE_MAGIC:#010x}")
        payload = fh.read(count * rows * cols)
        if len(payload) < count * rows * cols:
            raise TruncatedFile(
                f"{images_path}: expected {count * rows * cols} pixel bytes, got {len(payload)}"
            )
        return np.frombuffer(payload, dtype=np.uint8).reshape(count, rows, cols)


def load_idx(images_path, labels_path) -> DatasetSlice:
    """Read paired IDX image/label files, honoring their headers exactly."""
    images = load_idx_images(images_path)
    count = len(images)
    with open(labels_path, "rb") as fh:
        header = fh.read(8)
        if len(header) < 8:
            raise TruncatedFile(f"{labels_path}: header shorter than 8 bytes")
        magic, label_count = struct.unpack(">II", header)
        if magic != IDX_LABEL_MAGIC:
            raise BadMagic(f"{labels_path}: magic {magic:#010x} != {IDX_LABEL_MAGIC:#010x}")
        payload = fh.read(label_count)
        if len(payload) < label_count:
            raise TruncatedFile(f"{labels_path}: expected {label_count} labels, got {len(payload)}")
        labels = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    if count != label_count:
        raise CountMismatch(f"{count} images vs {label_count} labels")
    return DatasetSlice(images, labels)


def write_idx(images: np.ndarray, labels: np.ndarray, images_path, labels_path) -> None:
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    n, rows, cols = images.shape
    with open(images_path, "wb") as fh:
        fh.write(struct.pack(">IIII", IDX_IMAGE_MAGIC, n, rows, cols))
        fh.write(images.tobytes())
    with open(labels_path, "wb") as fh:
        fh.write(struct.pack(">II", IDX_LABEL_MAGIC, len(labels)))
        fh.write(labels.tobytes())


# --- augmentation -----------------------------------------------------------------

def _affine_sample(image: np.ndarray, theta: float, tx: float, ty: float, scale: float) -> np.ndarray:
    """Rotate/scale about the image center, translate.

    Resampling takes the maximum over the four bilinear source neighbors,
    which keeps thin binary strokes connected where plain bilinear
    interpolation would break them.
    """
    h, w = image.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w]
    # inverse map: output pixel -> source pixel
    xr = (xx - cx - tx) / scale
    yr = (yy - cy - ty) / scale
    cos_t, sin_t = np.cos(-theta), np.sin(-theta)
    xs = cos_t * xr - sin_t * yr + cx
    ys = sin_t * xr + cos_t * yr + cy
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    out = np.zeros((h, w), dtype=np.uint8)
    for dy in (0, 1):
        for dx in (0, 1):
            xi = x0 + dx
            yi = y0 + dy
            inside = (xi >= 0) & (xi < w) & (yi >= 0) & (yi < h)
            vals = np.zeros((h, w), dtype=np.uint8)
            vals[inside] = image[yi[inside], xi[inside]]
            np.maximum(out, vals, out=out)
    return out


def augment(
    sample: np.ndarray,
    n_variants: int,
    seed: int,
    rotation: float = 10.0,
    shift: float = 2.0,
    scale: float = 0.1,
) -> list[np.ndarray]:
    """Deterministic perturbed copies: small rotations, shifts, rescales."""
    rng = np.random.default_rng(seed)
    variants = []
    for _ in range(n_variants):
        theta = np.deg2rad(rng.uniform(-rotation, rotation))
        tx = rng.uniform(-shift, shift)
        ty = rng.uniform(-shift, shift)
        s = rng.uniform(1.0 - scale, 1.0 + scale)
        variants.append(_affine_sample(sample, theta, tx, ty, s))
    return variants


# --- training ----------------------------------------------------------------------

def _vectorize_with_source(image, source: str, cfg: Config) -> ContourGraph:
    g = vectorize_image(
        image,
        threshold=cfg.get_float("vectorize.threshold"),
        corner_angle=cfg.get_float("vectorize.corner_angle"),
    )
    meta = dict(g.metadata)
    meta["source"] = Category(source)
    return ContourGraph(g.nodes, g.edges, meta)


def build_groups(
    train: DatasetSlice, cfg: Config
) -> dict[str, list[tuple[str, np.ndarray, bool]]]:
    """Resolve concept.<label> index lists against the per-class sample order.

    Index i of concept `3_1` means the i-th training image whose label is 3,
    in file order.  Each base image is followed by its augmented variants;
    the flag marks base samples.
    """
    by_class: dict[str, list[tuple[int, np.ndarray]]] = {}
    for pos, (img, lbl) in enumerate(zip(train.images, train.labels)):
        by_class.setdefault(str(lbl), []).append((pos, img))
    n_aug = cfg.get_int("augment.count")
    seed = cfg.get_int("augment.seed")
    rotation = cfg.get_float("augment.rotation")
    shift = cfg.get_float("augment.shift")
    scale = cfg.get_float("augment.scale")
    groups: dict[str, list[tuple[str, np.ndarray, bool]]] = {}
    for label, indices in sorted(cfg.concept_groups().items()):
        cls = label.rsplit("_", 1)[0]
        pool = by_class.get(cls, [])
        samples: list[tuple[str, np.ndarray, bool]] = []
        for idx in indices:
            if idx >= len(pool):
                raise TrainingError(
                    f"concept {label}: index {idx} out of range for class {cls} "
                    f"({len(pool)} samples)"
                )
            pos, img = pool[idx]
            samples.append((f"idx:{pos}", img, True))
            for v, variant in enumerate(
                augment(img, n_aug, seed + pos, rotation, shift, scale)
            ):
                samples.append((f"idx:{pos}/aug:{v}", variant, False))
        groups[label] = samples
    return groups


def train_library(
    groups: dict[str, list[tuple[str, np.ndarray, bool]]], cfg: Config
) -> ConceptLibrary:
    """Vectorize each group and fold it into one concept per label.

    Vectorization failures inside a group are logged and skipped.  So is an
    augmented variant that came out structurally simpler than its base
    sample: augmentation is meant to perturb geometry, and reduction cannot
    recover structure a degenerate variant would prune away.  A group with
    no usable sample at all fails training, naming the group.
    """
    from .graph_core import structural_complexity

    settings = cfg.reduction_settings()
    concepts = []
    for label in sorted(groups, key=lambda s: (len(s), s)):
        graphs: list[ContourGraph] = []
        base_complexity = 0
        for source, image, is_base in groups[label]:
            try:
                g = _vectorize_with_source(image, source, cfg)
            except (DisconnectedGraph, DegenerateBounds) as exc:
                logger.warning("concept %s: %s failed vectorization (%s)", label, source, exc)
                continue
            if is_base:
                base_complexity = structural_complexity(g)
            elif structural_complexity(g) < base_complexity:
                logger.warning(
                    "concept %s: %s lost structure under augmentation, skipped", label, source
                )
                continue
            graphs.append(g)
        if not graphs:
            raise TrainingError(f"concept {label!r}: every sample failed vectorization")
        try:
            concepts.append(train_concept(graphs, label, settings))
        except ContourGraphError as exc:
            raise TrainingError(f"concept {label!r}: {exc}") from exc
    return ConceptLibrary(concepts)


# --- evaluation ------------------------------------------------------------------

@dataclass
class PerClassMetrics:
    precision: float
    recall: float
    f1: float
    count: int


@dataclass
class EvaluationResult:
    accuracy: float  # percentages
    precision: float
    recall: float
    f1: float
    per_class: dict[str, PerClassMetrics]
    classes: list[str]
    confusion: np.ndarray  # rows = true, cols = predicted
    failed_count: int
    classified_count: int
    mean_inference_time: float

    def to_json_dict(self, include_timing: bool = False) -> dict:
        doc = {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "per_class": {
                cls: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "count": m.count,
                }
                for cls, m in sorted(self.per_class.items())
            },
            "classes": self.classes,
            "confusion": self.confusion.tolist(),
            "failed_count": self.failed_count,
            "classified_count": self.classified_count,
        }
        if include_timing:
            doc["mean_inference_time"] = self.mean_inference_time
        return doc

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json_dict(include_timing), indent=2, sort_keys=True) + "\n"

    def confusion_csv(self) -> str:
        lines = ["true\\predicted," + ",".join(self.classes)]
        for i, cls in enumerate(self.classes):
            lines.append(cls + "," + ",".join(str(int(v)) for v in self.confusion[i]))
        return "\n".join(lines) + "\n"

    def confusion_count(self, true_class: str, predicted_class: str) -> int:
        return int(
            self.confusion[self.classes.index(true_class), self.classes.index(predicted_class)]
        )


def metrics_from_confusion(
    confusion: np.ndarray, classes: list[str]
) -> tuple[float, float, float, float, dict[str, PerClassMetrics]]:
    """Support-weighted accuracy/precision/recall/F1 from a confusion matrix.

    With support weighting, the aggregate recall equals accuracy by
    definition, which the tests rely on.
    """
    total = confusion.sum()
    diag = np.diag(confusion).astype(np.float64)
    row = confusion.sum(axis=1).astype(np.float64)
    col = confusion.sum(axis=0).astype(np.float64)
    per_class: dict[str, PerClassMetrics] = {}
    weighted_p = weighted_r = weighted_f = 0.0
    for i, cls in enumerate(classes):
        precision = diag[i] / col[i] if col[i] else 0.0
        recall = diag[i] / row[i] if row[i] else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cls] = PerClassMetrics(100.0 * precision, 100.0 * recall, 100.0 * f1, int(row[i]))
        weighted_p += row[i] * precision
        weighted_r += row[i] * recall
        weighted_f += row[i] * f1
    accuracy = 100.0 * diag.sum() / total if total else 0.0
    scale = 100.0 / total if total else 0.0
    return accuracy, weighted_p * scale, weighted_r * scale, weighted_f * scale, per_class


def evaluate(
    library: ConceptLibrary,
    test: DatasetSlice,
    cfg: Config,
    budget: float | None = None,
    explain_stream=None,
) -> EvaluationResult:
    """Classify every test image; aggregate metrics and failures."""
    budget = cfg.budget_seconds() if budget is None else budget
    cost_cfg = cfg.cost_config()
    classes = sorted(
        {str(lbl) for lbl in test.labels} | set(library.class_map.values()),
        key=lambda s: (len(s), s),
    )
    index = {cls: i for i, cls in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    failed = 0
    classified = 0
    elapsed_total = 0.0
    for pos, (image, lbl) in enumerate(zip(test.images, test.labels)):
        start = time.monotonic()
        try:
            g = vectorize_image(
                image,
                threshold=cfg.get_float("vectorize.threshold"),
                corner_angle=cfg.get_float("vectorize.corner_angle"),
            )
        except (DisconnectedGraph, DegenerateBounds) as exc:
            failed += 1
            logger.info("test image %d failed vectorization (%s)", pos, exc)
            continue
        report = classify(g, library, cost_cfg, budget)
        elapsed_total += time.monotonic() - start
        classified += 1
        confusion[index[str(lbl)], index[report.winner_class]] += 1
        if explain_stream is not None:
            doc = report.to_json_dict()
            doc["image_index"] = pos
            doc["true_class"] = str(lbl)
            explain_stream.write(json.dumps(doc, sort_keys=True) + "\n")
    accuracy, precision, recall, f1, per_class = metrics_from_confusion(confusion, classes)
    return EvaluationResult(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        per_class=per_class,
        classes=classes,
        confusion=confusion,
        failed_count=failed,
        classified_count=classified,
        mean_inference_time=elapsed_total / classified if classified else 0.0,
    )
