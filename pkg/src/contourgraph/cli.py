"""Command-line interface.

Subcommands: vectorize, train, classify, evaluate, export-concepts,
synth-data.  Image inputs are PNG files or rows of IDX image files
(`file.idx:N` or --index).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import datagen, harness
from .classify import classify, explain
from .concept import load_library, save_library
from .config import load_config
from .errors import ContourGraphError
from .graph_core import serialize, to_dot
from .vectorize import vectorize_image


def _load_raster(path: str, index: int) -> np.ndarray:
    if path.endswith(".png"):
        from PIL import Image

        with Image.open(path) as im:
            return np.asarray(im.convert("L"))
    # IDX payload row; labels are not needed to read one image
    images = harness.load_idx_images(path)
    if not 0 <= index < len(images):
        raise ContourGraphError(f"{path} has {len(images)} rows; index {index} out of range")
    return images[index]


def cmd_vectorize(args) -> int:
    image = _load_raster(args.input, args.index)
    g = vectorize_image(image, threshold=args.threshold, corner_angle=args.corner_angle)
    text = serialize(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    train = harness.load_idx(args.images, args.labels)
    groups = harness.build_groups(train, cfg)
    library = harness.train_library(groups, cfg)
    save_library(library, args.out)
    print(f"trained {len(library.concepts)} concepts -> {args.out}")
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)
        for concept in library.concepts:
            path = os.path.join(args.dot_dir, f"{concept.label}.dot")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(to_dot(concept.graph))
    return 0


def cmd_classify(args) -> int:
    cfg = load_config(args.config)
    library = load_library(args.library)
    image = _load_raster(args.image, args.index)
    g = vectorize_image(
        image,
        threshold=cfg.get_float("vectorize.threshold"),
        corner_angle=cfg.get_float("vectorize.corner_angle"),
    )
    report = classify(g, library, cfg.cost_config(), args.budget_ms / 1000.0)
    print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    if args.explain:
        sys.stdout.write(explain(report))
    return 0


def cmd_evaluate(args) -> int:
    cfg = load_config(args.config)
    library = load_library(args.library)
    test = harness.load_idx(args.images, args.labels)
    if args.limit:
        test = harness.DatasetSlice(test.images[: args.limit], test.labels[: args.limit], "test")
    os.makedirs(args.out_dir, exist_ok=True)
    explain_stream = None
    if args.explain:
        explain_stream = open(os.path.join(args.out_dir, "explanations.jsonl"), "w", encoding="utf-8")
    try:
        result = harness.evaluate(library, test, cfg, explain_stream=explain_stream)
    finally:
        if explain_stream is not None:
            explain_stream.close()
    with open(os.path.join(args.out_dir, "metrics.json"), "w", encoding="utf-8") as fh:
        fh.write(result.to_json())
    with open(os.path.join(args.out_dir, "confusion.csv"), "w", encoding="utf-8") as fh:
        fh.write(result.confusion_csv())
    with open(os.path.join(args.out_dir, "timing.json"), "w", encoding="utf-8") as fh:
        json.dump({"mean_inference_time": result.mean_inference_time}, fh)
        fh.write("\n")
    print(
        f"accuracy {result.accuracy:.2f}%  precision {result.precision:.2f}%  "
        f"recall {result.recall:.2f}%  f1 {result.f1:.2f}%  "
        f"failed {result.failed_count}/{len(test)}"
    )
    return 0


def cmd_export_concepts(args) -> int:
    library = load_library(args.library)
    os.makedirs(args.out_dir, exist_ok=True)
    for concept in library.concepts:
        path = os.path.join(args.out_dir, f"{concept.label}.dot")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(to_dot(concept.graph))
        print(path)
    return 0


def cmd_synth_data(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    classes = tuple(args.classes.split(","))
    train_images, train_labels = datagen.make_dataset(classes, args.train_per_class, args.seed, salt=0)
    test_images, test_labels = datagen.make_dataset(classes, args.test_per_class, args.seed, salt=1)
    paths = {
        "train_images": os.path.join(args.out_dir, "train-images.idx"),
        "train_labels": os.path.join(args.out_dir, "train-labels.idx"),
        "test_images": os.path.join(args.out_dir, "test-images.idx"),
        "test_labels": os.path.join(args.out_dir, "test-labels.idx"),
    }
    harness.write_idx(train_images, train_labels, paths["train_images"], paths["train_labels"])
    harness.write_idx(test_images, test_labels, paths["test_images"], paths["test_labels"])
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contourgraph")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vectorize", help="convert one raster into a graph JSON document")
    p.add_argument("--input", required=True)
    p.add_argument("--index", type=int, default=0, help="row index for IDX inputs")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--corner-angle", type=float, default=45.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_vectorize)

    p = sub.add_parser("train", help="train a concept library from IDX data")
    p.add_argument("--config", required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dot-dir")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify one image against a library")
    p.add_argument("--image", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--library", required=True)
    p.add_argument("--budget-ms", type=int, default=2000)
    p.add_argument("--config")
    p.add_argument("--explain", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="batch evaluation with metrics and confusion matrix")
    p.add_argument("--config", required=True)
    p.add_argument("--library", required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--explain", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export-concepts", help="write one DOT file per concept")
    p.add_argument("--library", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_export_concepts)

    p = sub.add_parser("synth-data", help="generate the synthetic digit dataset as IDX files")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--classes", default=",".join(datagen.CLASSES))
    p.add_argument("--train-per-class", type=int, default=30)
    p.add_argument("--test-per-class", type=int, default=100)
    p.set_defaults(func=cmd_synth_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContourGraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
