"""Few-shot contour-image classification with attributed graph prototypes.

Images become bipartite Point/Line graphs; a handful of samples per class
reduce into one concept graph each; classification minimizes a budgeted
graph edit distance against the concept library, and every decision is
explainable from the explicit graph structure.
"""

from .classify import ClassificationReport, classify, explain
from .concept import (
    ConceptGraph,
    ConceptLibrary,
    ReductionSettings,
    init_concept,
    load_library,
    merge_sample,
    save_library,
    train_concept,
)
from .ged import CostConfig, GedResult, exact_ged, ged_search
from .graph_core import (
    AttributeValue,
    Category,
    ContourGraph,
    NodeRecord,
    PointKind,
    Range,
    Scalar,
    TagSet,
    canonical_traversal,
    deserialize,
    serialize,
    structural_complexity,
    to_dot,
    validate,
)
from .vectorize import vectorize_image

__version__ = "0.1.0"

__all__ = [
    "AttributeValue",
    "Category",
    "ClassificationReport",
    "ConceptGraph",
    "ConceptLibrary",
    "ContourGraph",
    "CostConfig",
    "GedResult",
    "NodeRecord",
    "PointKind",
    "Range",
    "ReductionSettings",
    "Scalar",
    "TagSet",
    "canonical_traversal",
    "classify",
    "deserialize",
    "exact_ged",
    "explain",
    "ged_search",
    "init_concept",
    "load_library",
    "merge_sample",
    "save_library",
    "serialize",
    "structural_complexity",
    "to_dot",
    "train_concept",
    "validate",
    "vectorize_image",
]
