"""Cross-category sketch retrieval with controllable novelty.

The pipeline: sketches become feature vectors, each category's vectors are
clustered, centroid distances across categories form a reusable matrix, and
a query walks that matrix to find a response sketch from another category
at a requested novelty level (low, intermediate, high).
"""

from .engine import Novelty, ShiftCandidate, ShiftResponse, conceptual_shift
from .errors import SketchShiftError
from .index import ClusterId, VisualIndex, build_index, load_index, save_index
from .sketch import DeltaEvent, Point, Sketch, Stroke

__version__ = "0.1.0"

__all__ = [
    "ClusterId",
    "DeltaEvent",
    "Novelty",
    "Point",
    "ShiftCandidate",
    "ShiftResponse",
    "Sketch",
    "SketchShiftError",
    "Stroke",
    "VisualIndex",
    "build_index",
    "conceptual_shift",
    "load_index",
    "save_index",
    "__version__",
]
