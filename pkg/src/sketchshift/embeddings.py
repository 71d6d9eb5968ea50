"""Word vectors for category labels and cosine similarity between them."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, MissingToken
from .sketch import normalize_label


@dataclass(frozen=True)
class EmbeddingStore:
    """Immutable token -> vector table for the active label vocabulary."""

    dimension: int
    table: dict[str, np.ndarray]

    def vector(self, label: str) -> np.ndarray:
        key = normalize_label(label)
        try:
            return self.table[key]
        except KeyError:
            raise MissingToken([key]) from None


def load_embeddings(path, vocabulary) -> EmbeddingStore:
    """Load vectors for a label vocabulary from a text embedding file.

    Format: header ``N D`` then N lines of ``token v1 ... vD``. A multi-word
    label such as ``aircraft_carrier`` resolves to its own token when present,
    otherwise to the mean of its parts' vectors. Raises MissingToken listing
    every label that cannot be resolved either way.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such embedding file: {path}")
    raw: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}: expected header 'N D'")
        try:
            n_rows, dim = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError(f"{path}: expected integer header 'N D'") from None
        if n_rows <= 0 or dim <= 0:
            raise FormatError(f"{path}: header must declare positive N and D")
        for i in range(n_rows):
            line = fh.readline()
            if not line:
                raise FormatError(f"{path}: declared {n_rows} rows, found {i}")
            fields = line.split()
            if len(fields) != dim + 1:
                raise FormatError(
                    f"{path} row {i + 1}: expected token plus {dim} values"
                )
            try:
                vec = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError:
                raise FormatError(f"{path} row {i + 1}: non-numeric value") from None
            if not np.all(np.isfinite(vec)) or np.linalg.norm(vec) == 0.0:
                raise FormatError(f"{path} row {i + 1}: degenerate vector")
            raw[fields[0]] = vec

    table: dict[str, np.ndarray] = {}
    missing: list[str] = []
    for label in sorted({normalize_label(v) for v in vocabulary}):
        if label in raw:
            table[label] = raw[label]
            continue
        parts = label.split("_")
        if len(parts) > 1 and all(p in raw for p in parts):
            table[label] = np.mean([raw[p] for p in parts], axis=0)
            continue
        missing.append(label)
    if missing:
        raise MissingToken(missing)
    return EmbeddingStore(dimension=dim, table=table)


def cosine(a: str, b: str, store: EmbeddingStore) -> float:
    """Raw cosine similarity between two labels' vectors (can be negative)."""
    va = store.vector(a)
    vb = store.vector(b)
    return float(np.dot(va, vb) / (np.linalg.norm(va) * np.linalg.norm(vb)))


def conceptual_similarity(a: str, b: str, store: EmbeddingStore) -> float:
    """Cosine similarity clamped below at zero.

    Clamping keeps the value on the same [0, 1] scale as visual similarity
    so the two can be compared directly; use :func:`cosine` when the raw
    value is needed for diagnostics.
    """
    return max(0.0, cosine(a, b, store))
