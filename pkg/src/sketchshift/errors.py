"""Exception types shared across the package.

Every failure the library reports deliberately derives from
:class:`SketchShiftError`, so callers (CLI, service) can map the whole family
to exit codes / HTTP statuses without enumerating causes.
"""


class SketchShiftError(Exception):
    """Base class for all errors raised by this package."""


class EmptySketch(SketchShiftError):
    """A sketch with no strokes was passed where geometry is required."""


class EmptyInput(SketchShiftError):
    """An empty event sequence cannot be decoded."""


class DegenerateSketch(SketchShiftError):
    """All points coincide; the sketch has no extent to normalize."""


class FormatError(SketchShiftError):
    """A file does not match its declared interchange format."""


class EmptyCorpus(SketchShiftError):
    """No category files were found in the corpus directory."""


class DimensionMismatch(SketchShiftError):
    """Vector dimensions disagree with the declared dimension."""


class UnknownSketchRef(SketchShiftError):
    """A source id does not resolve to a known corpus sketch."""


class TooFewPoints(SketchShiftError):
    """Fewer vectors than requested clusters."""


class UnknownCategory(SketchShiftError):
    """A category label is not present in the index."""


class InsufficientCandidates(SketchShiftError):
    """Not enough cross-category clusters to rank or bucket."""


class MissingToken(SketchShiftError):
    """One or more labels have no resolvable embedding vector."""

    def __init__(self, tokens):
        self.tokens = tuple(tokens)
        super().__init__(f"no embedding vector for: {', '.join(self.tokens)}")


class VersionMismatch(SketchShiftError):
    """The index file was written by an incompatible format version."""


class CorruptIndex(SketchShiftError):
    """The index file is truncated or fails its checksum."""


class EmptyBucket(SketchShiftError):
    """The requested novelty bucket holds no candidates."""
