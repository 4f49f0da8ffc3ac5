"""Exception types shared across the toolkit."""


class PastewatchError(Exception):
    """Base class for all domain errors."""

    code = "ERROR"


class ParseError(PastewatchError):
    code = "PARSE_ERROR"

    def __init__(self, message, position, expected=None):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position
        self.expected = tuple(sorted(expected)) if expected else ()


class EmptyBag(PastewatchError):
    code = "EMPTY_BAG"


class InsufficientCandidates(PastewatchError):
    code = "INSUFFICIENT_CANDIDATES"


class ManifestResolutionError(PastewatchError):
    code = "MANIFEST_RESOLUTION_ERROR"


class SchemaMismatch(PastewatchError):
    code = "SCHEMA_MISMATCH"


class CorruptModel(PastewatchError):
    code = "CORRUPT_MODEL"


class DegenerateDataset(PastewatchError):
    code = "DEGENERATE_DATASET"


class DegenerateLabels(PastewatchError):
    code = "DEGENERATE_LABELS"


class EmptyOutOfBag(PastewatchError):
    code = "EMPTY_OUT_OF_BAG"


class DegenerateCovariance(PastewatchError):
    code = "DEGENERATE_COVARIANCE"


class ShapeError(PastewatchError):
    code = "SHAPE_ERROR"


class NotExtractable(PastewatchError):
    code = "NOT_EXTRACTABLE"

    #: reason is one of "MultipleLiveOut", "IllegalJump", "ContainsReturn"
    def __init__(self, reason):
        super().__init__(f"fragment not extractable: {reason}")
        self.reason = reason


class NameCollision(PastewatchError):
    code = "NAME_COLLISION"


class StaleSpans(PastewatchError):
    code = "STALE_SPANS"


class UnknownFile(PastewatchError):
    code = "UNKNOWN_FILE"


class InvalidState(PastewatchError):
    code = "INVALID_STATE"


class ConfigError(PastewatchError):
    code = "CONFIG_ERROR"
