"""Exception hierarchy for stancecast.

All library errors derive from :class:`StancecastError` so callers can catch
one base class at API boundaries. Input/validation problems and internal
invariant violations are kept distinct for CLI exit-code mapping.
"""


class StancecastError(Exception):
    """Base class for all stancecast errors."""


class IdOutOfRangeError(StancecastError):
    """A node or topic id lies outside the dense id range of the graph."""


class SelfLoopError(StancecastError):
    """An edge (v, v) was supplied; self-loops are not allowed."""


class DuplicateEdgeError(StancecastError):
    """The same directed edge appears more than once."""


class ProfileLengthMismatchError(StancecastError):
    """A stance profile does not match the graph's topic count."""


class BadStanceValueError(StancecastError):
    """A stance code outside {-1, 0, 0.5, 1} was supplied."""


class LengthMismatchError(StancecastError):
    """Two profiles of different lengths were compared."""


class EmptyProfileError(StancecastError):
    """Similarity is undefined for zero-topic profiles."""


class SameNodeError(StancecastError):
    """Influence of a node on itself was requested."""


class ProbabilityOutOfRangeError(StancecastError):
    """An influence probability outside [0, 1] was supplied."""


class UnknownSenderError(StancecastError):
    """A stance transition was requested with an unknown (-1) sender stance."""


class InvalidSeedStanceError(StancecastError):
    """A seed stance must be known: one of {0, 0.5, 1}."""


class CountExceedsPoolError(StancecastError):
    """A sample of more elements than the pool holds was requested."""


class MissingKeyError(StancecastError):
    """A required configuration key is absent."""

    def __init__(self, key: str):
        super().__init__(f"missing required config key {key!r}")
        self.key = key


class RangeViolationError(StancecastError):
    """A configuration value lies outside its allowed range."""

    def __init__(self, key: str, value, allowed: str):
        super().__init__(f"config key {key!r} = {value!r} outside allowed {allowed}")
        self.key = key
        self.value = value
        self.allowed = allowed


class ParseError(StancecastError):
    """A data file could not be parsed; reports file, line and column."""

    def __init__(self, path, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path = str(path)
        self.line = line
        self.column = column


class InconsistentIdsError(StancecastError):
    """Ids referenced across dataset files do not line up."""


class InfeasibleEdgeCountError(StancecastError):
    """Requested more simple directed edges than n*(n-1)."""


class SchemaVersionMismatchError(StancecastError):
    """A trace file carries an unsupported schema version."""


class MissingTruthEntryError(StancecastError):
    """Ground truth does not cover a (node, topic) pair being scored."""


class EmptySeedsWarning(UserWarning):
    """No seed stances were provided; the run will produce no events."""
