"""Exception hierarchy for network loading, inference and metrics."""


class BnExplainError(Exception):
    """Base class for all errors raised by this package."""


class NetworkFormatError(BnExplainError):
    """The network or evidence document is not well-formed (syntax, schema)."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NetworkValidationError(BnExplainError):
    """The document parsed but violates a structural invariant.

    Covers cycles, unknown parents, duplicate node ids, bad state lists
    and CPT shape or row-sum violations.
    """


class UnknownNodeError(BnExplainError):
    """A node id was referenced that does not exist in the network."""

    def __init__(self, node_id):
        super().__init__(f"unknown node id: {node_id!r}")
        self.node_id = node_id


class EvidenceError(BnExplainError):
    """An evidence assignment is invalid for the given network."""


class InconsistentEvidenceError(BnExplainError):
    """The observed evidence configuration has probability zero."""

    def __init__(self, message="inconsistent evidence: P(E) = 0"):
        super().__init__(message)


class DistributionMismatchError(BnExplainError):
    """Two distributions do not share the same state space."""


class MetricUndefinedError(BnExplainError):
    """The requested divergence is undefined for these inputs.

    Raised by the KL divergence when p places mass where q has none; the
    value is deliberately not clamped or patched.
    """


class ConfigError(BnExplainError):
    """An explanation or rendering configuration value is invalid."""
