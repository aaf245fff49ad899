"""Explanation of reasoning for Bayesian network predictions.

Given a network, observed evidence and a target variable, this package
computes which evidence significantly supports or conflicts with the
prediction, through which unobserved variables the information flows,
and how each significant finding acts on those intermediates — as
structured reports, verbal text, and an interactive HTTP service.
"""

from .errors import (
    BnExplainError,
    ConfigError,
    DistributionMismatchError,
    EvidenceError,
    InconsistentEvidenceError,
    MetricUndefinedError,
    NetworkFormatError,
    NetworkValidationError,
    UnknownNodeError,
)
from .explain import (
    DEFAULT_ALPHA_LADDER,
    ExplainConfig,
    classify_conflict,
    explain,
    impact_of,
    overall_impact,
    per_state_delta,
    select_intermediates,
    select_significant,
    significance_threshold,
)
from .graph import d_connected, d_separated, markov_blanket
from .inference import Distribution, QueryBundle, posterior, query_bundle
from .metrics import hellinger, kl_divergence, partial_hellinger
from .model import (
    EvidenceSet,
    Network,
    NodeKind,
    NodeSpec,
    bin_value,
    load_evidence,
    load_network,
    network_from_dict,
    network_to_json,
    parse_network,
    serialize_network,
)
from .render import RenderConfig, RenderedExplanation, relative_change_percent, render
from .report import (
    REPORT_VERSION,
    ConflictCategory,
    ExplanationReport,
    ImpactRecord,
    IntermediateRecord,
    ThresholdResult,
    report_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "BnExplainError",
    "ConfigError",
    "ConflictCategory",
    "DEFAULT_ALPHA_LADDER",
    "Distribution",
    "DistributionMismatchError",
    "EvidenceError",
    "EvidenceSet",
    "ExplainConfig",
    "ExplanationReport",
    "ImpactRecord",
    "InconsistentEvidenceError",
    "IntermediateRecord",
    "MetricUndefinedError",
    "Network",
    "NetworkFormatError",
    "NetworkValidationError",
    "NodeKind",
    "NodeSpec",
    "QueryBundle",
    "REPORT_VERSION",
    "RenderConfig",
    "RenderedExplanation",
    "ThresholdResult",
    "UnknownNodeError",
    "bin_value",
    "classify_conflict",
    "d_connected",
    "d_separated",
    "explain",
    "hellinger",
    "impact_of",
    "kl_divergence",
    "load_evidence",
    "load_network",
    "markov_blanket",
    "network_from_dict",
    "network_to_json",
    "overall_impact",
    "parse_network",
    "partial_hellinger",
    "per_state_delta",
    "posterior",
    "query_bundle",
    "relative_change_percent",
    "render",
    "report_to_dict",
    "select_intermediates",
    "select_significant",
    "serialize_network",
    "significance_threshold",
]
