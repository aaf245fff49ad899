"""Structured explanation reports and their canonical serialization."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .inference import Distribution

REPORT_VERSION = 1


class ConflictCategory(str, Enum):
    """How one piece of significant evidence relates to the combined change.

    Dominant and Consistent evidence push the target the same way as the
    evidence as a whole; Conflicting evidence pushes the other way; Mixed
    categories arise only for targets with three or more states, where the
    per-state change directions disagree.
    """

    DOMINANT = "dominant"
    CONSISTENT = "consistent"
    CONFLICTING = "conflicting"
    MIXED_CONSISTENT = "mixed_consistent"
    MIXED_CONFLICTING = "mixed_conflicting"


@dataclass(frozen=True)
class ThresholdResult:
    """Significance threshold derived from a reference point between the
    posterior and the prior."""

    alpha: float
    theta: float
    reference_point: Distribution
    ladder_exhausted: bool = False


@dataclass(frozen=True)
class ImpactRecord:
    """Impact analysis for one d-connected evidence node."""

    evidence_node: str
    evidence_label: str
    observed_value: str
    impact: float
    significant: bool
    category: ConflictCategory | None
    per_state_delta: tuple[float, ...]


@dataclass(frozen=True)
class IntermediateRecord:
    """An unobserved carrier of information flow and the per-evidence
    analysis repeated against it."""

    node: str
    label: str
    states: tuple[str, ...]
    prior: Distribution
    posterior: Distribution
    focus_state: int
    overall_impact: float
    connected_significant_evidence: tuple[str, ...]
    per_evidence_category: Mapping[str, ConflictCategory]
    per_evidence_impact: Mapping[str, float]


@dataclass(frozen=True)
class ReportWarning:
    code: str
    message: str


@dataclass(frozen=True)
class ExplanationReport:
    """Full three-level result for one target."""

    target: str
    target_label: str
    target_states: tuple[str, ...]
    target_focus_state: int
    metric: str
    prior: Distribution
    posterior: Distribution
    overall_impact: float
    threshold: ThresholdResult
    level1: tuple[ImpactRecord, ...]
    level2_3: tuple[IntermediateRecord, ...]
    skipped_evidence: tuple[str, ...]
    warnings: tuple[ReportWarning, ...] = ()


def report_to_dict(report: ExplanationReport) -> dict:
    """Canonical machine-readable form with stable field order."""
    return {
        "report_version": REPORT_VERSION,
        "target": report.target,
        "target_label": report.target_label,
        "target_states": list(report.target_states),
        "target_focus_state": report.target_focus_state,
        "metric": report.metric,
        "prior": list(report.prior.mass),
        "posterior": list(report.posterior.mass),
        "overall_impact": report.overall_impact,
        "threshold": {
            "alpha": report.threshold.alpha,
            "theta": report.threshold.theta,
            "reference_point": list(report.threshold.reference_point.mass),
            "ladder_exhausted": report.threshold.ladder_exhausted,
        },
        "level1": [
            {
                "node": rec.evidence_node,
                "label": rec.evidence_label,
                "value": rec.observed_value,
                "impact": rec.impact,
                "significant": rec.significant,
                "category": rec.category.value if rec.category else None,
                "per_state_delta": list(rec.per_state_delta),
            }
            for rec in report.level1
        ],
        "level2_3": [
            {
                "node": rec.node,
                "label": rec.label,
                "states": list(rec.states),
                "prior": list(rec.prior.mass),
                "posterior": list(rec.posterior.mass),
                "focus_state": rec.focus_state,
                "overall_impact": rec.overall_impact,
                "evidence": [
                    {
                        "node": e,
                        "impact": rec.per_evidence_impact[e],
                        "category": rec.per_evidence_category[e].value,
                    }
                    for e in rec.connected_significant_evidence
                ],
            }
            for rec in report.level2_3
        ],
        "skipped_evidence": list(report.skipped_evidence),
        "warnings": [{"code": w.code, "message": w.message} for w in report.warnings],
    }
