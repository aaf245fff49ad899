"""The three-level explanation pipeline.

Level 1 scores every d-connected evidence node by how far retracting it
moves the target's posterior, picks the significant ones with a
self-calibrating threshold, and classifies each as supporting or
conflicting with the combined change. Level 2 finds the unobserved
Markov-blanket members through which that influence travels. Level 3
repeats the conflict analysis of the significant evidence against each
of those intermediate variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import ConfigError, DistributionMismatchError, EvidenceError, UnknownNodeError
from .graph import d_connected, flow_carriers, markov_blanket
from .inference import Distribution, QueryBundle, cached_posterior, query_bundle
from .metrics import MetricFn, get_metric, hellinger, partial_hellinger
from .model import EvidenceSet, Network
from .report import (
    ConflictCategory,
    ExplanationReport,
    ImpactRecord,
    IntermediateRecord,
    ReportWarning,
    ThresholdResult,
)

# Decreasing fractions of the prior-to-posterior change tried in turn until
# at least half of the d-connected evidence qualifies as significant.
DEFAULT_ALPHA_LADDER = (
    0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.01, 0.005, 0.001,
)

# Per-state changes smaller than this are direction noise, compatible with
# either sign.
SIGN_EPSILON = 1e-9


@dataclass(frozen=True)
class ExplainConfig:
    alpha_ladder: tuple[float, ...] = DEFAULT_ALPHA_LADDER
    metric: str = "hellinger"
    focus_states: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        _validate_ladder(self.alpha_ladder)
        get_metric(self.metric)


def _validate_ladder(ladder: Sequence[float]) -> None:
    if not ladder:
        raise ConfigError("alpha ladder must not be empty")
    if any(not (0.0 < a <= 1.0) for a in ladder):
        raise ConfigError("alpha values must lie in (0, 1]")
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ConfigError("alpha ladder must be strictly decreasing")


def per_state_delta(p: Distribution, q: Distribution) -> tuple[float, ...]:
    """Per-state change p - q; the entries sum to zero."""
    if len(p.mass) != len(q.mass):
        raise DistributionMismatchError(
            f"state spaces differ: {len(p.mass)} vs {len(q.mass)} states"
        )
    return tuple(a - b for a, b in zip(p.mass, q.mass))


def impact_of(bundle: QueryBundle, evidence_node: str, metric: MetricFn = hellinger) -> float:
    """Distance the posterior moves when one observation is retracted."""
    if evidence_node not in bundle.retracted:
        raise UnknownNodeError(evidence_node)
    return metric(bundle.joint_posterior, bundle.retracted[evidence_node])


def overall_impact(bundle: QueryBundle, metric: MetricFn = hellinger) -> float:
    """Distance between the posterior with all evidence and the prior."""
    return metric(bundle.joint_posterior, bundle.prior)


def significance_threshold(
    posterior: Distribution,
    prior: Distribution,
    alpha: float,
    metric: MetricFn = hellinger,
) -> ThresholdResult:
    """Threshold at a fraction ``alpha`` of the prior-to-posterior change.

    The reference point G sits componentwise between the posterior and the
    prior; the threshold is the metric distance from the posterior to G.
    """
    if not (0.0 < alpha <= 1.0):
        raise ConfigError(f"alpha must lie in (0, 1], got {alpha!r}")
    if len(posterior.mass) != len(prior.mass):
        raise DistributionMismatchError(
            f"state spaces differ: {len(posterior.mass)} vs {len(prior.mass)} states"
        )
    reference = Distribution(
        node=posterior.node,
        mass=tuple(p - alpha * (p - q) for p, q in zip(posterior.mass, prior.mass)),
    )
    return ThresholdResult(
        alpha=alpha, theta=metric(posterior, reference), reference_point=reference
    )


def select_significant(
    impacts: Mapping[str, float],
    posterior: Distribution,
    prior: Distribution,
    ladder: Sequence[float] = DEFAULT_ALPHA_LADDER,
    metric: MetricFn = hellinger,
) -> tuple[list[str], ThresholdResult]:
    """Walk the alpha ladder until at least half the evidence qualifies.

    Returns the significant evidence ordered by descending impact (ties by
    node id) and the threshold that selected it. If even the smallest
    alpha selects fewer than half, that final result is returned flagged
    ``ladder_exhausted`` instead of failing: an explanation produced under
    time pressure must not abort.
    """
    _validate_ladder(ladder)
    if not impacts:
        raise ValueError("impacts must be non-empty")
    needed = math.ceil(len(impacts) / 2)
    threshold = None
    significant: list[str] = []
    for alpha in ladder:
        threshold = significance_threshold(posterior, prior, alpha, metric)
        significant = [e for e, im in impacts.items() if im >= threshold.theta]
        if len(significant) >= needed:
            break
    else:
        threshold = replace(threshold, ladder_exhausted=True)
    significant.sort(key=lambda e: (-impacts[e], e))
    return significant, threshold


def classify_conflict(
    delta_e: Sequence[float],
    delta_all: Sequence[float],
    impact_e: float,
    impact_all: float,
    partial_impact,
) -> ConflictCategory:
    """Assign exactly one conflict category.

    ``delta_e`` is the per-state change from retracting one observation,
    ``delta_all`` from retracting all of them. Same signs everywhere means
    the item works with the rest of the evidence (Dominant when it alone
    outweighs the combined impact); opposite signs everywhere means it
    works against it; anything else is mixed, resolved by comparing the
    restricted impact over the consistent states with that over the
    conflicting ones via ``partial_impact(state_indices)``.
    """
    if len(delta_e) != len(delta_all):
        raise DistributionMismatchError(
            f"delta vectors differ in length: {len(delta_e)} vs {len(delta_all)}"
        )

    def sign(v: float) -> int:
        if abs(v) < SIGN_EPSILON:
            return 0
        return 1 if v > 0 else -1

    agree = []
    for de, da in zip(delta_e, delta_all):
        se, sa = sign(de), sign(da)
        if se == 0 or sa == 0:
            agree.append(None)  # compatible with either direction
        else:
            agree.append(se == sa)

    if all(a is not False for a in agree):
        if impact_e > impact_all:
            return ConflictCategory.DOMINANT
        return ConflictCategory.CONSISTENT
    if all(a is not True for a in agree):
        return ConflictCategory.CONFLICTING

    consistent_states = [i for i, a in enumerate(agree) if a is not False]
    conflicting_states = [i for i, a in enumerate(agree) if a is False]
    if partial_impact(consistent_states) > partial_impact(conflicting_states):
        return ConflictCategory.MIXED_CONSISTENT
    return ConflictCategory.MIXED_CONFLICTING


def select_intermediates(
    net: Network,
    evidence: EvidenceSet,
    target: str,
    significant_evidence: Sequence[str],
) -> list[str]:
    """Unobserved Markov-blanket members that carry the information flow.

    A member qualifies when it is d-connected to the target given the
    observed set and lies on an active walk from at least one significant
    evidence node to the target (that node's own observation removed, the
    rest in place). Returned in node-id order.
    """
    if target in evidence:
        raise EvidenceError(f"target node {target!r} is itself observed")
    observed = frozenset(evidence.node_ids())
    candidates = [
        m
        for m in sorted(markov_blanket(net, target))
        if m not in observed and d_connected(net, m, target, observed)
    ]
    if not candidates:
        return []
    carriers: set[str] = set()
    for e in significant_evidence:
        carriers.update(flow_carriers(net, e, target, observed - {e}))
    return [m for m in candidates if m in carriers]


def _resolve_focus(
    net: Network, node_id: str, posterior: Distribution, overrides: Mapping[str, str]
) -> int:
    if node_id in overrides:
        return net.node(node_id).state_index(overrides[node_id])
    return posterior.argmax()


def _validate_focus_overrides(net: Network, overrides: Mapping[str, str]) -> None:
    for node_id, state in overrides.items():
        if node_id not in net:
            raise ConfigError(f"focus state override names unknown node {node_id!r}")
        node = net.node(node_id)
        if state not in node.states:
            raise ConfigError(
                f"focus state override for {node_id!r} names unknown state {state!r}; "
                f"valid states: {list(node.states)}"
            )


def explain(
    net: Network,
    evidence: EvidenceSet,
    targets: Sequence[str],
    config: ExplainConfig | None = None,
) -> list[ExplanationReport]:
    """Produce one explanation report per target."""
    config = config or ExplainConfig()
    if len(evidence) == 0:
        raise EvidenceError("evidence must be non-empty")
    _validate_focus_overrides(net, config.focus_states)
    for target in targets:
        net.node(target)
        if target in evidence:
            raise EvidenceError(f"target node {target!r} is itself observed")
    metric = get_metric(config.metric)
    return [_explain_one(net, evidence, t, config, metric) for t in targets]


def _explain_one(
    net: Network,
    evidence: EvidenceSet,
    target: str,
    config: ExplainConfig,
    metric: MetricFn,
) -> ExplanationReport:
    cache: dict = {}
    bundle = query_bundle(net, evidence, target, cache=cache)
    observed = frozenset(evidence.node_ids())

    connected: list[str] = []
    skipped: list[str] = []
    for item in evidence.items:
        if d_connected(net, item.node, target, observed - {item.node}):
            connected.append(item.node)
        else:
            skipped.append(item.node)

    joint, prior = bundle.joint_posterior, bundle.prior
    total_impact = metric(joint, prior)
    delta_all = per_state_delta(joint, prior)
    warnings: list[ReportWarning] = []

    if connected:
        impacts = {e: metric(joint, bundle.retracted[e]) for e in connected}
        significant, threshold = select_significant(
            impacts, joint, prior, config.alpha_ladder, metric
        )
    else:
        impacts = {}
        significant = []
        threshold = significance_threshold(joint, prior, config.alpha_ladder[0], metric)
        warnings.append(
            ReportWarning(
                code="all_evidence_d_separated",
                message=f"every evidence node is d-separated from target {target!r}",
            )
        )

    significant_set = set(significant)
    level1 = []
    for e in sorted(connected, key=lambda n: (-impacts[n], n)):
        retracted = bundle.retracted[e]
        delta_e = per_state_delta(joint, retracted)
        category = None
        if e in significant_set:
            category = classify_conflict(
                delta_e,
                delta_all,
                impacts[e],
                total_impact,
                lambda idx, q=retracted: partial_hellinger(joint, q, idx),
            )
        item = evidence.item(e)
        level1.append(
            ImpactRecord(
                evidence_node=e,
                evidence_label=net.node(e).label,
                observed_value=item.display,
                impact=impacts[e],
                significant=e in significant_set,
                category=category,
                per_state_delta=delta_e,
            )
        )

    level2_3 = []
    for m in select_intermediates(net, evidence, target, significant):
        m_node = net.node(m)
        m_posterior = cached_posterior(net, evidence, m, cache)
        m_prior = cached_posterior(net, EvidenceSet(items=()), m, cache)
        m_total = metric(m_posterior, m_prior)
        m_delta_all = per_state_delta(m_posterior, m_prior)
        # The significant set is not reassessed per intermediate; only the
        # d-connected subset of it is analysed.
        linked = [e for e in significant if d_connected(net, e, m, observed - {e})]
        per_impact: dict[str, float] = {}
        per_category: dict[str, ConflictCategory] = {}
        for e in linked:
            m_retracted = cached_posterior(net, evidence.without(e), m, cache)
            per_impact[e] = metric(m_posterior, m_retracted)
            per_category[e] = classify_conflict(
                per_state_delta(m_posterior, m_retracted),
                m_delta_all,
                per_impact[e],
                m_total,
                lambda idx, q=m_retracted: partial_hellinger(m_posterior, q, idx),
            )
        ordered = sorted(linked, key=lambda e: (-per_impact[e], e))
        level2_3.append(
            IntermediateRecord(
                node=m,
                label=m_node.label,
                states=m_node.states,
                prior=m_prior,
                posterior=m_posterior,
                focus_state=_resolve_focus(net, m, m_posterior, config.focus_states),
                overall_impact=m_total,
                connected_significant_evidence=tuple(ordered),
                per_evidence_category={e: per_category[e] for e in ordered},
                per_evidence_impact={e: per_impact[e] for e in ordered},
            )
        )

    target_node = net.node(target)
    return ExplanationReport(
        target=target,
        target_label=target_node.label,
        target_states=target_node.states,
        target_focus_state=_resolve_focus(net, target, joint, config.focus_states),
        metric=config.metric,
        prior=prior,
        posterior=joint,
        overall_impact=total_impact,
        threshold=threshold,
        level1=tuple(level1),
        level2_3=tuple(level2_3),
        skipped_evidence=tuple(skipped),
        warnings=tuple(warnings),
    )
