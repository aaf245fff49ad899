"""Verbal rendering of explanation reports.

The output interleaves three ingredients: numeric data, fixed phrases
that repeat across scenarios, and dynamic text (node labels and state
names from the model file, upper-cased). The same content is emitted as
a machine-readable structure so a UI never has to re-parse the text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .errors import ConfigError
from .report import ConflictCategory, ExplanationReport, IntermediateRecord

# Below this, a prior is treated as negligible and relative change as
# meaningless; the narrative falls back to absolute phrasing.
NEGLIGIBLE_PRIOR = 1e-6

_GROUPS = (
    ("supporting", "Factors that support", (ConflictCategory.DOMINANT, ConflictCategory.CONSISTENT)),
    ("not_supporting", "Factors that do not support", (ConflictCategory.CONFLICTING,)),
    ("partially_supporting", "Factors that partially support", (ConflictCategory.MIXED_CONSISTENT,)),
    ("partially_not_supporting", "Factors that partially do not support", (ConflictCategory.MIXED_CONFLICTING,)),
)


@dataclass(frozen=True)
class RenderConfig:
    level: int = 3
    percent_precision: int = 0
    baseline_label: str = "an average patient"
    risk_phrases: Mapping[str, str] = field(default_factory=dict)
    focus_states: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.level not in (1, 2, 3):
            raise ConfigError(f"render level must be 1, 2 or 3, got {self.level!r}")
        if self.percent_precision < 0:
            raise ConfigError("percent precision must be non-negative")


@dataclass(frozen=True)
class RenderedExplanation:
    text: str
    structured: dict


class RelativeChange(NamedTuple):
    """Signed whole-percent change of the focus state relative to the prior."""

    percent: int
    direction: str
    prior_negligible: bool

    @property
    def phrase(self) -> str:
        return f"{abs(self.percent)}% {self.direction}"


def round_half_away(value: float, decimals: int = 0) -> float:
    factor = 10.0**decimals
    scaled = abs(value) * factor
    rounded = math.floor(scaled + 0.5)
    return math.copysign(rounded / factor, value) if value != 0 else 0.0


def relative_change_percent(posterior_focus: float, prior_focus: float) -> RelativeChange:
    """Relative change of the focus-state probability against the prior."""
    if prior_focus < NEGLIGIBLE_PRIOR:
        return RelativeChange(percent=0, direction="INCREASE", prior_negligible=True)
    pct = int(round_half_away(100.0 * (posterior_focus - prior_focus) / prior_focus))
    direction = "INCREASE" if pct >= 0 else "DECREASE"
    return RelativeChange(percent=pct, direction=direction, prior_negligible=False)


def validate_render_config(config: RenderConfig, report: ExplanationReport) -> None:
    """Reject focus-state overrides naming unknown nodes or states."""
    known = {report.target: report.target_states}
    for rec in report.level2_3:
        known[rec.node] = rec.states
    for node_id, state in config.focus_states.items():
        if node_id not in known:
            raise ConfigError(
                f"focus state override names node {node_id!r} not present in the report"
            )
        if state not in known[node_id]:
            raise ConfigError(
                f"focus state override for {node_id!r} names unknown state {state!r}; "
                f"valid states: {list(known[node_id])}"
            )


def _fmt_percent(value: float, decimals: int) -> str:
    scaled = round_half_away(100.0 * value, decimals)
    if decimals == 0:
        return str(int(scaled))
    return f"{scaled:.{decimals}f}"


def _item_display(label: str, value: str) -> str:
    label = label.upper()
    value = value.upper()
    if value.startswith(("≥", "≤", "<", ">")):
        return f"{label} {value}"
    return f"{label} = {value}"


def _risk_line(
    change: RelativeChange,
    risk_phrase: str,
    baseline: str,
    posterior_pct: str,
) -> str:
    if change.prior_negligible:
        return (
            f"This patient's risk of {risk_phrase} changed from negligible "
            f"to {posterior_pct}%."
        )
    if change.percent == 0:
        return f"This patient has no change in risk of {risk_phrase} from {baseline}."
    return (
        f"This patient has a {change.phrase} in risk of {risk_phrase} "
        f"than {baseline}."
    )


def render(report: ExplanationReport, config: RenderConfig | None = None) -> RenderedExplanation:
    """Render a report as verbal text plus its structured mirror."""
    config = config or RenderConfig()
    validate_render_config(config, report)

    blocks: list[list[str]] = []
    structured: dict = {"target": {}, "groups": [], "intermediates": []}

    focus = report.target_focus_state
    if report.target in config.focus_states:
        focus = report.target_states.index(config.focus_states[report.target])
    target_name = report.target_label.upper()
    state_name = report.target_states[focus].upper()
    subject = f"{target_name} = {state_name}"
    posterior_pct = _fmt_percent(report.posterior.mass[focus], config.percent_precision)
    change = relative_change_percent(report.posterior.mass[focus], report.prior.mass[focus])
    risk_phrase = config.risk_phrases.get(report.target, f"having {subject}")
    direction_word = "INCREASED" if report.posterior.mass[focus] >= report.prior.mass[focus] else "DECREASED"

    blocks.append([f"The likelihood of {subject} is {posterior_pct}%."])
    risk_line = _risk_line(change, risk_phrase, config.baseline_label, posterior_pct)
    blocks.append([risk_line])
    structured["target"] = {
        "node": report.target,
        "label": target_name,
        "state": state_name,
        "likelihood_percent": posterior_pct,
        "relative_change_percent": change.percent,
        "direction": change.direction,
        "prior_negligible": change.prior_negligible,
    }

    rank = {rec.evidence_node: i + 1 for i, rec in enumerate(report.level1)}
    for key, header, categories in _GROUPS:
        members = [
            rec
            for rec in report.level1
            if rec.significant and rec.category in categories
        ]
        # Empty groups are left out of the first level entirely; for a
        # binary target the mixed groups can never occur at all.
        if not members:
            continue
        lines = [f"{header} the {direction_word} risk of {subject} (strongest to least):"]
        items = []
        for rec in members:
            display = _item_display(rec.evidence_label, rec.observed_value)
            marker = " (Very important)" if rec.category is ConflictCategory.DOMINANT else ""
            lines.append(f"• {display}{marker}")
            items.append(
                {
                    "node": rec.evidence_node,
                    "display": display,
                    "category": rec.category.value,
                    "impact": rec.impact,
                    "impact_rank": rank[rec.evidence_node],
                    "very_important": rec.category is ConflictCategory.DOMINANT,
                }
            )
        blocks.append(lines)
        structured["groups"].append({"key": key, "header": lines[0], "items": items})

    if config.level >= 2 and report.level2_3:
        blocks.append([f"Important elements for predicting {target_name} are:"])
        for i, rec in enumerate(report.level2_3, start=1):
            lines, entry = _render_intermediate(rec, i, config)
            blocks.append(lines)
            structured["intermediates"].append(entry)
        if config.level >= 3:
            for rec, entry in zip(report.level2_3, structured["intermediates"]):
                blocks.extend(_render_factor_tables(report, rec, entry))

    text = "\n\n".join("\n".join(lines) for lines in blocks) + "\n"
    return RenderedExplanation(text=text, structured=structured)


def _render_intermediate(
    rec: IntermediateRecord, index: int, config: RenderConfig
) -> tuple[list[str], dict]:
    focus = rec.focus_state
    if rec.node in config.focus_states:
        focus = rec.states.index(config.focus_states[rec.node])
    name = rec.label.upper()
    state_name = rec.states[focus].upper()
    subject = f"{name} = {state_name}"
    pct = _fmt_percent(rec.posterior.mass[focus], config.percent_precision)
    change = relative_change_percent(rec.posterior.mass[focus], rec.prior.mass[focus])
    lines = [
        f"{index}. {name}: The likelihood of {subject} is {pct}%",
        _risk_line(change, f"having {subject}", config.baseline_label, pct),
    ]
    entry = {
        "node": rec.node,
        "label": name,
        "state": state_name,
        "focus_state": focus,
        "likelihood_percent": pct,
        "relative_change_percent": change.percent,
        "direction": change.direction,
        "groups": [],
    }
    return lines, entry


def _render_factor_tables(
    report: ExplanationReport,
    rec: IntermediateRecord,
    entry: dict,
) -> list[list[str]]:
    focus = entry["focus_state"]
    subject = f"{rec.label.upper()} = {rec.states[focus].upper()}"
    direction_word = (
        "INCREASED" if rec.posterior.mass[focus] >= rec.prior.mass[focus] else "DECREASED"
    )
    by_node = {r.evidence_node: r for r in report.level1}
    blocks = []
    for key, header, categories in _GROUPS:
        members = [
            e
            for e in rec.connected_significant_evidence
            if rec.per_evidence_category[e] in categories
        ]
        lines = [f"{header} the {direction_word} risk of {subject}:"]
        items = []
        if members:
            for e in members:
                level1_rec = by_node[e]
                display = _item_display(level1_rec.evidence_label, level1_rec.observed_value)
                lines.append(f"• {display}")
                items.append(
                    {
                        "node": e,
                        "display": display,
                        "category": rec.per_evidence_category[e].value,
                        "impact": rec.per_evidence_impact[e],
                    }
                )
        else:
            lines.append("• NONE")
        blocks.append(lines)
        entry["groups"].append({"key": key, "header": lines[0], "items": items})
    return blocks
