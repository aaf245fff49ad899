"""Command line entry point.

Exit codes: 0 on success, 1 for validation problems (bad files, bad
flags, unknown nodes), 2 for inference failures such as inconsistent
evidence. Diagnostics go to stderr; no stack traces reach the user.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    BnExplainError,
    InconsistentEvidenceError,
    MetricUndefinedError,
)
from .explain import DEFAULT_ALPHA_LADDER, ExplainConfig, explain
from .model import load_evidence, load_network
from .render import RenderConfig, render
from .report import REPORT_VERSION, report_to_dict

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INFERENCE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bnexplain",
        description="Explain a Bayesian network prediction in up to three levels of detail.",
    )
    parser.add_argument("--network", metavar="PATH", help="network file (JSON)")
    parser.add_argument("--evidence", metavar="PATH", help="evidence file (JSON)")
    parser.add_argument(
        "--target",
        metavar="ID",
        action="append",
        default=[],
        help="target node id (repeatable)",
    )
    parser.add_argument(
        "--level", type=int, choices=(1, 2, 3), default=3, help="maximum detail level"
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    parser.add_argument(
        "--alpha-ladder",
        metavar="CSV",
        default=None,
        help="comma-separated decreasing significance fractions",
    )
    parser.add_argument(
        "--metric", choices=("hellinger", "kl"), default="hellinger", help="impact metric"
    )
    parser.add_argument(
        "--focus-state",
        metavar="NODE=STATE",
        action="append",
        default=[],
        help="present this state of a node instead of its most probable one (repeatable)",
    )
    parser.add_argument("--serve", action="store_true", help="run the HTTP service")
    parser.add_argument("--port", type=int, default=8000, help="port for --serve")
    return parser


def _parse_ladder(raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in raw.split(","))
    except ValueError:
        raise BnExplainError(f"alpha ladder is not a list of numbers: {raw!r}") from None


def _parse_focus(pairs: list[str]) -> dict[str, str]:
    overrides = {}
    for pair in pairs:
        node, sep, state = pair.partition("=")
        if not sep or not node or not state:
            raise BnExplainError(f"focus state must look like NODE=STATE, got {pair!r}")
        overrides[node] = state
    return overrides


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.serve:
        from .service import create_app
        import uvicorn

        uvicorn.run(create_app(), host="127.0.0.1", port=args.port)
        return EXIT_OK

    if not args.network or not args.evidence or not args.target:
        parser.error("--network, --evidence and at least one --target are required")

    try:
        net = load_network(args.network)
        evidence = load_evidence(args.evidence, net)
        ladder = _parse_ladder(args.alpha_ladder) if args.alpha_ladder else DEFAULT_ALPHA_LADDER
        focus = _parse_focus(args.focus_state)
        config = ExplainConfig(alpha_ladder=ladder, metric=args.metric, focus_states=focus)
    except OSError as exc:
        print(f"bnexplain: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BnExplainError as exc:
        print(f"bnexplain: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        reports = explain(net, evidence, args.target, config)
    except (InconsistentEvidenceError, MetricUndefinedError) as exc:
        print(f"bnexplain: error: {exc}", file=sys.stderr)
        return EXIT_INFERENCE
    except BnExplainError as exc:
        print(f"bnexplain: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.format == "json":
        payload = {
            "report_version": REPORT_VERSION,
            "reports": [report_to_dict(r) for r in reports],
        }
        sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
        return EXIT_OK

    render_config = RenderConfig(level=args.level, focus_states=focus)
    chunks = [render(report, render_config).text for report in reports]
    sys.stdout.write("\n".join(chunks))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
