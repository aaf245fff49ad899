"""Distance measures between discrete distributions.

Hellinger distance is the workhorse: symmetric, bounded in [0, 1],
defined even when either distribution contains zeros, and u-shaped, so
the same absolute probability shift counts for more near 0 or 1 than
near 0.5. KL divergence is offered as a cross-check metric only; it
refuses ill-defined inputs instead of clamping them.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .errors import DistributionMismatchError, MetricUndefinedError
from .inference import Distribution

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

MetricFn = Callable[[Sequence[float], Sequence[float]], float]


def _masses(p, q) -> tuple[Sequence[float], Sequence[float]]:
    if isinstance(p, Distribution) and isinstance(q, Distribution) and p.node != q.node:
        raise DistributionMismatchError(
            f"distributions are over different nodes: {p.node!r} vs {q.node!r}"
        )
    pm = p.mass if isinstance(p, Distribution) else tuple(p)
    qm = q.mass if isinstance(q, Distribution) else tuple(q)
    if len(pm) != len(qm):
        raise DistributionMismatchError(
            f"state spaces differ: {len(pm)} vs {len(qm)} states"
        )
    return pm, qm


def hellinger(p, q) -> float:
    """Hellinger distance, in [0, 1]."""
    pm, qm = _masses(p, q)
    s = math.fsum((math.sqrt(a) - math.sqrt(b)) ** 2 for a, b in zip(pm, qm))
    return _INV_SQRT2 * math.sqrt(s)


def kl_divergence(p, q) -> float:
    """KL divergence in base 10, with the convention 0 * log(0/q) = 0.

    Raises MetricUndefinedError when p places mass on a state where q
    has none.
    """
    pm, qm = _masses(p, q)
    total = 0.0
    for a, b in zip(pm, qm):
        if a == 0.0:
            continue
        if b == 0.0:
            raise MetricUndefinedError(
                "KL divergence is undefined: p has mass where q is zero"
            )
        total += a * math.log10(a / b)
    return total


def partial_hellinger(p, q, state_indices: Sequence[int]) -> float:
    """The Hellinger formula restricted to a subset of states.

    Used to weigh the consistent against the conflicting part of a mixed
    change. Only the comparison between two such values matters, so the
    shared 1/sqrt(2) factor is kept for consistency with hellinger().
    """
    pm, qm = _masses(p, q)
    s = math.fsum((math.sqrt(pm[i]) - math.sqrt(qm[i])) ** 2 for i in state_indices)
    return _INV_SQRT2 * math.sqrt(s)


METRICS: dict[str, MetricFn] = {
    "hellinger": hellinger,
    "kl": kl_divergence,
}


def get_metric(name: str) -> MetricFn:
    try:
        return METRICS[name]
    except KeyError:
        raise ValueError(
            f"unknown metric {name!r}; choose one of {sorted(METRICS)}"
        ) from None
