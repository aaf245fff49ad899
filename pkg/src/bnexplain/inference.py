"""Exact posterior marginals by variable elimination.

All inference here is exact: the networks this package targets are
desk-scale (tens of nodes), so elimination with a min-degree ordering
answers every query in well under a millisecond and keeps golden tests
bit-stable. Every operation is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EvidenceError, InconsistentEvidenceError
from .model import EvidenceSet, Network

# P(E) below this is treated as an impossible evidence configuration.
EVIDENCE_PROBABILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class Distribution:
    """Normalized probability mass over one node's states."""

    node: str
    mass: tuple[float, ...]

    def __post_init__(self):
        if not self.mass:
            raise ValueError("distribution must have at least one state")
        if any(v < 0 for v in self.mass):
            raise ValueError(f"negative probability in distribution for {self.node!r}")
        if abs(sum(self.mass) - 1.0) > 1e-9:
            raise ValueError(
                f"distribution for {self.node!r} sums to {sum(self.mass)!r}, not 1"
            )

    def __len__(self) -> int:
        return len(self.mass)

    def argmax(self) -> int:
        """Index of the most probable state; ties resolve to the lowest index."""
        best = 0
        for i, v in enumerate(self.mass):
            if v > self.mass[best]:
                best = i
        return best

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mass, dtype=float)


class _Factor(NamedTuple):
    vars: tuple[str, ...]
    table: np.ndarray


def _align(table: np.ndarray, vars_: tuple[str, ...], out_vars: tuple[str, ...]) -> np.ndarray:
    present = [v for v in out_vars if v in vars_]
    table = table.transpose([vars_.index(v) for v in present])
    it = iter(table.shape)
    return table.reshape([next(it) if v in present else 1 for v in out_vars])


def _product(a: _Factor, b: _Factor) -> _Factor:
    out_vars = tuple(dict.fromkeys(a.vars + b.vars))
    return _Factor(
        out_vars,
        _align(a.table, a.vars, out_vars) * _align(b.table, b.vars, out_vars),
    )


def _sum_out(factor: _Factor, var: str) -> _Factor:
    axis = factor.vars.index(var)
    return _Factor(
        factor.vars[:axis] + factor.vars[axis + 1 :],
        factor.table.sum(axis=axis),
    )


def _initial_factors(net: Network, ev_idx: dict[str, int]) -> list[_Factor]:
    factors = []
    for node in net.nodes:
        scope = node.parents + (node.id,)
        dims = [net.node(p).n_states for p in node.parents] + [node.n_states]
        table = np.asarray(node.cpt.rows, dtype=float).reshape(dims)
        # Clamp observed variables to their observed state up front.
        selector = tuple(ev_idx.get(v, slice(None)) for v in scope)
        table = table[selector]
        scope = tuple(v for v in scope if v not in ev_idx)
        factors.append(_Factor(scope, table))
    return factors


def _min_degree_var(factors: list[_Factor], candidates: set[str]) -> str:
    best_var = None
    best_degree = None
    for var in sorted(candidates):
        neighbors: set[str] = set()
        for f in factors:
            if var in f.vars:
                neighbors.update(f.vars)
        neighbors.discard(var)
        degree = len(neighbors)
        if best_degree is None or degree < best_degree:
            best_var, best_degree = var, degree
    return best_var


def _eliminate(factors: list[_Factor], var: str) -> list[_Factor]:
    related = [f for f in factors if var in f.vars]
    rest = [f for f in factors if var not in f.vars]
    rest.append(_sum_out(reduce(_product, related), var))
    return rest


def posterior(
    net: Network,
    evidence: EvidenceSet,
    query: str,
    *,
    order: Sequence[str] | None = None,
) -> Distribution:
    """Exact marginal P(query | evidence).

    An observed query returns the point mass on its observed state. A zero
    probability evidence configuration raises InconsistentEvidenceError
    rather than producing NaNs.
    """
    qnode = net.node(query)
    ev_idx = evidence.as_indices()
    for nid in ev_idx:
        net.node(nid)
    factors = _initial_factors(net, ev_idx)

    to_eliminate = {n.id for n in net.nodes if n.id not in ev_idx and n.id != query}
    if order is not None:
        order = list(order)
        if set(order) != to_eliminate:
            raise ValueError(
                "elimination order must cover exactly the unobserved non-query nodes"
            )
    while to_eliminate:
        var = order.pop(0) if order is not None else _min_degree_var(factors, to_eliminate)
        factors = _eliminate(factors, var)
        to_eliminate.discard(var)

    result = reduce(_product, factors)
    if query in ev_idx:
        z = float(result.table.sum())
        if z < EVIDENCE_PROBABILITY_FLOOR:
            raise InconsistentEvidenceError()
        mass = [0.0] * qnode.n_states
        mass[ev_idx[query]] = 1.0
        return Distribution(node=query, mass=tuple(mass))

    table = _align(result.table, result.vars, (query,))
    z = float(table.sum())
    if z < EVIDENCE_PROBABILITY_FLOOR:
        raise InconsistentEvidenceError()
    return Distribution(node=query, mass=tuple(float(v) for v in table / z))


@dataclass(frozen=True)
class QueryBundle:
    """The three distribution families impact analysis consumes.

    ``retracted`` holds, for every evidence node, the posterior with just
    that node's observation removed; insertion order follows the evidence.
    """

    target: str
    joint_posterior: Distribution
    retracted: dict[str, Distribution]
    prior: Distribution


def cached_posterior(
    net: Network,
    evidence: EvidenceSet,
    query: str,
    cache: dict | None = None,
) -> Distribution:
    """posterior() memoized on (evidence assignment, query).

    The cache is request-scoped: callers pass a plain dict that lives for
    one explanation request, keeping the service stateless across requests.
    """
    if cache is None:
        return posterior(net, evidence, query)
    key = (tuple(sorted((i.node, i.state_index) for i in evidence.items)), query)
    if key not in cache:
        cache[key] = posterior(net, evidence, query)
    return cache[key]


def query_bundle(
    net: Network,
    evidence: EvidenceSet,
    query: str,
    *,
    cache: dict | None = None,
) -> QueryBundle:
    """Joint posterior, one-at-a-time retracted posteriors, and the prior.

    Runs |E| + 2 exact inferences. Retraction recomputes from scratch;
    incremental message reuse is not worth the complexity at this scale.
    """
    if query in evidence:
        raise EvidenceError(f"query node {query!r} is itself observed")
    if len(evidence) == 0:
        raise EvidenceError("evidence must be non-empty for a query bundle")
    joint = cached_posterior(net, evidence, query, cache)
    retracted: dict[str, Distribution] = {}
    for item in evidence.items:
        try:
            retracted[item.node] = cached_posterior(
                net, evidence.without(item.node), query, cache
            )
        except InconsistentEvidenceError as exc:
            raise InconsistentEvidenceError(
                f"retracting {item.node!r} leaves an impossible evidence set"
            ) from exc
    prior = cached_posterior(net, EvidenceSet(items=()), query, cache)
    return QueryBundle(target=query, joint_posterior=joint, retracted=retracted, prior=prior)
