"""Graph-level queries on a network: Markov blanket and d-separation.

d-separation runs as a linear-time reachability traversal over
(node, arrival-direction) pairs rather than path enumeration. The
direction matters because a collider only passes information when it,
or one of its descendants, is observed.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .model import Network

# Arrival directions for the reachability traversal.
FROM_PARENT = 0  # entered along an incoming arc (travelling with the arrow)
FROM_CHILD = 1  # entered along an outgoing arc (travelling against the arrow)


def markov_blanket(net: Network, node_id: str) -> frozenset[str]:
    """Parents, children and children's other parents of a node."""
    node = net.node(node_id)
    blanket = set(node.parents)
    for child in net.children(node_id):
        blanket.add(child)
        blanket.update(net.parents(child))
    blanket.discard(node_id)
    return frozenset(blanket)


def descendants(net: Network, node_id: str) -> frozenset[str]:
    """All strict descendants of a node."""
    net.node(node_id)
    seen: set[str] = set()
    stack = list(net.children(node_id))
    while stack:
        nid = stack.pop()
        if nid in seen:
            continue
        seen.add(nid)
        stack.extend(net.children(nid))
    return frozenset(seen)


def _ancestral_closure(net: Network, observed: frozenset[str]) -> frozenset[str]:
    """Observed nodes plus every ancestor of an observed node.

    A collider is open exactly when it belongs to this set.
    """
    closure: set[str] = set()
    stack = list(observed)
    while stack:
        nid = stack.pop()
        if nid in closure:
            continue
        closure.add(nid)
        stack.extend(net.parents(nid))
    return frozenset(closure)


def reachable_states(
    net: Network, source: str, observed: Iterable[str]
) -> dict[str, set[int]]:
    """Arrival directions of every node reachable from ``source`` along
    active trails given ``observed``.

    The source itself is not included; endpoints leave freely in both
    directions.
    """
    net.node(source)
    obs = frozenset(observed)
    for nid in obs:
        net.node(nid)
    collider_open = _ancestral_closure(net, obs)

    states: dict[str, set[int]] = {}
    queue: deque[tuple[str, int]] = deque()

    def visit(nid: str, direction: int) -> None:
        dirs = states.setdefault(nid, set())
        if direction not in dirs:
            dirs.add(direction)
            queue.append((nid, direction))

    for parent in net.parents(source):
        visit(parent, FROM_CHILD)
    for child in net.children(source):
        visit(child, FROM_PARENT)

    while queue:
        nid, direction = queue.popleft()
        is_observed = nid in obs
        if direction is FROM_CHILD:
            if not is_observed:
                for parent in net.parents(nid):
                    visit(parent, FROM_CHILD)
                for child in net.children(nid):
                    visit(child, FROM_PARENT)
        else:
            if not is_observed:
                for child in net.children(nid):
                    visit(child, FROM_PARENT)
            if nid in collider_open:
                for parent in net.parents(nid):
                    visit(parent, FROM_CHILD)

    return states


def d_separated(net: Network, x: str, y: str, observed: Iterable[str]) -> bool:
    """True iff every trail between ``x`` and ``y`` is blocked by ``observed``."""
    if x == y:
        raise ValueError("d-separation is defined for two distinct nodes")
    net.node(x)
    net.node(y)
    return y not in reachable_states(net, x, observed)


def d_connected(net: Network, x: str, y: str, observed: Iterable[str]) -> bool:
    return not d_separated(net, x, y, observed)


def flow_carriers(
    net: Network, source: str, sink: str, observed: Iterable[str]
) -> frozenset[str]:
    """Nodes through which information can travel between source and sink.

    A node carries flow when an active walk from ``source`` and one from
    ``sink`` meet at it with a junction that the d-separation rules allow:
    head-to-tail or tail-to-tail requires the node unobserved, head-to-head
    requires the node or a descendant observed. Endpoints are excluded.
    """
    obs = frozenset(observed)
    from_src = reachable_states(net, source, obs)
    from_dst = reachable_states(net, sink, obs)
    collider_open = _ancestral_closure(net, obs)

    carriers = set()
    for nid, src_dirs in from_src.items():
        if nid == source or nid == sink:
            continue
        dst_dirs = from_dst.get(nid)
        if not dst_dirs:
            continue
        junctions = {(a, b) for a in src_dirs for b in dst_dirs}
        head_to_head_only = junctions == {(FROM_PARENT, FROM_PARENT)}
        passes_through = nid not in obs and not head_to_head_only
        meets_at_collider = (FROM_PARENT, FROM_PARENT) in junctions and nid in collider_open
        if passes_through or meets_at_collider:
            carriers.add(nid)
    return frozenset(carriers)
