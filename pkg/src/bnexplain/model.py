"""Network model: nodes, conditional tables, evidence, and the file format.

A network is an immutable, validated DAG. Discrete nodes carry named
states; continuous nodes are pre-binned into half-open intervals (the
last bin is closed on the right) and behave like discrete nodes with
generated interval labels everywhere downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import (
    EvidenceError,
    NetworkFormatError,
    NetworkValidationError,
    UnknownNodeError,
)

FORMAT_VERSION = 1

# Hand-typed tables may be slightly off; anything worse is a real error.
ROW_SUM_TOLERANCE = 1e-6


class NodeKind(str, Enum):
    DISCRETE = "discrete"
    BINNED_CONTINUOUS = "binned_continuous"


@dataclass(frozen=True)
class ConditionalTable:
    """One probability vector per parent-state combination.

    Rows are ordered lexicographically over the parent states with the
    last listed parent varying fastest. Rows are renormalized on load.
    """

    rows: tuple[tuple[float, ...], ...]

    @classmethod
    def build(cls, raw_rows, n_states: int, n_rows: int, node_id: str) -> "ConditionalTable":
        if len(raw_rows) != n_rows:
            raise NetworkValidationError(
                f"node {node_id!r}: expected {n_rows} CPT rows "
                f"(product of parent state counts), got {len(raw_rows)}"
            )
        rows = []
        for i, raw in enumerate(raw_rows):
            if len(raw) != n_states:
                raise NetworkValidationError(
                    f"node {node_id!r}: CPT row {i} has {len(raw)} entries, "
                    f"expected {n_states}"
                )
            row = [float(v) for v in raw]
            if any(v < 0 for v in row):
                raise NetworkValidationError(
                    f"node {node_id!r}: CPT row {i} contains a negative probability"
                )
            total = math.fsum(row)
            if abs(total - 1.0) > ROW_SUM_TOLERANCE:
                raise NetworkValidationError(
                    f"node {node_id!r}: CPT row {i} sums to {total!r}, "
                    f"deviating from 1 by more than {ROW_SUM_TOLERANCE}"
                )
            rows.append(tuple(v / total for v in row))
        return cls(rows=tuple(rows))


@dataclass(frozen=True)
class NodeSpec:
    """A single network variable and its conditional table."""

    id: str
    label: str
    kind: NodeKind
    states: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: ConditionalTable
    bin_edges: tuple[float, ...] | None = None

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_index(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise EvidenceError(
                f"node {self.id!r} has no state {name!r}; valid states: {list(self.states)}"
            ) from None


def bin_labels(edges: Iterable[float]) -> tuple[str, ...]:
    """Interval labels for bin edges: half-open except the last bin."""
    edges = list(edges)
    labels = []
    for i in range(len(edges) - 1):
        closer = "]" if i == len(edges) - 2 else ")"
        labels.append(f"[{_fmt_number(edges[i])}, {_fmt_number(edges[i + 1])}{closer}")
    return tuple(labels)


def _fmt_number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def bin_value(node: NodeSpec, value: float) -> int:
    """Index of the bin containing ``value``; the last bin is closed."""
    if node.kind is not NodeKind.BINNED_CONTINUOUS or node.bin_edges is None:
        raise EvidenceError(f"node {node.id!r} is not a binned continuous node")
    edges = node.bin_edges
    if not (edges[0] <= value <= edges[-1]):
        raise EvidenceError(
            f"value {value!r} for node {node.id!r} is outside "
            f"[{edges[0]!r}, {edges[-1]!r}]"
        )
    if value == edges[-1]:
        return len(edges) - 2
    lo, hi = 0, len(edges) - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if value >= edges[mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True, eq=False)
class Network:
    """Validated, immutable DAG of nodes with conditional tables."""

    name: str
    nodes: tuple[NodeSpec, ...]
    _by_id: dict = field(init=False, repr=False)
    _children: dict = field(init=False, repr=False)
    _topo_order: tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self):
        by_id: dict[str, NodeSpec] = {}
        for node in self.nodes:
            if node.id in by_id:
                raise NetworkValidationError(f"duplicate node id: {node.id!r}")
            by_id[node.id] = node
        children: dict[str, list[str]] = {node.id: [] for node in self.nodes}
        for node in self.nodes:
            seen_parents = set()
            for parent in node.parents:
                if parent not in by_id:
                    raise NetworkValidationError(
                        f"node {node.id!r} names unknown parent {parent!r}"
                    )
                if parent in seen_parents:
                    raise NetworkValidationError(
                        f"node {node.id!r} lists parent {parent!r} twice"
                    )
                seen_parents.add(parent)
                children[parent].append(node.id)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_children", {k: tuple(v) for k, v in children.items()})
        object.__setattr__(self, "_topo_order", self._toposort())

    def _toposort(self) -> tuple[str, ...]:
        indegree = {node.id: len(node.parents) for node in self.nodes}
        ready = [node.id for node in self.nodes if indegree[node.id] == 0]
        order: list[str] = []
        while ready:
            nid = ready.pop()
            order.append(nid)
            for child in self._children[nid]:
                indegree[child] -= 1
                if indegree[child] == 0:
                    ready.append(child)
        if len(order) != len(self.nodes):
            cycle = sorted(nid for nid, deg in indegree.items() if deg > 0)
            raise NetworkValidationError(
                f"network contains a cycle through nodes {{{', '.join(cycle)}}}"
            )
        return tuple(order)

    def __eq__(self, other):
        return (
            isinstance(other, Network)
            and self.name == other.name
            and self.nodes == other.nodes
        )

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def node(self, node_id: str) -> NodeSpec:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def node_ids(self) -> tuple[str, ...]:
        return tuple(node.id for node in self.nodes)

    def parents(self, node_id: str) -> tuple[str, ...]:
        return self.node(node_id).parents

    def children(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self._children[node_id]

    def topological_order(self) -> tuple[str, ...]:
        return self._topo_order


@dataclass(frozen=True)
class EvidenceItem:
    """One observed value, resolved to a state index of its node."""

    node: str
    value: object  # state name (discrete) or real number (binned)
    state_index: int
    display: str


@dataclass(frozen=True)
class EvidenceSet:
    """Validated assignment of observed values to a subset of nodes."""

    items: tuple[EvidenceItem, ...]

    @classmethod
    def build(cls, net: Network, assignments: Mapping[str, object]) -> "EvidenceSet":
        items = []
        seen = set()
        for node_id, value in assignments.items():
            if node_id in seen:
                raise EvidenceError(f"node {node_id!r} appears twice in evidence")
            seen.add(node_id)
            if node_id not in net:
                raise EvidenceError(f"evidence names unknown node {node_id!r}")
            node = net.node(node_id)
            if node.kind is NodeKind.DISCRETE:
                if not isinstance(value, str):
                    raise EvidenceError(
                        f"node {node_id!r} is discrete; evidence must be a state name, "
                        f"got {value!r}"
                    )
                idx = node.state_index(value)
                display = value
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise EvidenceError(
                        f"node {node_id!r} is binned continuous; evidence must be a "
                        f"number, got {value!r}"
                    )
                idx = bin_value(node, float(value))
                display = _fmt_number(float(value))
            items.append(EvidenceItem(node=node_id, value=value, state_index=idx, display=display))
        return cls(items=tuple(items))

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, node_id: str) -> bool:
        return any(item.node == node_id for item in self.items)

    def node_ids(self) -> tuple[str, ...]:
        return tuple(item.node for item in self.items)

    def as_indices(self) -> dict[str, int]:
        return {item.node: item.state_index for item in self.items}

    def item(self, node_id: str) -> EvidenceItem:
        for item in self.items:
            if item.node == node_id:
                return item
        raise UnknownNodeError(node_id)

    def without(self, node_id: str) -> "EvidenceSet":
        return EvidenceSet(items=tuple(i for i in self.items if i.node != node_id))


# ---------------------------------------------------------------------------
# File format


def parse_network(document: bytes | str) -> Network:
    """Parse and validate a network document (JSON, UTF-8)."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NetworkFormatError(f"document is not valid UTF-8: {exc}") from None
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"invalid JSON: {exc.msg}", position=exc.pos) from None
    return network_from_dict(obj)


def network_from_dict(obj) -> Network:
    """Build a validated Network from an already-parsed document."""
    if not isinstance(obj, dict):
        raise NetworkFormatError("top-level value must be an object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise NetworkFormatError(
            f"unsupported or missing format_version: {version!r} "
            f"(expected {FORMAT_VERSION})"
        )
    name = obj.get("name")
    if not isinstance(name, str):
        raise NetworkFormatError('"name" must be a string')
    raw_nodes = obj.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise NetworkFormatError('"nodes" must be a non-empty array')

    parsed = [_node_from_dict(raw) for raw in raw_nodes]
    # CPT shape depends on parent cardinalities, so tables are built in a
    # second pass once every node's state count is known.
    cardinality = {}
    for partial, _ in parsed:
        if partial.id in cardinality:
            raise NetworkValidationError(f"duplicate node id: {partial.id!r}")
        cardinality[partial.id] = partial.n_states
    nodes = []
    for partial, raw_cpt in parsed:
        n_rows = 1
        for parent in partial.parents:
            if parent not in cardinality:
                raise NetworkValidationError(
                    f"node {partial.id!r} names unknown parent {parent!r}"
                )
            n_rows *= cardinality[parent]
        table = ConditionalTable.build(raw_cpt, partial.n_states, n_rows, partial.id)
        nodes.append(
            NodeSpec(
                id=partial.id,
                label=partial.label,
                kind=partial.kind,
                states=partial.states,
                parents=partial.parents,
                cpt=table,
                bin_edges=partial.bin_edges,
            )
        )
    return Network(name=name, nodes=tuple(nodes))


_EMPTY_TABLE = ConditionalTable(rows=())


def _node_from_dict(raw) -> tuple[NodeSpec, list]:
    if not isinstance(raw, dict):
        raise NetworkFormatError("each node must be an object")
    node_id = raw.get("id")
    if not isinstance(node_id, str) or not node_id:
        raise NetworkFormatError('node "id" must be a non-empty string')
    label = raw.get("label", node_id)
    if not isinstance(label, str):
        raise NetworkFormatError(f'node {node_id!r}: "label" must be a string')
    kind_raw = raw.get("kind")
    try:
        kind = NodeKind(kind_raw)
    except ValueError:
        raise NetworkFormatError(
            f'node {node_id!r}: "kind" must be "discrete" or "binned_continuous", '
            f"got {kind_raw!r}"
        ) from None
    parents = raw.get("parents", [])
    if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
        raise NetworkFormatError(f'node {node_id!r}: "parents" must be an array of ids')

    bin_edges = None
    if kind is NodeKind.DISCRETE:
        states = raw.get("states")
        if (
            not isinstance(states, list)
            or len(states) < 2
            or not all(isinstance(s, str) for s in states)
        ):
            raise NetworkValidationError(
                f'node {node_id!r}: "states" must list at least 2 state names'
            )
        if len(set(states)) != len(states):
            raise NetworkValidationError(f"node {node_id!r}: duplicate state names")
        states = tuple(states)
    else:
        edges = raw.get("bin_edges")
        if (
            not isinstance(edges, list)
            or len(edges) < 3
            or not all(isinstance(e, (int, float)) and not isinstance(e, bool) for e in edges)
        ):
            raise NetworkValidationError(
                f'node {node_id!r}: "bin_edges" must list at least 3 numbers '
                f"(defining at least 2 bins)"
            )
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise NetworkValidationError(
                f"node {node_id!r}: bin edges must be strictly increasing"
            )
        bin_edges = tuple(float(e) for e in edges)
        states = bin_labels(bin_edges)

    raw_cpt = raw.get("cpt")
    if not isinstance(raw_cpt, list) or not all(isinstance(r, list) for r in raw_cpt):
        raise NetworkFormatError(f'node {node_id!r}: "cpt" must be an array of rows')
    partial = NodeSpec(
        id=node_id,
        label=label,
        kind=kind,
        states=states,
        parents=tuple(parents),
        cpt=_EMPTY_TABLE,
        bin_edges=bin_edges,
    )
    return partial, raw_cpt


def serialize_network(net: Network) -> dict:
    """Structured document for a network; inverse of parsing."""
    nodes = []
    for node in net.nodes:
        entry: dict = {"id": node.id, "label": node.label, "kind": node.kind.value}
        if node.kind is NodeKind.DISCRETE:
            entry["states"] = list(node.states)
        else:
            entry["bin_edges"] = list(node.bin_edges or ())
        entry["parents"] = list(node.parents)
        entry["cpt"] = [list(row) for row in node.cpt.rows]
        nodes.append(entry)
    return {"format_version": FORMAT_VERSION, "name": net.name, "nodes": nodes}


def network_to_json(net: Network) -> str:
    return json.dumps(serialize_network(net), ensure_ascii=False, indent=2) + "\n"


def load_network(path) -> Network:
    with open(path, "rb") as fh:
        return parse_network(fh.read())


def parse_evidence_document(document: bytes | str) -> dict:
    """Parse an evidence file into a raw node → value mapping."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NetworkFormatError(f"document is not valid UTF-8: {exc}") from None
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"invalid JSON: {exc.msg}", position=exc.pos) from None
    if not isinstance(obj, dict):
        raise NetworkFormatError("top-level value must be an object")
    if obj.get("format_version") != FORMAT_VERSION:
        raise NetworkFormatError(
            f"unsupported or missing format_version: {obj.get('format_version')!r} "
            f"(expected {FORMAT_VERSION})"
        )
    evidence = obj.get("evidence")
    if not isinstance(evidence, dict):
        raise NetworkFormatError('"evidence" must be an object mapping node ids to values')
    return evidence


def load_evidence(path, net: Network) -> EvidenceSet:
    with open(path, "rb") as fh:
        return EvidenceSet.build(net, parse_evidence_document(fh.read()))
