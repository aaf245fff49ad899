"""Shared test utilities: independent oracles and fixture networks.

The oracles here deliberately avoid the production code paths they
check: inference is verified against a dense full-joint enumeration and
d-separation against explicit path enumeration with the three blocking
rules applied per triple.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from bnexplain.model import Network, network_from_dict

# ---------------------------------------------------------------------------
# Inference oracle: dense joint enumeration


def joint_table(net: Network) -> np.ndarray:
    """Full joint distribution as a dense array, one axis per node."""
    ids = list(net.node_ids())
    axes = {nid: i for i, nid in enumerate(ids)}
    joint = np.ones([net.node(n).n_states for n in ids], dtype=float)
    for node in net.nodes:
        scope = list(node.parents) + [node.id]
        card = [net.node(v).n_states for v in scope]
        cpt = np.asarray(node.cpt.rows, dtype=float).reshape(card)
        order = sorted(range(len(scope)), key=lambda i: axes[scope[i]])
        cpt = cpt.transpose(order)
        dims = [1] * len(ids)
        for i in order:
            dims[axes[scope[i]]] = card[i]
        joint = joint * cpt.reshape(dims)
    return joint


def enum_posterior(net: Network, ev_indices: dict[str, int], query: str):
    """P(query | evidence) by summing the dense joint; None if P(E) = 0."""
    ids = list(net.node_ids())
    axes = {nid: i for i, nid in enumerate(ids)}
    joint = joint_table(net)
    selector = tuple(ev_indices.get(n, slice(None)) for n in ids)
    sub = joint[selector]
    if query in ev_indices:
        z = float(sub.sum())
        if z <= 0.0:
            return None
        mass = np.zeros(net.node(query).n_states)
        mass[ev_indices[query]] = 1.0
        return mass
    remaining = [n for n in ids if n not in ev_indices]
    other_axes = tuple(i for i, n in enumerate(remaining) if n != query)
    vec = sub.sum(axis=other_axes) if other_axes else sub
    z = float(vec.sum())
    if z <= 0.0:
        return None
    return vec / z


# ---------------------------------------------------------------------------
# d-separation oracle: path enumeration


def dsep_oracle(net: Network, x: str, y: str, observed) -> bool:
    """Enumerate every simple undirected path and apply the triple rules."""
    observed = set(observed)
    neighbors: dict[str, set[str]] = {n: set() for n in net.node_ids()}
    for node in net.nodes:
        for parent in node.parents:
            neighbors[parent].add(node.id)
            neighbors[node.id].add(parent)

    desc_cache: dict[str, set[str]] = {}

    def desc(nid: str) -> set[str]:
        if nid not in desc_cache:
            seen: set[str] = set()
            stack = list(net.children(nid))
            while stack:
                cur = stack.pop()
                if cur not in seen:
                    seen.add(cur)
                    stack.extend(net.children(cur))
            desc_cache[nid] = seen
        return desc_cache[nid]

    def path_active(path: list[str]) -> bool:
        for a, mid, b in zip(path, path[1:], path[2:]):
            collider = a in net.parents(mid) and b in net.parents(mid)
            if collider:
                if mid not in observed and not (desc(mid) & observed):
                    return False
            else:
                if mid in observed:
                    return False
        return True

    def search(path: list[str]) -> bool:
        cur = path[-1]
        if cur == y:
            return path_active(path)
        for nxt in neighbors[cur]:
            if nxt not in path and search(path + [nxt]):
                return True
        return False

    return not search([x])


# ---------------------------------------------------------------------------
# Random networks


def random_network(rng: np.random.Generator, n_nodes=None, max_states=4, max_parents=3):
    n = int(n_nodes if n_nodes is not None else rng.integers(2, 11))
    ids = [f"n{i}" for i in range(n)]
    cards: dict[str, int] = {}
    nodes = []
    for i, nid in enumerate(ids):
        cards[nid] = int(rng.integers(2, max_states + 1))
        parents = [p for p in ids[:i] if rng.random() < 0.4][:max_parents]
        n_rows = int(np.prod([cards[p] for p in parents])) if parents else 1
        rows = rng.random((n_rows, cards[nid])) + 0.05
        rows = rows / rows.sum(axis=1, keepdims=True)
        nodes.append(
            {
                "id": nid,
                "label": nid.upper(),
                "kind": "discrete",
                "states": [f"s{j}" for j in range(cards[nid])],
                "parents": parents,
                "cpt": rows.tolist(),
            }
        )
    return network_from_dict({"format_version": 1, "name": f"random-{n}", "nodes": nodes})


def random_evidence(rng: np.random.Generator, net: Network, exclude=(), max_items=None):
    pool = [n for n in net.node_ids() if n not in exclude]
    if not pool:
        return {}
    count = int(rng.integers(0, (max_items or len(pool)) + 1))
    picked = list(rng.choice(pool, size=min(count, len(pool)), replace=False))
    return {
        nid: net.node(nid).states[int(rng.integers(0, net.node(nid).n_states))]
        for nid in sorted(picked)
    }


# ---------------------------------------------------------------------------
# Fixture networks


def _binary(node_id, label, parents, rows, states=("yes", "no")):
    return {
        "id": node_id,
        "label": label,
        "kind": "discrete",
        "states": list(states),
        "parents": list(parents),
        "cpt": [list(r) for r in rows],
    }


def build_worked_example_network() -> Network:
    """A six-finding binary-target network with engineered marginals.

    The parameters are solved in logit space so that the posterior with
    all six findings, the posterior with each single finding retracted
    and the prior land exactly on fixed values (0.2; 0.19, 0.15, 0.27,
    0.11, 0.21, 0.26; 0.097). A purely independent-findings model cannot
    realize those eight values simultaneously, so the last two findings
    share a dependence that absorbs the interaction.
    """
    prior, post = 0.097, 0.2
    retracted = [0.19, 0.15, 0.27, 0.11, 0.21, 0.26]

    def logit(p):
        return math.log(p / (1 - p))

    w = [logit(post) - logit(r) for r in retracted[:4]]
    v_pair = (logit(post) - logit(prior)) - sum(w)
    v5 = logit(retracted[5]) - logit(prior) - sum(w)
    v6_marginal = logit(retracted[4]) - logit(prior) - sum(w)

    b = [0.3, 0.3, 0.3, 0.3]
    a = [bi * math.exp(wi) for bi, wi in zip(b, w)]
    b5, d1, d2 = 0.4, 0.5, 0.3
    a5 = b5 * math.exp(v5)
    c1 = d1 * math.exp(v_pair - v5)
    c2 = (math.exp(v6_marginal) * (d1 * b5 + d2 * (1 - b5)) - c1 * a5) / (1 - a5)
    for value in [*a, a5, c1, c2]:
        assert 0.0 < value < 1.0, "engineered CPT entry out of range"

    nodes = [_binary("T", "Target", [], [[prior, 1 - prior]], states=("t1", "t2"))]
    for i in range(4):
        nodes.append(
            _binary(
                f"e{i + 1}",
                f"Finding {i + 1}",
                ["T"],
                [[a[i], 1 - a[i]], [b[i], 1 - b[i]]],
                states=("obs", "alt"),
            )
        )
    nodes.append(
        _binary("e5", "Finding 5", ["T"], [[a5, 1 - a5], [b5, 1 - b5]], states=("obs", "alt"))
    )
    nodes.append(
        _binary(
            "e6",
            "Finding 6",
            ["T", "e5"],
            [[c1, 1 - c1], [c2, 1 - c2], [d1, 1 - d1], [d2, 1 - d2]],
            states=("obs", "alt"),
        )
    )
    return network_from_dict({"format_version": 1, "name": "worked-example", "nodes": nodes})


WORKED_EVIDENCE = {f"e{i}": "obs" for i in range(1, 7)}

WORKED_MARGINALS = {
    "prior": 0.097,
    "posterior": 0.2,
    "retracted": {"e1": 0.19, "e2": 0.15, "e3": 0.27, "e4": 0.11, "e5": 0.21, "e6": 0.26},
}


def build_blanket_showcase_network() -> Network:
    """Node A with parents, children, co-parents, plus relatives outside
    the blanket (a grandparent and a grandchild)."""
    nodes = [
        _binary("G1", "Grandparent", [], [[0.5, 0.5]]),
        _binary("P1", "Parent 1", ["G1"], [[0.7, 0.3], [0.2, 0.8]]),
        _binary("P2", "Parent 2", [], [[0.4, 0.6]]),
        _binary("A", "Centre", ["P1", "P2"], [[0.9, 0.1], [0.6, 0.4], [0.3, 0.7], [0.1, 0.9]]),
        _binary("S1", "Spouse 1", [], [[0.5, 0.5]]),
        _binary("S2", "Spouse 2", [], [[0.5, 0.5]]),
        _binary("C1", "Child 1", ["A", "S1"], [[0.8, 0.2], [0.5, 0.5], [0.4, 0.6], [0.1, 0.9]]),
        _binary("C2", "Child 2", ["A", "S2"], [[0.7, 0.3], [0.4, 0.6], [0.3, 0.7], [0.2, 0.8]]),
        _binary("D1", "Grandchild", ["C1"], [[0.6, 0.4], [0.3, 0.7]]),
    ]
    return network_from_dict({"format_version": 1, "name": "blanket-showcase", "nodes": nodes})


def build_flow_network() -> Network:
    """Nine-node network for intermediate selection.

    The target's parents are B, C, D, E, F and G. Evidence reaches the
    target only through D (fed by A) and F (fed by J); B, E and G are
    dead-end parents on no evidence path, and C is itself observed in the
    canonical scenario.
    """
    leak = [[0.6, 0.4], [0.3, 0.7]]
    nodes = [
        _binary("A", "A", [], [[0.35, 0.65]]),
        _binary("J", "J", [], [[0.55, 0.45]]),
        _binary("B", "B", [], [[0.5, 0.5]]),
        _binary("C", "C", [], [[0.45, 0.55]]),
        _binary("E", "E", [], [[0.5, 0.5]]),
        _binary("G", "G", [], [[0.5, 0.5]]),
        _binary("D", "D", ["A"], leak),
        _binary("F", "F", ["J"], leak),
        {
            "id": "T",
            "label": "T",
            "kind": "discrete",
            "states": ["yes", "no"],
            "parents": ["B", "C", "D", "E", "F", "G"],
            "cpt": _noisy_or_rows(6, weight=0.35, leak=0.05),
        },
    ]
    return network_from_dict({"format_version": 1, "name": "flow-selection", "nodes": nodes})


def _noisy_or_rows(n_parents: int, weight: float, leak: float) -> list[list[float]]:
    rows = []
    for combo in itertools.product((0, 1), repeat=n_parents):
        active = combo.count(0)
        p = 1.0 - (1.0 - leak) * (1.0 - weight) ** active
        rows.append([p, 1.0 - p])
    return rows


def build_and_gate_network() -> Network:
    """Target true exactly when both parents are true."""
    nodes = [
        _binary("A", "Input A", [], [[0.5, 0.5]], states=("true", "false")),
        _binary("B", "Input B", [], [[0.5, 0.5]], states=("true", "false")),
        _binary(
            "T",
            "Output",
            ["A", "B"],
            [[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [0.0, 1.0]],
            states=("true", "false"),
        ),
    ]
    return network_from_dict({"format_version": 1, "name": "and-gate", "nodes": nodes})


def build_trauma_network() -> Network:
    """A synthetic trauma-assessment network.

    Structure mirrors a bedside coagulopathy predictor: injury severity
    and tissue perfusion mediate most observable findings, lab results
    hang below the target, and death has an independent co-cause. The
    probabilities are invented; tests against this network are
    structural only.
    """
    rows_iss = [[0.05, 0.25, 0.7], [0.3, 0.5, 0.2], [0.7, 0.25, 0.05]]
    nodes = [
        {
            "id": "ENERGY",
            "label": "Energy of injury",
            "kind": "discrete",
            "states": ["HIGH", "MEDIUM", "LOW"],
            "parents": [],
            "cpt": [[0.3, 0.4, 0.3]],
        },
        {
            "id": "ISS",
            "label": "ISS",
            "kind": "discrete",
            "states": ["MINOR", "MODERATE", "SEVERE"],
            "parents": ["ENERGY"],
            "cpt": rows_iss,
        },
        {
            "id": "GCS",
            "label": "GCS",
            "kind": "binned_continuous",
            "bin_edges": [3, 6, 9, 13, 16],
            "parents": ["ISS"],
            "cpt": [
                [0.02, 0.05, 0.13, 0.8],
                [0.1, 0.2, 0.3, 0.4],
                [0.45, 0.3, 0.15, 0.1],
            ],
        },
        _binary(
            "HAEMOTHORAX",
            "Haemothorax",
            ["ISS"],
            [[0.02, 0.98], [0.2, 0.8], [0.55, 0.45]],
            states=("YES", "NO"),
        ),
        _binary(
            "LONG_BONE_FRACTURE",
            "Long bone fracture",
            ["ISS"],
            [[0.05, 0.95], [0.3, 0.7], [0.6, 0.4]],
            states=("YES", "NO"),
        ),
        {
            "id": "PERFUSION",
            "label": "Perfusion",
            "kind": "discrete",
            "states": ["NORMAL", "REDUCED", "POOR"],
            "parents": ["HAEMOTHORAX", "LONG_BONE_FRACTURE"],
            "cpt": [
                [0.2, 0.45, 0.35],
                [0.45, 0.35, 0.2],
                [0.5, 0.3, 0.2],
                [0.85, 0.12, 0.03],
            ],
        },
        {
            "id": "SBP",
            "label": "Systolic blood pressure",
            "kind": "binned_continuous",
            "bin_edges": [0, 90, 120, 250],
            "parents": ["PERFUSION"],
            "cpt": [[0.05, 0.25, 0.7], [0.35, 0.45, 0.2], [0.75, 0.2, 0.05]],
        },
        {
            "id": "LACTATE",
            "label": "Lactate",
            "kind": "binned_continuous",
            "bin_edges": [0, 2, 4, 20],
            "parents": ["PERFUSION"],
            "cpt": [[0.8, 0.15, 0.05], [0.35, 0.45, 0.2], [0.1, 0.3, 0.6]],
        },
        {
            "id": "FLUIDS",
            "label": "Prehospital fluids",
            "kind": "discrete",
            "states": ["< 500mls", "≥ 500mls"],
            "parents": [],
            "cpt": [[0.65, 0.35]],
        },
        _binary("PREHOSP", "Prehospital intubation", [], [[0.25, 0.75]], states=("YES", "NO")),
        {
            "id": "AGE",
            "label": "Age",
            "kind": "binned_continuous",
            "bin_edges": [0, 40, 65, 110],
            "parents": [],
            "cpt": [[0.45, 0.35, 0.2]],
        },
        {
            "id": "COAGULOPATHY",
            "label": "Coagulopathy",
            "kind": "discrete",
            "states": ["YES", "NO"],
            "parents": ["ISS", "PERFUSION", "FLUIDS", "PREHOSP", "AGE"],
            "cpt": _coagulopathy_rows(),
        },
        _binary(
            "ROTEMA30",
            "ROTEM A30",
            ["COAGULOPATHY"],
            [[0.7, 0.3], [0.1, 0.9]],
            states=("ABNORMAL", "NORMAL"),
        ),
        _binary(
            "ROTEMCT",
            "ROTEM CT",
            ["COAGULOPATHY"],
            [[0.65, 0.35], [0.12, 0.88]],
            states=("ABNORMAL", "NORMAL"),
        ),
        _binary(
            "INR",
            "INR",
            ["COAGULOPATHY"],
            [[0.75, 0.25], [0.08, 0.92]],
            states=("ABNORMAL", "NORMAL"),
        ),
        _binary(
            "APTTR",
            "APTTr",
            ["COAGULOPATHY"],
            [[0.6, 0.4], [0.15, 0.85]],
            states=("ABNORMAL", "NORMAL"),
        ),
        _binary("HEAD", "Head injury", [], [[0.2, 0.8]], states=("YES", "NO")),
        _binary(
            "DEATH",
            "Death",
            ["COAGULOPATHY", "HEAD"],
            [[0.5, 0.5], [0.25, 0.75], [0.3, 0.7], [0.05, 0.95]],
            states=("YES", "NO"),
        ),
    ]
    return network_from_dict({"format_version": 1, "name": "trauma-assessment", "nodes": nodes})


def _coagulopathy_rows() -> list[list[float]]:
    # Logistic in the parent severities; deterministic and reproducible.
    rows = []
    for iss, perf, fluids, prehosp, age in itertools.product(
        range(3), range(3), range(2), range(2), range(3)
    ):
        score = (
            -2.2 + 0.9 * iss + 0.8 * perf + 0.7 * fluids + 0.3 * (1 - prehosp) + 0.25 * age
        )
        p = 1.0 / (1.0 + math.exp(-score))
        rows.append([p, 1.0 - p])
    return rows


TRAUMA_EVIDENCE = {
    "GCS": 5,
    "HAEMOTHORAX": "YES",
    "ENERGY": "HIGH",
    "LONG_BONE_FRACTURE": "NO",
    "SBP": 168,
    "LACTATE": 0.9,
    "FLUIDS": "≥ 500mls",
    "PREHOSP": "YES",
    "AGE": 34,
}

TRAUMA_SIGNIFICANT = [
    "FLUIDS",
    "GCS",
    "HAEMOTHORAX",
    "ENERGY",
    "SBP",
    "LONG_BONE_FRACTURE",
    "LACTATE",
]
