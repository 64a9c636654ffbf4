"""Abstract crystals: container, axiom checker, morphisms, export."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .cartan import CartanDatum

NEG_INF = -math.inf


@dataclass
class AbstractCrystal:
    """A set of nodes with wt, eps_i, phi_i and partial maps e_i, f_i.

    ``f[i]`` and ``e[i]`` are dicts node -> node; a missing key means the
    operator gives 0.  ``open_f`` lists ``(i, node)`` pairs whose f_i image
    lies beyond a truncation and is therefore unknown rather than 0.
    """

    datum: CartanDatum
    nodes: list
    wt: dict
    eps: dict
    phi: dict = None
    f: dict = None
    e: dict = None
    open_f: set = field(default_factory=set)
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.datum.n
        if self.f is None:
            self.f = {i: {} for i in range(n)}
        if self.e is None:
            self.e = {i: {} for i in range(n)}
        if self.phi is None:
            self.phi = {
                b: tuple(self.eps[b][i] + self.datum.pair(i, self.wt[b]) for i in range(n))
                for b in self.nodes
            }

    def __len__(self) -> int:
        return len(self.nodes)

    def f_tilde(self, i: int, b):
        return self.f[i].get(b)

    def e_tilde(self, i: int, b):
        return self.e[i].get(b)

    def edges(self) -> list:
        out = []
        for i in range(self.datum.n):
            for b in self.nodes:
                t = self.f[i].get(b)
                if t is not None:
                    out.append((b, t, i))
        return out

    def string_length_up(self, i: int, b) -> int:
        """max{n : e_i^n b != 0}."""
        n = 0
        while True:
            b = self.e[i].get(b)
            if b is None:
                return n
            n += 1

    def highest_weight_nodes(self) -> list:
        return [b for b in self.nodes if all(self.e[i].get(b) is None for i in range(self.datum.n))]

    def to_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for b in self.nodes:
            g.add_node(b, sig=(tuple(self.wt[b]), tuple(self.eps[b]), tuple(self.phi[b])))
        for s, t, i in self.edges():
            g.add_edge(s, t, color=i)
        return g

    # -- export ---------------------------------------------------------------
    def to_json(self) -> dict:
        index = {b: k for k, b in enumerate(self.nodes)}
        nodes = []
        for b in self.nodes:
            nodes.append(
                {
                    "id": index[b],
                    "wt": list(self.wt[b]),
                    "eps": [_num(x) for x in self.eps[b]],
                    "phi": [_num(x) for x in self.phi[b]],
                }
            )
        edges = [{"src": index[s], "dst": index[t], "color": i + 1} for s, t, i in self.edges()]
        return {"nodes": nodes, "edges": edges}

    def to_dot(self, name: str = "crystal") -> str:
        index = {b: k for k, b in enumerate(self.nodes)}
        lines = [f"digraph {name} {{"]
        for b in self.nodes:
            k = index[b]
            wt = ",".join(str(x) for x in self.wt[b])
            eps = ",".join(str(_num(x)) for x in self.eps[b])
            lines.append(f'  n{k} [label="{k} | wt=({wt}) | eps=({eps})"];')
        for s, t, i in self.edges():
            lines.append(f'  n{index[s]} -> n{index[t]} [label="{i + 1}", colorscheme=set19, color={(i % 9) + 1}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _num(x):
    if x == NEG_INF:
        return "-inf"
    return int(x)


def from_json(datum: CartanDatum, data: Mapping) -> AbstractCrystal:
    nodes = [n["id"] for n in data["nodes"]]
    wt = {n["id"]: tuple(n["wt"]) for n in data["nodes"]}
    eps = {n["id"]: tuple(NEG_INF if x == "-inf" else x for x in n["eps"]) for n in data["nodes"]}
    phi = {n["id"]: tuple(NEG_INF if x == "-inf" else x for x in n["phi"]) for n in data["nodes"]}
    f = {i: {} for i in range(datum.n)}
    e = {i: {} for i in range(datum.n)}
    for ed in data["edges"]:
        i = ed["color"] - 1
        f[i][ed["src"]] = ed["dst"]
        e[i][ed["dst"]] = ed["src"]
    return AbstractCrystal(datum, nodes, wt, eps, phi, f, e)


# ----------------------------------------------------------------------------


def check_crystal_axioms(C: AbstractCrystal) -> dict:
    """Check the six abstract-crystal clauses; returns a report per clause."""
    d = C.datum
    fails = {k: [] for k in range(1, 7)}
    node_set = set(C.nodes)
    for b in C.nodes:
        for i in d.indices:
            eps, phi = C.eps[b][i], C.phi[b][i]
            # (1)
            if phi != eps + d.pair(i, C.wt[b]):
                fails[1].append({"node": _id(b), "i": i + 1})
            eb, fb = C.e[i].get(b), C.f[i].get(b)
            # (2)
            if eb is not None and tuple(C.wt[eb]) != d.shift(C.wt[b], i, 1):
                fails[2].append({"node": _id(b), "i": i + 1, "op": "e"})
            if fb is not None and tuple(C.wt[fb]) != d.shift(C.wt[b], i, -1):
                fails[2].append({"node": _id(b), "i": i + 1, "op": "f"})
            # (3)
            for t in (eb, fb):
                if t is not None and t not in node_set:
                    fails[3].append({"node": _id(b), "i": i + 1, "reason": "image outside crystal"})
            if fb is not None and C.e[i].get(fb) != b:
                fails[3].append({"node": _id(b), "i": i + 1, "reason": "e_i f_i b != b"})
            if eb is not None and C.f[i].get(eb) != b:
                fails[3].append({"node": _id(b), "i": i + 1, "reason": "f_i e_i b != b"})
            # (4)
            if phi == NEG_INF and (eb is not None or fb is not None):
                fails[4].append({"node": _id(b), "i": i + 1})
            real = d.is_real(i)
            # (5)
            if eb is not None and eb in node_set:
                want_eps = eps - 1 if real else eps
                want_phi = phi + 1 if real else phi + d.A[i][i]
                if C.eps[eb][i] != want_eps or C.phi[eb][i] != want_phi:
                    fails[5].append({"node": _id(b), "i": i + 1})
            # (6)
            if fb is not None and fb in node_set:
                want_eps = eps + 1 if real else eps
                want_phi = phi - 1 if real else phi - d.A[i][i]
                if C.eps[fb][i] != want_eps or C.phi[fb][i] != want_phi:
                    fails[6].append({"node": _id(b), "i": i + 1})
    clauses = {str(k): {"ok": not v, "failures": v[:20], "count": len(v)} for k, v in fails.items()}
    return {"ok": all(not v for v in fails.values()), "clauses": clauses}


def _id(b):
    return b if isinstance(b, (int, str)) else repr(b)


def check_morphism(psi: Mapping, C1: AbstractCrystal, C2: AbstractCrystal) -> dict:
    """Check the two crystal-morphism clauses for psi: C1 -> C2 u {0} (None = 0)."""
    fails1, fails2 = [], []
    nodes2 = set(C2.nodes)
    for b in C1.nodes:
        t = psi.get(b)
        if t is None:
            continue
        if t not in nodes2:
            fails1.append({"node": _id(b), "reason": "image not in target"})
            continue
        if tuple(C1.wt[b]) != tuple(C2.wt[t]):
            fails1.append({"node": _id(b), "reason": "wt"})
        if tuple(C1.eps[b]) != tuple(C2.eps[t]):
            fails1.append({"node": _id(b), "reason": "eps"})
        if tuple(C1.phi[b]) != tuple(C2.phi[t]):
            fails1.append({"node": _id(b), "reason": "phi"})
    for b, b2, i in C1.edges():
        t, t2 = psi.get(b), psi.get(b2)
        if t is None or t2 is None:
            continue
        if C2.f[i].get(t) != t2 or C2.e[i].get(t2) != t:
            fails2.append({"src": _id(b), "dst": _id(b2), "i": i + 1})
    return {
        "ok": not fails1 and not fails2,
        "clause1": fails1[:20],
        "clause2": fails2[:20],
    }


def is_isomorphism(psi: Mapping, C1: AbstractCrystal, C2: AbstractCrystal) -> dict:
    """Bijective, everywhere defined, and a morphism in both directions."""
    report = {"ok": False}
    if any(psi.get(b) is None for b in C1.nodes):
        report["reason"] = "not everywhere defined"
        return report
    image = [psi[b] for b in C1.nodes]
    if len(set(image)) != len(image) or set(image) != set(C2.nodes):
        report["reason"] = "not a bijection"
        return report
    fwd = check_morphism(psi, C1, C2)
    inv = {t: b for b, t in psi.items()}
    bwd = check_morphism(inv, C2, C1)
    report.update(ok=fwd["ok"] and bwd["ok"], forward=fwd, backward=bwd)
    if not report["ok"]:
        report["reason"] = "morphism clause violated"
    return report


def find_isomorphism(C1: AbstractCrystal, C2: AbstractCrystal):
    """Search for a crystal isomorphism; returns a dict or None.

    The search matches colored graphs with node signatures (wt, eps, phi);
    any candidate is re-checked with :func:`is_isomorphism`.
    """
    if len(C1) != len(C2):
        return None
    g1, g2 = C1.to_graph(), C2.to_graph()
    matcher = DiGraphMatcher(
        g1,
        g2,
        node_match=lambda a, b: a["sig"] == b["sig"],
        edge_match=lambda a, b: a["color"] == b["color"],
    )
    for mapping in matcher.isomorphisms_iter():
        if is_isomorphism(mapping, C1, C2)["ok"]:
            return dict(mapping)
    return None


def dumps(C: AbstractCrystal) -> str:
    return json.dumps(C.to_json(), indent=2, sort_keys=True)
