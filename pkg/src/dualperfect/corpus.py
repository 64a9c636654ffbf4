"""The acceptance corpus: one item per acceptance criterion.

Each item returns ``{"id", "name", "ok", "details"}`` with deterministic
content (no timings, sorted keys on output).  ``mutate=True`` injects faults
into the computed objects so that the affected items must fail.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

from . import linalg
from .cartan import named
from .crystal import check_crystal_axioms, check_morphism, find_isomorphism, is_isomorphism
from .dualperfect import extract_graph, global_basis_space, filtration_suite, rescale, verify_dual_perfect
from .duality import check_duality_roundtrip
from .globalbasis import basis_report, expansion_check, filtration_check, global_basis
from .halfalg import HalfAlgebra
from .module import HWModule, compare_with_halfalgebra
from .oracles import kostant_partition, weyl_dimension
from .scalars import ONE, Q, Scalar
from .strings import (
    GoodSequence,
    HypothesisFailed,
    NotMonomial,
    NotDualPerfect,
    check_string_subspaces,
    in_BH,
    match_bases,
    v_h_projection,
)

THREADS_ENV = "DUALPERFECT_THREADS"


class UsageError(ValueError):
    pass


# module examples: (datum, lambda, depth); depth covers the whole module when finite
MODULES = [
    ("sl2", (2,), 4),
    ("A2", (1, 0), 4),
    ("A2", (1, 1), 6),
    ("im0", (1,), 5),
]
HALF = [("sl2", 6), ("A2", 4)]


@lru_cache(maxsize=None)
def _module(name, lam, depth):
    return HWModule(named(name), lam, depth)


@lru_cache(maxsize=None)
def _half(name, depth):
    return HalfAlgebra(named(name), depth)


@lru_cache(maxsize=None)
def _global(kind, name, arg, depth):
    rep = _module(name, arg, depth) if kind == "module" else _half(name, depth)
    return global_basis(rep)


def _examples():
    out = [("module", n, lam, d) for n, lam, d in MODULES]
    out += [("half", n, None, d) for n, d in HALF]
    return out


def _tag(kind, name, arg, depth):
    return f"{name} lambda={list(arg)}" if kind == "module" else f"{name} U^- depth {depth}"


# -- items ----------------------------------------------------------------------------------


def item1(rng, mutate):
    A2 = named("A2")
    U = _half("A2", 6)
    bad = []
    for beta in [(a, b) for a in range(7) for b in range(7) if 0 < a + b <= 6]:
        want = kostant_partition(A2, beta)
        if U.dim(beta) != want:
            bad.append({"beta": list(beta), "got": U.dim(beta), "want": want})
    S = _half("sl2", 8)
    sl2 = [S.dim((k,)) for k in range(9)]
    ok = not bad and all(d == 1 for d in sl2)
    return {"A2_mismatches": bad, "sl2_dims": sl2}, ok


def item2(rng, mutate):
    A2 = named("A2")
    d1 = _module("A2", (1, 0), 4).total_dim()
    d8 = _module("A2", (1, 1), 6).total_dim()
    w1, w8 = weyl_dimension(A2, [1, 0]), weyl_dimension(A2, [1, 1])
    depth = 5
    M = _module("im0", (1,), depth)
    im_dims = [M.dim((k,)) for k in range(depth + 1)]
    M0 = HWModule(named("im0"), (0,), depth)
    ok = d1 == w1 == 3 and d8 == w8 == 8 and all(d == 1 for d in im_dims) and M0.total_dim() == 1
    return {"A2_L1": d1, "A2_L1+L2": d8, "weyl": [w1, w8], "im0_lambda1": im_dims, "im0_lambda0_total": M0.total_dim()}, ok


def item3(rng, mutate):
    rows, ok = [], True
    for kind, name, arg, depth in _examples():
        gb = _global(kind, name, arg, depth)
        C = gb.crystal
        if mutate and name == "sl2" and kind == "module":
            C = _corrupt_crystal(C)
        ax = check_crystal_axioms(C)
        size_ok = len(C) == gb.rep.total_dim()
        if kind == "half" and name == "sl2":
            chain = all(C.f[0].get(k) == k + 1 for k in range(depth))
            size_ok = size_ok and len(C) == depth + 1 and chain
        rows.append({"example": _tag(kind, name, arg, depth), "nodes": len(C), "axioms": ax["ok"], "size_ok": size_ok})
        ok = ok and ax["ok"] and size_ok
    return {"crystals": rows}, ok


def _corrupt_crystal(C):
    import copy

    D = copy.deepcopy(C)
    # redirect the first edge to the seed node: weight clause breaks
    s, t, i = D.edges()[0]
    D.f[i][s] = s
    return D


def item4(rng, mutate):
    rows, ok = [], True
    for kind, name, arg, depth in _examples():
        gb = _global(kind, name, arg, depth)
        if mutate and name == "sl2" and kind == "module":
            import copy

            gb = copy.copy(gb)
            gb.G = dict(gb.G)
            b = gb.crystal.nodes[-1]
            gb.G[b] = [x * Q for x in gb.G[b]]
        br = basis_report(gb)
        n = gb.rep.datum.n
        ex = [expansion_check(i, gb) for i in range(n)]
        top = max((max(gb.crystal.eps[b]) for b in gb.crystal.nodes), default=0) + 2
        fi = all(filtration_check(i, m, gb)["ok"] for i in range(n) for m in range(top + 1))
        good = br["ok"] and all(e["ok"] for e in ex) and fi
        rows.append({"example": _tag(kind, name, arg, depth), "basis": br["ok"], "expansion": [e["ok"] for e in ex], "filtration": fi})
        ok = ok and good
    # the doubled weight space of the adjoint: corrections present and constrained
    gb = _global("module", "A2", (1, 1), 6)
    zero = [b for b in gb.crystal.nodes if gb.beta_of(b) == (1, 1)]
    return {"examples": rows, "adjoint_zero_weight_nodes": zero}, ok and len(zero) == 2


def item5(rng, mutate):
    rows, ok = [], True
    for kind, name, arg, depth in _examples():
        gb = _global(kind, name, arg, depth)
        V, mats, node_of = global_basis_space(gb)
        if mutate and name == "A2" and kind == "module" and arg == (1, 1):
            mats = _mix_zero_weight(V, mats, gb)
        res = verify_dual_perfect(V, mats)
        iso = False
        if res.ok:
            C = extract_graph(res.certificate)
            psi = find_isomorphism(C, gb.crystal)
            iso = psi is not None and is_isomorphism(psi, C, gb.crystal)["ok"]
            inv = {t: s for s, t in psi.items()} if psi else {}
            iso = iso and check_morphism(psi, C, gb.crystal)["ok"] and check_morphism(inv, gb.crystal, C)["ok"]
        rows.append({"example": _tag(kind, name, arg, depth), "accepted": res.ok, "isomorphic": iso})
        ok = ok and res.ok and iso
    return {"examples": rows}, ok


def _mix_zero_weight(V, mats, gb):
    mu = gb.rep.weight_of((1, 1))
    m = [list(r) for r in mats[mu]]
    for r in range(len(m)):
        a, b = m[r][0], m[r][1]
        m[r][0], m[r][1] = a + b, a - b
    out = dict(mats)
    out[mu] = m
    return out


def item6(rng, mutate):
    rows, ok = [], True
    for kind, name, arg, depth in _examples():
        gb = _global(kind, name, arg, depth)
        V, mats, _ = global_basis_space(gb)
        cert = verify_dual_perfect(V, mats).certificate
        seq = GoodSequence.cyclic(V.datum.n)
        fsuite = filtration_suite(cert)
        subs = check_string_subspaces(V, cert, seq)
        vh = v_h_projection(V, cert)
        rows.append({"example": _tag(kind, name, arg, depth), "filtration_suite": fsuite["ok"], "string_subspaces": subs["ok"], "top_projection": vh["ok"]})
        ok = ok and fsuite["ok"] and subs["ok"] and vh["ok"]
    return {"examples": rows}, ok


def _random_units(rng, n):
    choices = [ONE, -ONE, Scalar(2), Scalar(-3), Q, Q ** -1, -(Q**2)]
    return [rng.choice(choices) for _ in range(n)]


def item7(rng, mutate):
    rows, ok = [], True
    for kind, name, arg, depth in _examples():
        gb = _global(kind, name, arg, depth)
        V, mats, _ = global_basis_space(gb)
        cert = verify_dual_perfect(V, mats).certificate
        units = _random_units(rng, len(cert.basis))
        units = [ONE if in_BH(cert, b) else u for b, u in enumerate(units)]
        m = match_bases(V, mats, rescale(V, mats, units))
        ident = all(m["psi"].get(b) == b for b in range(len(cert.basis)))
        rows.append({"example": _tag(kind, name, arg, depth), "matched": m["ok"], "identity": ident})
        ok = ok and m["ok"] and ident
    # G-basis of A2 V(Lambda_1) against the rescaled monomial basis
    gb = _global("module", "A2", (1, 0), 4)
    V, mats, _ = global_basis_space(gb)
    std = {mu: linalg.identity(V.dim(mu), V.field) for mu in V.weights}
    per_weight = []
    for k, mu in enumerate(V.weights):
        s = ONE if k == 0 else _random_units(rng, 1)[0]
        per_weight.extend([s] * V.dim(mu))
    m = match_bases(V, mats, rescale(V, std, per_weight))
    rows.append({"example": "A2 lambda=[1, 0] global vs monomial", "matched": m["ok"], "psi": sorted(m["psi"].items())})
    ok = ok and m["ok"]
    # negative control: rescaling the top element breaks the hypothesis
    try:
        match_bases(V, mats, rescale(V, mats, [Scalar(2)] * sum(V.dims.values())))
        neg = "no error"
    except (HypothesisFailed, NotMonomial) as exc:
        neg = type(exc).__name__
    except NotDualPerfect:
        neg = "NotDualPerfect"
    rows.append({"negative_control": neg})
    return {"examples": rows}, ok and neg in ("HypothesisFailed", "NotMonomial")


def item8(rng, mutate):
    rows, ok = [], True
    for kind, name, arg, depth in _examples():
        gb = _global(kind, name, arg, depth)
        V, mats, _ = global_basis_space(gb)
        for label, basis in (("global", mats), ("monomial", None)):
            r = check_duality_roundtrip(V, basis)
            rows.append({"example": _tag(kind, name, arg, depth), "basis": label, "dual_perfect": r["dual_perfect"], "ok": r["ok"]})
            ok = ok and r["ok"]
            if label == "global":
                ok = ok and r["dual_perfect"] and r.get("kernel_suite", {}).get("ok", False)
    gb = _global("module", "A2", (1, 1), 6)
    V, mats, _ = global_basis_space(gb)
    mixed = _mix_zero_weight(V, mats, gb)
    r = check_duality_roundtrip(V, mixed)
    rows.append({"example": "A2 adjoint, mixed zero weight", "dual_perfect": r["dual_perfect"], "perfect": r["perfect"], "ok": r["ok"]})
    ok = ok and r["ok"] and not r["dual_perfect"] and not r["perfect"]
    return {"examples": rows}, ok


def item9(rng, mutate):
    rows, ok = [], True
    for name, lam, depth in MODULES + [("im0", (0,), 4), ("B2", (1, 0), 5)]:
        M = HWModule(named(name), lam, depth)
        r = compare_with_halfalgebra(M, _half(name, depth) if (name, depth) in HALF else HalfAlgebra(named(name), depth))
        rows.append({"example": f"{name} lambda={list(lam)}", "ok": r["ok"]})
        ok = ok and r["ok"]
    return {"examples": rows}, ok


def item10(rng, mutate):
    seed = rng.randrange(2**31)
    a = json.dumps(_run_items([3, 7], seed, False), sort_keys=True)
    b = json.dumps(_run_items([3, 7], seed, False), sort_keys=True)
    return {"identical": a == b, "bytes": len(a)}, a == b


ITEMS = {
    1: ("graded dimensions of U^-", item1),
    2: ("module dimensions", item2),
    3: ("crystal generation and axioms", item3),
    4: ("global basis", item4),
    5: ("dual perfect verification and graph isomorphism", item5),
    6: ("structure suites on accepted certificates", item6),
    7: ("uniqueness matcher", item7),
    8: ("perfect / dual perfect roundtrip", item8),
    9: ("module versus half algebra action", item9),
    10: ("determinism", item10),
}


def run_item(k: int, seed: int, mutate: bool = False) -> dict:
    name, fn = ITEMS[k]
    rng = random.Random(f"{seed}:{k}")
    details, ok = fn(rng, mutate)
    return {"id": k, "name": name, "ok": bool(ok), "details": _jsonable(details)}


def _run_items(ids, seed, mutate):
    return [run_item(k, seed, mutate) for k in ids]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def load_items(path: str | None) -> list:
    if path is None:
        return sorted(ITEMS)
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read corpus file: {exc}") from None
    if not text.strip():
        raise UsageError("corpus file is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"corpus file is not JSON: {exc}") from None
    items = data.get("items") if isinstance(data, dict) else data
    if not isinstance(items, list) or not items:
        raise UsageError("corpus file lists no items")
    if any(k not in ITEMS for k in items):
        raise UsageError(f"unknown corpus items; valid ids are {sorted(ITEMS)}")
    return list(items)


def run_corpus(seed: int = 0, mutate: bool = False, items=None) -> dict:
    ids = sorted(ITEMS) if items is None else list(items)
    workers = threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda k: run_item(k, seed, mutate), ids))
    else:
        results = [run_item(k, seed, mutate) for k in ids]
    return {
        "seed": seed,
        "mutate": mutate,
        "ok": all(r["ok"] for r in results),
        "items": results,
    }
