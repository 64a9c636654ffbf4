"""Command line front end.

Exit status: 0 when every check passes, 1 on a refutation or violated
check, 2 on a usage error.  All JSON output uses sorted keys, so output is
byte-identical across runs for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cartan import CartanDatum, InvalidDatum, NotDominant, named
from .corpus import UsageError, load_items, run_corpus
from .crystal import check_crystal_axioms
from .dualperfect import (
    NotABasis,
    PreDualPerfectSpace,
    SpaceFormatError,
    extract_graph,
    global_basis_space,
    filtration_suite,
    verify_dual_perfect,
)
from .duality import check_duality_roundtrip
from .globalbasis import NoConvergence, basis_report, expansion_check, global_basis
from .graded import TruncationEscape
from .halfalg import HalfAlgebra
from .kashiwara import LatticeViolation, generate_crystal
from .module import HWModule, check_oint
from .scalars import ScalarSyntaxError
from .strings import (
    GoodSequence,
    HypothesisFailed,
    NonTermination,
    NotDualPerfect,
    NotMonomial,
    all_string_data,
    check_string_subspaces,
    match_bases,
    v_h_projection,
)


class CLIUsage(Exception):
    pass


class Refuted(Exception):
    """Carries a JSON payload describing a violated check."""

    def __init__(self, payload):
        super().__init__(payload.get("message", "refuted"))
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIUsage(message)


# -- input helpers ----------------------------------------------------------------


def load_datum(spec: str) -> CartanDatum:
    if os.path.exists(spec):
        try:
            with open(spec) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CLIUsage(f"cannot read datum file: {exc}") from None
        if isinstance(data, dict) and "name" in data and "A" not in data:
            return named(data["name"])
        if isinstance(data, list):
            return CartanDatum(data)
        return CartanDatum.from_json(data)
    try:
        return named(spec)
    except KeyError:
        raise CLIUsage(f"unknown datum {spec!r}: give a JSON file or a known name") from None


def parse_lambda(text: str) -> list:
    try:
        val = json.loads(text)
    except json.JSONDecodeError:
        val = [int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
    if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
        raise CLIUsage("--lambda must be a list of integers")
    return val


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIUsage(f"cannot read {path}: {exc}") from None


def load_space(path: str):
    return PreDualPerfectSpace.from_json(load_json(path))


def load_basis(path: str, V: PreDualPerfectSpace):
    data = load_json(path)
    entries = data.get("basis") if isinstance(data, dict) else data
    if entries is None:
        raise CLIUsage(f"{path} has no basis")
    out = {}
    for e in entries:
        mu = tuple(int(x) for x in e["mu"])
        out[mu] = [[V.field.coerce(x) for x in row] for row in e["matrix"]]
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit(obj, out: str | None = None, text: str | None = None):
    payload = text if text is not None else dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def build_rep(args):
    datum = load_datum(args.datum)
    if args.depth < 0:
        raise CLIUsage("--depth must be non-negative")
    if getattr(args, "binf", False):
        return HalfAlgebra(datum, args.depth)
    if args.lam is None:
        raise CLIUsage("give --lambda or --binf")
    return HWModule(datum, parse_lambda(args.lam), args.depth)


def _dims(rep):
    return [{"beta": list(b), "dim": rep.dim(b), "frontier": rep.is_frontier(b)} for b in rep.betas()]


def _words(ws):
    return [[i + 1 for i in w] for w in ws]


# -- commands ------------------------------------------------------------------------


def cmd_halfalg(args):
    U = HalfAlgebra(load_datum(args.datum), args.depth)
    if args.dims:
        emit({"kind": "halfalgebra", "depth": args.depth, "dims": _dims(U)}, args.out)
        return 0
    spaces = [
        {"beta": list(b), "dim": U.dim(b), "basis": _words(U.spaces[b].basis_words)}
        for b in U.betas()
    ]
    emit({"kind": "halfalgebra", "depth": args.depth, "weights": spaces, "total_dim": U.total_dim()}, args.out)
    return 0


def cmd_module(args):
    M = HWModule(load_datum(args.datum), parse_lambda(args.lam), args.depth)
    if args.space_out:
        V = PreDualPerfectSpace.from_rep(M)
        basis = None
        if args.basis == "global":
            _, basis, _ = global_basis_space(global_basis(M))
        with open(args.space_out, "w") as fh:
            fh.write(dumps(V.to_json(basis)))
    if args.dims or args.check_oint:
        out = {"kind": "module", "lambda": list(M.lam), "depth": args.depth}
        if args.dims:
            out["dims"] = _dims(M)
        ok = True
        if args.check_oint:
            out["oint"] = check_oint(M)
            ok = out["oint"]["ok"]
        emit(out, args.out)
        return 0 if ok else 1
    spaces = [
        {"beta": list(b), "mu": list(M.weight_of(b)), "dim": M.dim(b), "basis": _words(M.spaces[b].basis_words)}
        for b in M.betas()
    ]
    oint = check_oint(M)
    emit({"kind": "module", "lambda": list(M.lam), "depth": args.depth, "weights": spaces,
          "total_dim": M.total_dim(), "oint": oint}, args.out)
    return 0 if oint["ok"] else 1


def cmd_crystal(args):
    rep = build_rep(args)
    C, _ = generate_crystal(rep)
    ax = check_crystal_axioms(C)
    if args.out and args.out.endswith(".dot"):
        emit(None, args.out, C.to_dot())
    else:
        emit(C.to_json(), args.out)
    if not ax["ok"]:
        raise Refuted({"message": "crystal axioms violated", "axioms": ax})
    return 0


def cmd_global(args):
    rep = build_rep(args)
    gb = global_basis(rep)
    br = basis_report(gb)
    ex = [expansion_check(i, gb) for i in rep.datum.indices]
    if args.expansion_report:
        with open(args.expansion_report, "w") as fh:
            fh.write(dumps({"expansion": ex}))
    if args.space_out:
        V, mats, _ = global_basis_space(gb)
        with open(args.space_out, "w") as fh:
            fh.write(dumps(V.to_json(mats)))
    nodes = [
        {"node": b, "beta": list(gb.beta_of(b)), "string_datum": list(gb.datum_of[b]),
         "G": [str(x) for x in gb.G[b]]}
        for b in gb.crystal.nodes
    ]
    ok = br["ok"] and all(e["ok"] for e in ex)
    emit({"ok": ok, "basis_report": br, "expansion_ok": [e["ok"] for e in ex], "nodes": nodes}, args.out)
    return 0 if ok else 1


def _space_and_basis(args):
    V, basis = load_space(args.space)
    extra = getattr(args, "basis", None)
    if isinstance(extra, list):
        extra = extra[0] if extra else None
    if extra:
        basis = load_basis(extra, V)
    return V, basis


def cmd_dpb(args):
    V, basis = load_space(args.file)
    res = verify_dual_perfect(V, basis)
    if args.action == "verify":
        out = res.to_json()
        if res.ok:
            out["filtration_suite"] = filtration_suite(res.certificate)["ok"]
        emit(out, args.out)
        return 0 if res.ok else 1
    if not res.ok:
        raise Refuted({"message": "basis is not dual perfect", "refutation": res.refutation.to_json()})
    C = extract_graph(res.certificate)
    if args.out and args.out.endswith(".dot"):
        emit(None, args.out, C.to_dot())
    else:
        emit(C.to_json(), args.out)
    return 0 if check_crystal_axioms(C)["ok"] else 1


def _sequence(args, n):
    if args.seq:
        try:
            return GoodSequence.parse(args.seq, n, args.prefix or "")
        except ValueError as exc:
            raise CLIUsage(str(exc)) from None
    return GoodSequence.cyclic(n)


def cmd_strings(args):
    V, basis = _space_and_basis(args)
    res = verify_dual_perfect(V, basis)
    if not res.ok:
        raise Refuted({"message": "basis is not dual perfect", "refutation": res.refutation.to_json()})
    seq = _sequence(args, V.datum.n)
    cert = res.certificate
    subs = check_string_subspaces(V, cert, seq)
    vh = v_h_projection(V, cert)
    data = all_string_data(seq, cert)
    out = {
        "sequence": seq.to_json(),
        "string_data": [{"b": b, "L": list(L), "terminal": t} for b, (L, t) in sorted(data.items())],
        "string_subspaces": {k: v["ok"] for k, v in subs["clauses"].items()},
        "v_h": {"ok": vh["ok"], "BH": vh["BH"]},
        "ok": subs["ok"] and vh["ok"],
    }
    emit(out, args.out)
    return 0 if out["ok"] else 1


def cmd_match(args):
    V, basis = load_space(args.space)
    if not args.basis or len(args.basis) != 2:
        raise CLIUsage("match needs exactly two --basis files")
    b1, b2 = (load_basis(p, V) for p in args.basis)
    seq = _sequence(args, V.datum.n)
    m = match_bases(V, b1, b2, seq)
    out = {
        "ok": m["ok"],
        "psi": [[b, t] for b, t in sorted(m["psi"].items())],
        "scalars": [[b, V.field.fmt(c)] for b, c in sorted(m["scalars"].items())],
        "sequence": m["sequence"],
        "string_data_preserved": m["string_data_preserved"],
        "top_projection_preserved": m["top_projection_preserved"],
    }
    emit(out, args.out)
    return 0 if m["ok"] else 1


def cmd_duality(args):
    V, basis = _space_and_basis(args)
    r = check_duality_roundtrip(V, basis)
    out = {k: v for k, v in r.items() if k != "kernel_suite"}
    if "kernel_suite" in r:
        out["kernel_suite"] = r["kernel_suite"]["ok"]
    emit(out, args.out)
    return 0 if r["ok"] and (not args.roundtrip or r["dual_perfect"]) else 1


def cmd_corpus(args):
    items = load_items(args.file)
    rep = run_corpus(args.seed, args.mutate, items)
    emit(rep, args.out)
    for it in rep["items"]:
        sys.stderr.write(f"[{'PASS' if it['ok'] else 'FAIL'}] {it['id']}: {it['name']}\n")
    return 0 if rep["ok"] else 1


# -- parser ----------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    common.add_argument("--out", help="output file (default: stdout)")

    p = _Parser(prog="dualperfect", description="Crystals, global bases and dual perfect bases.", parents=[common])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def model_args(sp, lam_required=False):
        sp.add_argument("--datum", required=True, help="datum JSON file or name (sl2, A2, B2, G2, A1xA1, im0, im-2)")
        sp.add_argument("--lambda", dest="lam", required=lam_required, help="dominant weight, e.g. '[1,1]'")
        sp.add_argument("--depth", type=int, required=True)

    sp = sub.add_parser("halfalg", parents=[common], help="weight spaces of U^-")
    sp.add_argument("--datum", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--dims", action="store_true", help="print graded dimensions only")
    sp.set_defaults(func=cmd_halfalg)

    sp = sub.add_parser("module", parents=[common], help="weight spaces of V(lambda)")
    model_args(sp, lam_required=True)
    sp.add_argument("--space-out", help="write the space description here")
    sp.add_argument("--basis", choices=["monomial", "global"], default="monomial")
    sp.add_argument("--dims", action="store_true", help="print graded dimensions only")
    sp.add_argument("--check-oint", action="store_true", help="check local nilpotence of the f_i")
    sp.set_defaults(func=cmd_module)

    for name, func, hlp in (("crystal", cmd_crystal, "crystal graph"), ("global", cmd_global, "global basis")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        model_args(sp)
        sp.add_argument("--binf", action="store_true", help="use U^- instead of V(lambda)")
        if name == "global":
            sp.add_argument("--expansion-report")
            sp.add_argument("--space-out")
        sp.set_defaults(func=func)

    sp = sub.add_parser("dpb", parents=[common], help="dual perfect basis verification")
    sp.add_argument("action", choices=["verify", "graph"])
    sp.add_argument("file")
    sp.set_defaults(func=cmd_dpb)

    for name, func in (("strings", cmd_strings), ("match", cmd_match), ("duality", cmd_duality)):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--space", required=True)
        sp.add_argument("--basis", action="append", help="basis file (JSON with a 'basis' list)")
        if name != "duality":
            sp.add_argument("--seq", help="repeating block of the good sequence, 1-based, e.g. '1,2'")
            sp.add_argument("--prefix", help="finite prefix of the good sequence")
        else:
            sp.add_argument("--roundtrip", action="store_true", help="require the basis to be dual perfect")
        sp.set_defaults(func=func)

    sp = sub.add_parser("corpus", parents=[common], help="run the acceptance corpus")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mutate", action="store_true", help="inject faults; the run must fail")
    sp.add_argument("--file", help="JSON list of item ids to run")
    sp.set_defaults(func=cmd_corpus)
    return p


USAGE_ERRORS = (CLIUsage, UsageError, InvalidDatum, NotDominant, SpaceFormatError, ScalarSyntaxError, TruncationEscape)
REFUTATIONS = (NotABasis, HypothesisFailed, NotMonomial, NotDualPerfect, NonTermination, NoConvergence, LatticeViolation)


def _report(kind, exc, json_errors, extra=None):
    if json_errors:
        payload = {"error": {"type": kind, "class": type(exc).__name__, "message": str(exc)}}
        if extra:
            payload["error"]["detail"] = extra
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"dualperfect: {kind}: {exc}\n")


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_errors = "--json-errors" in argv
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise CLIUsage("a subcommand is required")
        return args.func(args)
    except USAGE_ERRORS as exc:
        _report("usage", exc, json_errors)
        return 2
    except Refuted as exc:
        _report("refuted", exc, json_errors, exc.payload)
        return 1
    except REFUTATIONS as exc:
        extra = None
        ref = getattr(exc, "refutation", None)
        if ref is not None:
            extra = ref.to_json()
        _report("refuted", exc, json_errors, extra)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
