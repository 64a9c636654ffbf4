"""Good sequences, string data and the uniqueness matcher for dual perfect bases.

For a good sequence i = (i_1, i_2, ...) and a finitely supported L = (l_k)::

    V^{>L} = sum_k f_{i_1}^{l_1} ... f_{i_{k-1}}^{l_{k-1}} f_{i_k}^{1+l_k} V
    V^{>=L} = V^{>L} + f_{i_1}^{l_1} ... f_{i_m}^{l_m} V        (m large)

Past the support s of L the k-th term is f^L f_{i_k} V, and every index
occurs after s, so the infinite sum is the first s terms plus f^L (sum_i f_i V).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .crystal import is_isomorphism
from .dualperfect import (
    DualPerfectCertificate,
    PreDualPerfectSpace,
    extract_graph,
    verify_dual_perfect,
)
from .linalg import Echelon


class NonTermination(RuntimeError):
    """The e_top walk did not reach B_H within the height bound."""


class HypothesisFailed(ValueError):
    """p_H(B_H) and p_H(B'_H) differ."""


class NotMonomial(ValueError):
    """A change of basis on some string-datum quotient is not a generalized permutation."""

    def __init__(self, msg, L=None, weight=None):
        super().__init__(msg)
        self.L = L
        self.weight = weight


class NotDualPerfect(ValueError):
    """An input basis failed dual perfect verification."""

    def __init__(self, msg, refutation=None):
        super().__init__(msg)
        self.refutation = refutation


@dataclass(frozen=True)
class GoodSequence:
    """Eventually periodic index sequence: ``prefix`` then ``block`` repeated."""

    prefix: tuple
    block: tuple

    def __post_init__(self):
        if not self.block:
            raise ValueError("the repeating block must be nonempty")

    def covers(self, n: int) -> bool:
        return set(self.block) >= set(range(n))

    def __getitem__(self, k: int) -> int:
        """0-based position."""
        p = len(self.prefix)
        return self.prefix[k] if k < p else self.block[(k - p) % len(self.block)]

    def period_end(self, s: int) -> int:
        return max(s, len(self.prefix)) + len(self.block)

    @classmethod
    def cyclic(cls, n: int) -> "GoodSequence":
        return cls((), tuple(range(n)))

    @classmethod
    def parse(cls, text: str, n: int, prefix: str = "") -> "GoodSequence":
        """From 1-based comma lists, e.g. ``"1,2"``."""
        block = tuple(int(x) - 1 for x in text.split(",") if x.strip())
        pre = tuple(int(x) - 1 for x in prefix.split(",") if x.strip())
        seq = cls(pre, block)
        if any(not 0 <= i < n for i in pre + block):
            raise ValueError("sequence index out of range")
        if not seq.covers(n):
            raise ValueError("the repeating block must contain every index")
        return seq

    def to_json(self) -> dict:
        return {"prefix": [i + 1 for i in self.prefix], "block": [i + 1 for i in self.block]}


def trim(L: Sequence[int]) -> tuple:
    L = list(L)
    while L and L[-1] == 0:
        L.pop()
    return tuple(L)


def lex_key(L: Sequence[int], length: int) -> tuple:
    return tuple(L) + (0,) * (length - len(L))


def lex_le(L: Sequence[int], M: Sequence[int]) -> bool:
    n = max(len(L), len(M))
    return lex_key(L, n) <= lex_key(M, n)


def lex_lt(L: Sequence[int], M: Sequence[int]) -> bool:
    n = max(len(L), len(M))
    return lex_key(L, n) < lex_key(M, n)


# -- walks on the certificate ----------------------------------------------------


def e_top(i: int, b, cert: DualPerfectCertificate):
    em = cert.emap(i)
    for _ in range(cert.ell[(i, b)]):
        b = em[b]
    return b


def in_BH(cert: DualPerfectCertificate, b) -> bool:
    return all(cert.ell[(i, b)] == 0 for i in cert.datum.indices)


def string_datum(seq: GoodSequence, b, cert: DualPerfectCertificate, bound: int | None = None):
    """``(L(i, b), terminal element of B_H)``."""
    if bound is None:
        bound = (len(seq.prefix) + len(seq.block)) * (len(cert.space.weights) + 2)
    L = []
    k = 0
    while not in_BH(cert, b):
        if k >= bound:
            raise NonTermination(f"string datum walk from {b} exceeded {bound} steps")
        i = seq[k]
        L.append(cert.ell[(i, b)])
        b = e_top(i, b, cert)
        k += 1
    return trim(L), b


# -- subspaces ----------------------------------------------------------------------


def word_image(V: PreDualPerfectSpace, word: Sequence, nu) -> list:
    """Columns spanning the image in V_nu of f_{j_1}^{a_1} ... f_{j_r}^{a_r};
    ``word = [(j_1, a_1), ..., (j_r, a_r)]``."""
    nu = tuple(nu)
    src = nu
    for j, a in word:
        src = V.source(j, src, a)
    if not V.dim(src) or not V.dim(nu):
        return []
    cur = src
    M = linalg.identity(V.dim(src), V.field)
    for j, a in reversed(word):
        tgt = V.source(j, cur, -a)
        if not V.dim(tgt):
            return []
        M = linalg.matmul(V.power(j, tgt, a), M, V.field)
        cur = tgt
    return [list(c) for c in linalg.transpose(M, V.dim(src))]


def _terms(seq: GoodSequence, L: Sequence[int]):
    s = len(L)
    prefix = [(seq[k], L[k]) for k in range(s)]
    terms = []
    for k in range(s):
        terms.append([(seq[m], L[m]) for m in range(k)] + [(seq[k], 1 + L[k])])
    return prefix, terms


def subspace_gt(seq: GoodSequence, L: Sequence[int], V: PreDualPerfectSpace) -> dict:
    """mu -> Echelon of V^{>L} in V_mu."""
    L = trim(L)
    prefix, terms = _terms(seq, L)
    n = V.datum.n
    out = {}
    for mu in V.weights:
        e = Echelon(V.dim(mu), V.field)
        for w in terms:
            for v in word_image(V, w, mu):
                e.add(v)
        for i in range(n):
            for v in word_image(V, prefix + [(i, 1)], mu):
                e.add(v)
        out[mu] = e
    return out


def subspace_geq(seq: GoodSequence, L: Sequence[int], V: PreDualPerfectSpace) -> dict:
    """mu -> Echelon of V^{>=L} in V_mu."""
    L = trim(L)
    prefix, terms = _terms(seq, L)
    out = {}
    for mu in V.weights:
        e = Echelon(V.dim(mu), V.field)
        for w in terms:
            for v in word_image(V, w, mu):
                e.add(v)
        for v in word_image(V, prefix, mu):
            e.add(v)
        out[mu] = e
    return out


def _span_equal(e: Echelon, vectors, d, fld) -> bool:
    return linalg.same_span(e.rows, vectors, d, fld)


def _sum_fV(V: PreDualPerfectSpace, mu) -> Echelon:
    e = Echelon(V.dim(mu), V.field)
    for i in V.datum.indices:
        for v in word_image(V, [(i, 1)], mu):
            e.add(v)
    return e


# -- checks ------------------------------------------------------------------------------


def all_string_data(seq: GoodSequence, cert: DualPerfectCertificate) -> dict:
    return {b: string_datum(seq, b, cert) for b in range(len(cert.basis))}


def _f_chain(cert, b, L, seq):
    """(c, f^L b) along the certificate, or None if it meets an open entry."""
    c = cert.space.field.one
    for k in range(len(L) - 1, -1, -1):
        i = seq[k]
        for _ in range(L[k]):
            if b is None:
                return c, None
            if (i, b) in cert.open:
                return None
            nb = cert.fmap[i].get(b)
            if nb is not None:
                c = c * cert.coeff[(i, b)]
            b = nb
    return c, b


def _apply_word_vec(V, word_rev, mu, v):
    """Apply f_{j}^{a} for (j, a) in ``word_rev`` (rightmost first); None if not computable."""
    for j, a in word_rev:
        for _ in range(a):
            if not V.f_known(j, mu):
                return None, None
            nu = V.target(j, mu)
            if not V.dim(nu):
                return nu, None
            v = V.apply_f(j, mu, v)
            mu = nu
    return mu, v


def check_string_subspaces(V: PreDualPerfectSpace, cert: DualPerfectCertificate, seq: GoodSequence) -> dict:
    """Subspace descriptions, the f-chain congruence, injectivity of e^L and the quotient bases."""
    B = cert.basis
    fld = V.field
    data = all_string_data(seq, cert)
    realized = sorted({L for L, _ in data.values()})
    fails = {"chain_congruence": [], "subspace_spans": [], "top_injective": [], "quotient_basis": []}
    counts = {k: 0 for k in fails}
    BH = [b for b in range(len(B)) if in_BH(cert, b)]

    for L in realized + [()]:
        geq = subspace_geq(seq, L, V)
        gt = subspace_gt(seq, L, V)
        members = [b for b in range(len(B)) if lex_le(L, data[b][0])]
        strict = [b for b in members if lex_lt(L, data[b][0])]
        exact = [b for b in members if data[b][0] == L]
        for mu in V.weights:
            d = V.dim(mu)
            if not d:
                continue
            counts["subspace_spans"] += 1
            sel = [B.vec[b] for b in members if B.wt[b] == mu]
            sel_gt = [B.vec[b] for b in strict if B.wt[b] == mu]
            if not _span_equal(geq[mu], sel, d, fld) or not _span_equal(gt[mu], sel_gt, d, fld):
                fails["subspace_spans"].append({"L": list(L), "mu": list(mu)})
            # quotient basis and comparison with f^L B_H
            counts["quotient_basis"] += 1
            here = [b for b in exact if B.wt[b] == mu]
            e = Echelon(d, fld)
            for r in gt[mu].rows:
                e.add(r)
            if not all(e.add(B.vec[b]) for b in here) or len(e) != len(geq[mu]):
                fails["quotient_basis"].append({"L": list(L), "mu": list(mu), "reason": "not a quotient basis"})
                continue
            lines = _lines_mod(gt[mu], [B.vec[b] for b in here], d, fld)
            word_rev = [(seq[k], L[k]) for k in range(len(L) - 1, -1, -1)]
            seen = set()
            for h in BH:
                nu, v = _apply_word_vec(V, word_rev, B.wt[h], B.vec[h])
                if nu != mu or v is None:
                    continue
                r = gt[mu].reduce(v)
                if not any(r):
                    continue
                hit = lines(v)
                if hit is None:
                    fails["quotient_basis"].append({"L": list(L), "mu": list(mu), "reason": f"f^L of {h} is not a line of B_L"})
                else:
                    seen.add(here[hit])
            if set(here) - seen and all(_apply_word_vec(V, word_rev, B.wt[h], B.vec[h])[0] is not None for h in BH):
                missing = sorted(set(here) - seen)
                fails["quotient_basis"].append({"L": list(L), "mu": list(mu), "reason": f"elements {missing} not reached"})

    # f^L b - c f^L(b) in the sum of the first terms
    for b in range(len(B)):
        for L in realized:
            chain = _f_chain(cert, b, L, seq)
            if chain is None:
                continue
            c, t = chain
            word_rev = [(seq[k], L[k]) for k in range(len(L) - 1, -1, -1)]
            nu, v = _apply_word_vec(V, word_rev, B.wt[b], B.vec[b])
            if v is None:
                continue
            counts["chain_congruence"] += 1
            diff = v if t is None else [x - c * y for x, y in zip(v, B.vec[t])]
            _, terms = _terms(seq, L)
            e = Echelon(V.dim(nu), fld)
            for w in terms:
                for col in word_image(V, w, nu):
                    e.add(col)
            if not e.contains(diff):
                fails["chain_congruence"].append({"b": b, "L": list(L)})

    # e^L injective on each B_L
    for L in realized:
        counts["top_injective"] += 1
        terms = [data[b][1] for b in range(len(B)) if data[b][0] == L]
        if len(set(terms)) != len(terms):
            fails["top_injective"].append({"L": list(L)})
    return {
        "ok": all(not v for v in fails.values()),
        "string_data": {b: {"L": list(L), "terminal": t} for b, (L, t) in data.items()},
        "clauses": {k: {"ok": not v, "checked": counts[k], "failures": v[:20]} for k, v in fails.items()},
    }


def _lines_mod(sub: Echelon, vecs, d, fld):
    """Function v -> index k with v = c vecs[k] mod sub (c != 0), or None."""
    base = [list(r) for r in sub.rows]

    def find(v):
        cols = list(vecs) + base
        if not cols:
            return None
        sol = linalg.solve(linalg.columns_to_matrix(cols, d, fld), v, fld)
        if sol is None:
            return None
        nz = [k for k, x in enumerate(sol[: len(vecs)]) if x]
        return nz[0] if len(nz) == 1 else None

    return find


def v_h_projection(V: PreDualPerfectSpace, cert: DualPerfectCertificate) -> dict:
    """p_H restricted to B_H is injective with image a basis of V_H = V / sum f_i V."""
    B = cert.basis
    fails = []
    size = 0
    for mu in V.weights:
        d = V.dim(mu)
        if not d:
            continue
        e = _sum_fV(V, mu)
        want = d - len(e)
        here = [b for b in B.at[mu] if in_BH(cert, b)]
        size += len(here)
        ok = len(here) == want and all(e.add(B.vec[b]) for b in here)
        if not ok:
            fails.append({"mu": list(mu), "BH": len(here), "dim_VH": want})
    BH = [b for b in range(len(B)) if in_BH(cert, b)]
    return {"ok": not fails, "BH": BH, "size": size, "failures": fails}


def _certify(V, basis, name):
    res = verify_dual_perfect(V, basis)
    if not res.ok:
        raise NotDualPerfect(f"basis {name} is not dual perfect: {res.refutation.reason}", res.refutation)
    return res.certificate


def match_bases(V: PreDualPerfectSpace, basis1, basis2, seq: GoodSequence | None = None) -> dict:
    """Crystal isomorphism between the graphs of two dual perfect bases with equal p_H(B_H)."""
    if seq is None:
        seq = GoodSequence.cyclic(V.datum.n)
    c1 = _certify(V, basis1, "B")
    c2 = _certify(V, basis2, "B'")
    B1, B2 = c1.basis, c2.basis
    fld = V.field

    # hypothesis: p_H(B_H) = p_H(B'_H) exactly
    for mu in V.weights:
        d = V.dim(mu)
        if not d:
            continue
        e = _sum_fV(V, mu)
        h1 = [b for b in B1.at[mu] if in_BH(c1, b)]
        h2 = [b for b in B2.at[mu] if in_BH(c2, b)]
        cls1 = sorted(tuple(map(str, e.reduce(B1.vec[b]))) for b in h1)
        cls2 = sorted(tuple(map(str, e.reduce(B2.vec[b]))) for b in h2)
        if cls1 != cls2:
            raise HypothesisFailed(f"p_H(B_H) differs from p_H(B'_H) at weight {list(mu)}")

    d1 = all_string_data(seq, c1)
    d2 = all_string_data(seq, c2)
    psi, scal = {}, {}
    for L in sorted({L for L, _ in d1.values()} | {L for L, _ in d2.values()}):
        gt = subspace_gt(seq, L, V)
        for mu in V.weights:
            s1 = [b for b in B1.at[mu] if d1[b][0] == L]
            s2 = [b for b in B2.at[mu] if d2[b][0] == L]
            if not s1 and not s2:
                continue
            if len(s1) != len(s2):
                raise NotMonomial(f"string datum {list(L)} has {len(s1)} vs {len(s2)} elements", L, mu)
            dmu = V.dim(mu)
            base = [list(r) for r in gt[mu].rows]
            M = linalg.columns_to_matrix([B2.vec[b] for b in s2] + base, dmu, fld)
            for b in s1:
                sol = linalg.solve(M, B1.vec[b], fld)
                if sol is None:
                    raise NotMonomial(f"element {b} is outside the quotient spanned by B'", L, mu)
                nz = [k for k, x in enumerate(sol[: len(s2)]) if x]
                if len(nz) != 1:
                    raise NotMonomial(f"change of basis at string datum {list(L)} is not monomial", L, mu)
                t = s2[nz[0]]
                if t in psi.values():
                    raise NotMonomial(f"change of basis at string datum {list(L)} is not monomial", L, mu)
                psi[b] = t
                scal[b] = sol[nz[0]]

    C1, C2 = extract_graph(c1), extract_graph(c2)
    iso = is_isomorphism(psi, C1, C2)
    preserves = all(d1[b][0] == d2[psi[b]][0] for b in psi)
    top_ok = True
    for b in psi:
        mu_t = B1.wt[d1[b][1]]
        t1, t2 = d1[b][1], d2[psi[b]][1]
        e = _sum_fV(V, mu_t)
        if B2.wt[t2] != mu_t or e.reduce(B1.vec[t1]) != e.reduce(B2.vec[t2]):
            top_ok = False
            break
    return {
        "ok": iso["ok"] and preserves and top_ok,
        "psi": psi,
        "scalars": scal,
        "isomorphism": iso,
        "string_data_preserved": preserves,
        "top_projection_preserved": top_ok,
        "sequence": seq.to_json(),
    }
