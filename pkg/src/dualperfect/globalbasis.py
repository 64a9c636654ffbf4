"""Lower global bases by triangular correction of string monomials.

For a node b with string datum (a_1, a_2, ...) along the cyclic sequence
1, 2, ..., n, 1, 2, ... the monomial ``y_b = f_{i_1}^(a_1) f_{i_2}^(a_2) ... v``
is bar invariant and equals ``G(b)`` plus an A-combination of ``G(b')``
with lexicographically larger string data.  Processing nodes of a weight
space in decreasing string-datum order, each ``y_b`` is corrected by
subtracting bar-symmetric multiples of already known ``G(b')`` until it lies
in L and is congruent to b mod qL.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .crystal import AbstractCrystal
from .graded import WordRep, add_beta
from .kashiwara import LatticeState, generate_crystal
from .linalg import QQq
from .scalars import ONE, ZERO, LaurentPoly, Scalar


class NoConvergence(ArithmeticError):
    """The correction loop could not produce a bar-invariant lattice vector."""


def bar_vector(v) -> list:
    """Coordinatewise bar; valid because every basis vector is a bar-fixed monomial."""
    return [x.bar() for x in v]


def cyclic_sequence(n: int, length: int) -> list:
    return [k % n for k in range(length)]


def string_datum_of_node(C: AbstractCrystal, b, max_len: int | None = None) -> tuple:
    """Exponents of b along 1, 2, ..., n, 1, 2, ...: repeatedly strip the full
    i-string above the current node; stops once the node has no e~ at all."""
    n = C.datum.n
    out = []
    cur = b
    idle = 0
    k = 0
    while idle < n:
        i = k % n
        a = C.string_length_up(i, cur)
        for _ in range(a):
            cur = C.e[i][cur]
        out.append(a)
        idle = 0 if a else idle + 1
        k += 1
        if max_len is not None and k > max_len:
            raise NoConvergence("string datum walk does not terminate")
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass
class GlobalBasisSet:
    rep: WordRep
    crystal: AbstractCrystal
    lattice: LatticeState
    G: dict = field(default_factory=dict)  # node -> coordinate vector
    monomial: dict = field(default_factory=dict)  # node -> y_b
    transition: dict = field(default_factory=dict)  # node -> {node: coeff}, G(b) = sum c y_b'
    datum_of: dict = field(default_factory=dict)  # node -> string datum
    order: dict = field(default_factory=dict)  # beta -> nodes in processing order

    def beta_of(self, b) -> tuple:
        return self.lattice.node_beta[b]

    def nodes_at(self, beta) -> list:
        return list(self.lattice.nodes_at.get(tuple(beta), []))

    def matrix(self, beta) -> list:
        """Columns G(b) for the nodes of weight beta (node creation order)."""
        beta = tuple(beta)
        return linalg.columns_to_matrix([self.G[b] for b in self.nodes_at(beta)], self.rep.dim(beta), QQq)

    def expand(self, beta, v) -> dict:
        """Coefficients of v over the global basis at beta."""
        beta = tuple(beta)
        nodes = self.nodes_at(beta)
        if not nodes:
            return {}
        inv = self._inverse(beta)
        c = linalg.matvec(inv, v, QQq)
        return {b: x for b, x in zip(nodes, c) if x}

    def _inverse(self, beta):
        cache = self.__dict__.setdefault("_inv_cache", {})
        if beta not in cache:
            cache[beta] = linalg.inverse(self.matrix(beta), QQq)
        return cache[beta]


def _monomial(rep: WordRep, datum: tuple) -> tuple:
    """(beta, vector) of f_{i_1}^(a_1) ... f_{i_m}^(a_m) applied to the top vector."""
    n = rep.datum.n
    beta = rep.zero_beta()
    v = rep.top_vector()
    for k in range(len(datum) - 1, -1, -1):
        a = datum[k]
        if a:
            i = k % n
            v = linalg.matvec(rep.lower_power(i, beta, a), v, QQq)
            beta = add_beta(beta, i, a)
    return beta, v


def _polar_part(c: Scalar):
    """(k, leading coefficient) for the most negative power q^-k of c, or None if regular."""
    if not c or c.is_regular_at_zero():
        return None
    return -c.num.low, c.num.coeff(c.num.low)


def solve_global(gb: GlobalBasisSet, b) -> list:
    """G(b), given G(b') for all b' processed earlier in the same weight space."""
    rep, st = gb.rep, gb.lattice
    beta = st.node_beta[b]
    L = gb.datum_of[b]
    mbeta, y = _monomial(rep, L)
    if mbeta != beta:
        raise NoConvergence(f"string datum {L} of node {b} does not return to its weight")
    gb.monomial[b] = y
    x = list(y)
    trans = {b: ONE}
    done = [b2 for b2 in gb.order[beta] if b2 in gb.G]
    nodes = st.nodes_at[beta]
    bound = 4 * len(nodes) * (1 + _max_pole(st.expand(beta, x))) + 8
    for _ in range(bound):
        c = st.expand(beta, x)
        polar = [(b2, _polar_part(cb)) for b2, cb in zip(nodes, c)]
        polar = [(b2, p) for b2, p in polar if p]
        if polar:
            k = max(p[0] for _, p in polar)
            for b2, (kk, lead) in polar:
                if kk != k:
                    continue
                if b2 not in done:
                    raise NoConvergence(f"pole of order {k} at node {b2} while solving node {b}")
                a = Scalar(LaurentPoly.from_terms({-k: lead, k: lead}))
                x = [u - a * w for u, w in zip(x, gb.G[b2])]
                _accumulate(trans, gb.transition[b2], -a)
            continue
        res = [cb.eval_at_zero() for cb in c]
        changed = False
        for b2, r in zip(nodes, res):
            if b2 == b:
                if r != 1:
                    raise NoConvergence(f"node {b} has residue {r} on itself")
                continue
            if r:
                if b2 not in done:
                    raise NoConvergence(f"residue at unprocessed node {b2} while solving node {b}")
                a = Scalar(r)
                x = [u - a * w for u, w in zip(x, gb.G[b2])]
                _accumulate(trans, gb.transition[b2], -a)
                changed = True
        if not changed:
            if bar_vector(x) != x:
                raise NoConvergence(f"corrected vector for node {b} is not bar invariant")
            gb.G[b] = x
            gb.transition[b] = {k: v for k, v in trans.items() if v}
            return x
    raise NoConvergence(f"correction loop for node {b} exceeded {bound} steps")


def _max_pole(c) -> int:
    return max([p[0] for p in map(_polar_part, c) if p] or [0])


def _accumulate(acc: dict, other: dict, scale: Scalar) -> None:
    for k, v in other.items():
        acc[k] = acc.get(k, ZERO) + scale * v


def global_basis(rep: WordRep, crystal=None, lattice=None) -> GlobalBasisSet:
    """Global basis on every weight space of the model."""
    if crystal is None or lattice is None:
        crystal, lattice = generate_crystal(rep)
    gb = GlobalBasisSet(rep, crystal, lattice)
    for b in crystal.nodes:
        gb.datum_of[b] = string_datum_of_node(crystal, b)
    for beta in rep.betas():
        nodes = lattice.nodes_at.get(beta, [])
        gb.order[beta] = sorted(nodes, key=lambda b: gb.datum_of[b], reverse=True)
        for b in gb.order[beta]:
            solve_global(gb, b)
    return gb


# -- checks ---------------------------------------------------------------------


def _is_integral_laurent(c: Scalar) -> bool:
    return c.is_laurent and all(x.denominator == 1 for x in c.num.coeffs)


def basis_report(gb: GlobalBasisSet) -> dict:
    """Bar invariance, congruence mod qL, unitriangularity and basis property."""
    fails = []
    for beta in gb.rep.betas():
        nodes = gb.nodes_at(beta)
        d = gb.rep.dim(beta)
        if linalg.rank(gb.matrix(beta), QQq) != d or len(nodes) != d:
            fails.append({"weight": list(beta), "reason": "not a basis"})
        for b in nodes:
            g = gb.G[b]
            if bar_vector(g) != g:
                fails.append({"node": b, "reason": "not bar invariant"})
            c = gb.lattice.expand(beta, g)
            for b2, x in zip(nodes, c):
                shifted = x - ONE if b2 == b else x
                if shifted and shifted.valuation() <= 0:
                    fails.append({"node": b, "reason": f"coefficient at node {b2} not in 1 + qA_0 / qA_0"})
            for b2, x in gb.transition[b].items():
                if not _is_integral_laurent(x):
                    fails.append({"node": b, "reason": f"transition to monomial of {b2} not integral"})
    return {"ok": not fails, "failures": fails[:20], "nodes": len(gb.G)}


def expansion_check(i: int, gb: GlobalBasisSet) -> dict:
    """Expand f_i G(b) over the global basis and check its shape."""
    C, rep, datum = gb.crystal, gb.rep, gb.rep.datum
    real = datum.is_real(i)
    entries, fails = [], []
    for b in C.nodes:
        beta = gb.beta_of(b)
        if rep.is_frontier(beta):
            continue
        target = add_beta(beta, i)
        v = rep.apply_lower(i, beta, gb.G[b])
        coeffs = gb.expand(target, v) if any(v) else {}
        if any(v) and not gb.nodes_at(target):
            fails.append({"node": b, "reason": "image outside computed weights"})
            continue
        lead = C.f[i].get(b)
        eps_b = C.eps[b][i]
        for b2, c in coeffs.items():
            entries.append({"node": b, "target": b2, "coeff": str(c)})
            if not _is_integral_laurent(c):
                fails.append({"node": b, "target": b2, "reason": "coefficient not in A"})
        if real:
            want = datum.quantum_integer(1 + eps_b, i)
            if lead is not None and coeffs.get(lead, ZERO) != want:
                fails.append({"node": b, "reason": f"leading coefficient {coeffs.get(lead, ZERO)} != {want}"})
            for b2 in coeffs:
                if b2 != lead and not C.eps[b2][i] > 1 + eps_b:
                    fails.append({"node": b, "target": b2, "reason": "correction violates the eps bound"})
        else:
            want = {lead: ONE} if lead is not None else {}
            if coeffs != want:
                fails.append({"node": b, "reason": "f_i G(b) != G(f~_i b)"})
    return {"i": i + 1, "ok": not fails, "coefficients": entries, "failures": fails[:20]}


def filtration_check(i: int, n: int, gb: GlobalBasisSet) -> dict:
    """Span of {G(b) : level_i(b) >= n} versus sum_{k>=n} f_i^(k) V, per weight.

    The level is eps_i for real i and the string length max{m : e~_i^m b != 0}
    for imaginary i (eps_i vanishes identically there).
    """
    C, rep = gb.crystal, gb.rep
    real = rep.datum.is_real(i)
    fails, checked = [], 0
    for beta in rep.betas():
        d = rep.dim(beta)
        nodes = gb.nodes_at(beta)
        sel = [gb.G[b] for b in nodes if (C.eps[b][i] if real else C.string_length_up(i, b)) >= n]
        imgs = []
        k = max(n, 0)
        while beta[i] - k >= 0:
            src = add_beta(beta, i, -k)
            if rep.has(src):
                m = rep.lower_power(i, src, k)
                imgs.extend(linalg.transpose(m, rep.dim(src)))
            k += 1
        checked += 1
        if not linalg.same_span(sel, imgs, d, QQq):
            fails.append({"weight": list(beta), "selected": len(sel), "image_rank": linalg.span_rank(imgs, QQq)})
    return {"i": i + 1, "n": n, "ok": not fails, "weights_checked": checked, "failures": fails[:20]}
