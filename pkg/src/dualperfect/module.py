"""Irreducible highest weight modules V_q(lambda), truncated by depth.

V_q(lambda) is the span of the monomial vectors f_{i_1} ... f_{i_k} v_lambda
modulo the radical of the contravariant form ``(v, v) = 1,
(f_i u, v) = (u, e_i v)``.  The raising operators come from
``e_i f_j u = f_j e_i u + delta_ij [<h_i, wt u>]_i u`` and ``e_i v_lambda = 0``.
"""

from __future__ import annotations

from typing import Sequence

from . import linalg
from .cartan import CartanDatum, NotDominant
from .graded import TruncationEscape, Word, WordRep, add_beta, height
from .linalg import QQq


def e_action(datum: CartanDatum, lam: Sequence[int], i: int, word: Word) -> list:
    """e_i on the monomial vector of ``word``: list of ``(coeff, shorter word)``."""
    out = []
    # <h_i, wt(f_{u_{t+1}} ... f_{u_k} v_lambda)>, accumulated from the right
    k = len(word)
    tail = [0] * (k + 1)
    acc = datum.pair(i, lam)
    tail[k] = acc
    for t in range(k - 1, -1, -1):
        tail[t] = tail[t + 1] - datum.A[i][word[t]]
    for t, j in enumerate(word):
        if j == i:
            c = datum.quantum_integer(tail[t + 1], i)
            if c:
                out.append((c, word[:t] + word[t + 1 :]))
    return out


class HWModule(WordRep):
    """V_q(lambda) up to depth ``d``; ``spaces[beta]`` is V_(lambda - beta)."""

    kind = "module"

    def __init__(self, datum: CartanDatum, lam: Sequence[int], depth: int):
        lam = datum.weight(lam)
        if not datum.is_dominant(lam):
            raise NotDominant(f"{list(lam)} is not dominant")
        self.lam = lam
        super().__init__(datum, depth, lam)

    def raise_word(self, i: int, word: Word) -> list:
        return e_action(self.datum, self.lam, i, word)

    def k_action(self, i: int, beta) -> int:
        """K_i acts on V_(lambda - beta) by q_i^(returned exponent)."""
        return self.datum.pair(i, self.weight_of(beta))


def build(datum: CartanDatum, lam: Sequence[int], depth: int) -> HWModule:
    return HWModule(datum, lam, depth)


def check_oint(M: HWModule) -> dict:
    """Check the integrability conditions on every computed weight space."""
    datum = M.datum
    report = {}

    # real f_i locally nilpotent: witnessed when some power kills v within depth
    witnessed, undetermined, checked = 0, 0, 0
    for i in datum.indices:
        if not datum.is_real(i):
            continue
        for beta in M.betas():
            d = M.dim(beta)
            for k in range(d):
                checked += 1
                v = [linalg.QQq.zero] * d
                v[k] = linalg.QQq.one
                cur, b = v, beta
                hit = False
                while True:
                    if not any(cur):
                        hit = True
                        break
                    try:
                        cur = M.apply_lower(i, b, cur)
                    except TruncationEscape:
                        break
                    b = add_beta(b, i)
                if hit:
                    witnessed += 1
                else:
                    undetermined += 1
    report["real_nilpotent"] = {
        "status": "vacuous" if checked == 0 else "pass",
        "checked": checked,
        "witnessed": witnessed,
        "undetermined_beyond_depth": undetermined,
    }

    fails_d, fails_e, fails_f = [], [], []
    n_d = n_e = n_f = 0
    for i in datum.indices:
        if datum.is_real(i):
            continue
        for beta in M.betas():
            mu = M.weight_of(beta)
            m = datum.pair(i, mu)
            n_d += 1
            if m < 0:
                fails_d.append({"i": i + 1, "weight": list(mu)})
            if m == 0:
                if height(beta) < M.depth:
                    n_e += 1
                    if any(any(r) for r in M.lower(i, beta)):
                        fails_e.append({"i": i + 1, "weight": list(mu)})
            if m == -datum.A[i][i]:
                n_f += 1
                if min(add_beta(beta, i, -1)) >= 0 and any(any(r) for r in M.raise_(i, beta)):
                    fails_f.append({"i": i + 1, "weight": list(mu)})
    for key, fails, n in (("imag_nonneg", fails_d, n_d), ("imag_zero_lower", fails_e, n_e), ("imag_top_raise", fails_f, n_f)):
        report[key] = {
            "status": "vacuous" if n == 0 else ("fail" if fails else "pass"),
            "checked": n,
            "failures": fails,
        }
    report["ok"] = not (fails_d or fails_e or fails_f)
    return report


def compare_with_halfalgebra(M: HWModule, U) -> dict:
    """Check that u -> u v_lambda maps U^- onto V(lambda) compatibly with every f_i.

    ``U`` is a half algebra model of at least the same depth.  For each
    weight the map sends U's basis words to their vectors in M; it must be
    surjective and intertwine the f_i matrices of the two models.
    """
    fails = []
    proj = {}
    for beta in M.betas():
        sp = U.space(beta)
        words = sp.basis_words if sp else []
        cols = [M.word_vector(w) for w in words]
        proj[beta] = linalg.columns_to_matrix(cols, M.dim(beta), QQq)
        if linalg.span_rank(cols, QQq) != M.dim(beta):
            fails.append({"beta": list(beta), "reason": "not surjective"})
    for beta in M.betas():
        if M.is_frontier(beta):
            continue
        for i in M.datum.indices:
            nb = add_beta(beta, i)
            if nb not in proj:
                continue
            lhs = linalg.matmul(proj[nb], U.lower(i, beta), QQq)
            rhs = linalg.matmul(M.lower(i, beta), proj[beta], QQq)
            if lhs != rhs:
                fails.append({"beta": list(beta), "i": i + 1, "reason": "f_i not intertwined"})
    return {"ok": not fails, "failures": fails}
