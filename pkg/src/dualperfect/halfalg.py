"""Weight-truncated model of the negative half U_q^-(g).

U_q^- is the free algebra on the f_i modulo the radical of the form
``(1, 1) = 1, (f_i P, Q) = (P, e'_i Q)``.  Words are written left to right,
``(i, j)`` meaning ``f_i f_j``.
"""

from __future__ import annotations

from itertools import permutations

from .cartan import CartanDatum
from .graded import Word, WordRep, word_beta
from .scalars import ONE, ZERO, Scalar


def e_prime(datum: CartanDatum, i: int, word: Word) -> list:
    """e'_i on a word, from e'_i f_j = delta_ij + q_i^(-a_ij) f_j e'_i and e'_i(1) = 0.

    Returns a list of ``(coeff, word)``; the term removing position t picks
    up ``prod_{s<t} q_i^(-a_{i, j_s})``.
    """
    return _strip(datum, i, word, -1)


def e_doubleprime(datum: CartanDatum, i: int, word: Word) -> list:
    """e''_i on a word: the same recursion with q_i^(+a_ij)."""
    return _strip(datum, i, word, +1)


def _strip(datum, i, word, sign):
    out = []
    exp = 0
    for t, j in enumerate(word):
        if j == i:
            out.append((Scalar.q(sign * exp), word[:t] + word[t + 1 :]))
        exp += datum.sym(i, j)
    return out


def collect(terms) -> dict:
    """``[(coeff, word)]`` -> ``{word: coeff}`` with zero entries dropped."""
    out: dict = {}
    for c, w in terms:
        out[w] = out.get(w, ZERO) + c
    return {w: c for w, c in out.items() if c}


class HalfAlgebra(WordRep):
    """U_q^-(g) truncated to heights <= depth.

    ``spaces[beta]`` describes U^-_{-beta}; ``lower(i, beta)`` is left
    multiplication by f_i and ``raise_(i, beta)`` is e'_i.
    """

    kind = "halfalgebra"

    def __init__(self, datum: CartanDatum, depth: int):
        super().__init__(datum, depth, tuple([0] * datum.rank_P))

    def raise_word(self, i: int, word: Word) -> list:
        return e_prime(self.datum, i, word)

    def weight_basis(self, beta):
        """``(basis words, dimension)`` of U^-_{-beta}."""
        sp = self.space(tuple(beta))
        if sp is None:
            return [], 0
        return list(sp.basis_words), sp.dim


def form_by_permutations(datum: CartanDatum, w: Word, u: Word) -> Scalar:
    """Independent closed form of the bilinear form on words.

    (f_w, f_u) = sum over bijections sigma with u[sigma(r)] = w[r] of
    q^(-sum over inversions (r < r', sigma(r) > sigma(r')) of (alpha_{w_r}, alpha_{w_r'})).
    Exponential; used only as a cross-check.
    """
    if sorted(w) != sorted(u):
        return ZERO
    n = len(w)
    acc = ZERO
    for sigma in permutations(range(n)):
        if any(u[sigma[r]] != w[r] for r in range(n)):
            continue
        e = 0
        for r in range(n):
            for r2 in range(r + 1, n):
                if sigma[r] > sigma[r2]:
                    e -= datum.sym(w[r], w[r2])
        acc = acc + Scalar.q(e)
    return acc


def serre_element(datum: CartanDatum, i: int, j: int) -> dict:
    """sum_k (-1)^k [1-a_ij choose k]_i f_i^(1-a_ij-k) f_j f_i^k, for real i != j."""
    if not datum.is_real(i) or i == j:
        raise ValueError("Serre relation needs real i != j")
    m = 1 - datum.A[i][j]
    out = {}
    for k in range(m + 1):
        c = datum.quantum_binomial(m, k, i)
        if k % 2:
            c = -c
        out[(i,) * (m - k) + (j,) + (i,) * k] = c
    return out


def commutator_element(i: int, j: int) -> dict:
    return {(i, j): ONE, (j, i): -ONE}


def in_radical(rep: WordRep, combo: dict) -> bool:
    """True when the combination pairs to zero with every word of its weight."""
    if not combo:
        return True
    beta = word_beta(next(iter(combo)), rep.datum.n)
    from itertools import permutations as perms

    letters = [i for i, b in enumerate(beta) for _ in range(b)]
    for w in set(perms(letters)):
        acc = ZERO
        for u, c in combo.items():
            acc = acc + c * rep.form_words(w, u)
        if acc:
            return False
    return True
