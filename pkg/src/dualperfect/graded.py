"""Weight-truncated quotients of a free algebra by the radical of a form.

Both U_q^-(g) and V_q(lambda) are modelled the same way: the weight space
indexed by ``beta`` in Q^+ is spanned by words ``(i_1, ..., i_k)`` (standing
for ``f_{i_1} ... f_{i_k}`` applied to 1 or to v_lambda), the form is computed
by stripping the first letter of the left word and applying a raising
operator to the right word, and the quotient by the radical is represented
by a greedy monomial basis.

Subclasses supply :meth:`WordRep.raise_word`.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from . import linalg
from .cartan import CartanDatum
from .linalg import QQq, Echelon
from .scalars import ONE, ZERO, Scalar


class TruncationEscape(LookupError):
    """A computation needed a weight space beyond the truncation depth."""


Word = tuple


def add_beta(beta: tuple, i: int, k: int = 1) -> tuple:
    b = list(beta)
    b[i] += k
    return tuple(b)


def height(beta: Sequence[int]) -> int:
    return sum(beta)


class WeightSpace:
    """One graded piece: candidate words, their Gram matrix and the chosen basis."""

    __slots__ = ("beta", "words", "gram", "basis", "basis_words", "gram_inv", "index")

    def __init__(self, beta, words, gram, basis):
        self.beta = beta
        self.words = words
        self.gram = gram
        self.basis = basis
        self.basis_words = [words[k] for k in basis]
        self.index = {w: k for k, w in enumerate(words)}
        gbb = [[gram[a][b] for b in basis] for a in basis]
        self.gram_inv = linalg.inverse(gbb, QQq) if basis else []

    @property
    def dim(self) -> int:
        return len(self.basis)


class WordRep:
    """Base class for the quotient-by-radical models."""

    def __init__(self, datum: CartanDatum, depth: int, top: Sequence[int]):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.datum = datum
        self.depth = depth
        self.top = tuple(top)
        self._form_memo: dict = {}
        self._raise_memo: dict = {}
        self._lower_mats: dict = {}
        self._raise_mats: dict = {}
        self.spaces: dict = {}
        self._build()

    # -- to be provided ------------------------------------------------------
    def raise_word(self, i: int, word: Word) -> list:
        """Raising operator on a word: list of ``(coeff, shorter word)``."""
        raise NotImplementedError

    # -- form -------------------------------------------------------------------
    def form_words(self, w: Word, u: Word) -> Scalar:
        """Form of two words, via (f_i P, Q) = (P, raise_i Q) and (1, 1) = 1."""
        if len(w) != len(u):
            return ZERO
        if not w:
            return ONE
        key = (w, u)
        val = self._form_memo.get(key)
        if val is None:
            val = ZERO
            rest = w[1:]
            for c, u2 in self._raise_cached(w[0], u):
                val = val + c * self.form_words(rest, u2)
            self._form_memo[key] = val
        return val

    def _raise_cached(self, i: int, u: Word) -> list:
        key = (i, u)
        val = self._raise_memo.get(key)
        if val is None:
            val = self.raise_word(i, u)
            self._raise_memo[key] = val
        return val

    def form(self, x: dict, y: dict) -> Scalar:
        """Form of two linear combinations of words (``{word: coeff}``)."""
        wx = {_weight_key(w, self.datum.n) for w in x}
        wy = {_weight_key(w, self.datum.n) for w in y}
        if wx and wy and wx != wy:
            raise ValueError("form of elements of different weights")
        acc = ZERO
        for w, a in x.items():
            if not a:
                continue
            for u, b in y.items():
                if b:
                    acc = acc + a * b * self.form_words(w, u)
        return acc

    # -- construction -----------------------------------------------------------
    def _build(self) -> None:
        n = self.datum.n
        zero = tuple([0] * n)
        self.spaces[zero] = self._make_space(zero, [()])
        frontier = [zero]
        for h in range(1, self.depth + 1):
            targets: dict = {}
            for beta in frontier:
                sp = self.spaces[beta]
                for i in range(n):
                    nb = add_beta(beta, i)
                    for w in sp.basis_words:
                        targets.setdefault(nb, set()).add((i,) + w)
            new_frontier = []
            for nb in sorted(targets):
                cands = sorted(targets[nb])
                sp = self._make_space(nb, cands)
                if sp.dim:
                    self.spaces[nb] = sp
                    new_frontier.append(nb)
            frontier = new_frontier
            if not frontier:
                break

    def _make_space(self, beta, words) -> WeightSpace:
        gram = [[self.form_words(w, u) for u in words] for w in words]
        ech = Echelon(len(words), QQq)
        basis = [k for k, row in enumerate(gram) if ech.add(row)]
        return WeightSpace(beta, words, gram, basis)

    # -- queries -------------------------------------------------------------
    def betas(self) -> list:
        return sorted(self.spaces, key=lambda b: (height(b), b))

    def space(self, beta) -> WeightSpace:
        sp = self.spaces.get(tuple(beta))
        if sp is None:
            if height(beta) > self.depth:
                raise TruncationEscape(f"weight {beta} is beyond depth {self.depth}")
        return sp

    def dim(self, beta) -> int:
        beta = tuple(beta)
        if any(b < 0 for b in beta):
            return 0
        if height(beta) > self.depth:
            raise TruncationEscape(f"weight {beta} is beyond depth {self.depth}")
        sp = self.spaces.get(beta)
        return sp.dim if sp else 0

    def has(self, beta) -> bool:
        return tuple(beta) in self.spaces

    def weight_of(self, beta) -> tuple:
        return self.datum.lower(self.top, beta)

    def dims(self) -> dict:
        return {b: self.spaces[b].dim for b in self.betas()}

    def total_dim(self) -> int:
        return sum(sp.dim for sp in self.spaces.values())

    def is_frontier(self, beta) -> bool:
        return height(beta) >= self.depth

    def iter_basis(self) -> Iterator[tuple]:
        for b in self.betas():
            for k, w in enumerate(self.spaces[b].basis_words):
                yield b, k, w

    def coords(self, beta, combo: dict) -> list:
        """Coordinates in the chosen basis of a combination ``{word: coeff}`` of weight beta."""
        beta = tuple(beta)
        sp = self.space(beta)
        if sp is None:
            return []
        pair = []
        for b in sp.basis_words:
            acc = ZERO
            for u, c in combo.items():
                if c:
                    acc = acc + c * self.form_words(b, u)
            pair.append(acc)
        return linalg.matvec(sp.gram_inv, pair, QQq)

    def word_vector(self, word: Word) -> list:
        beta = _weight_key(word, self.datum.n)
        return self.coords(beta, {tuple(word): ONE})

    # -- operator matrices -------------------------------------------------------
    def lower(self, i: int, beta) -> list:
        """Matrix of f_i : V_beta -> V_(beta + alpha_i) in the chosen bases."""
        beta = tuple(beta)
        key = (i, beta)
        if key in self._lower_mats:
            return self._lower_mats[key]
        if height(beta) >= self.depth:
            raise TruncationEscape(f"f_{i+1} from {beta} leaves depth {self.depth}")
        src = self.spaces.get(beta)
        nb = add_beta(beta, i)
        dst = self.spaces.get(nb)
        if src is None or dst is None:
            mat = linalg.zeros(dst.dim if dst else 0, src.dim if src else 0, QQq)
        else:
            cols = []
            for w in src.basis_words:
                col_word = (i,) + w
                k = dst.index.get(col_word)
                pair = [dst.gram[a][k] for a in dst.basis] if k is not None else [
                    self.form_words(b, col_word) for b in dst.basis_words
                ]
                cols.append(linalg.matvec(dst.gram_inv, pair, QQq))
            mat = linalg.columns_to_matrix(cols, dst.dim, QQq)
        self._lower_mats[key] = mat
        return mat

    def raise_(self, i: int, beta) -> list:
        """Matrix of the raising operator V_beta -> V_(beta - alpha_i)."""
        beta = tuple(beta)
        key = (i, beta)
        if key in self._raise_mats:
            return self._raise_mats[key]
        src = self.spaces.get(beta)
        nb = add_beta(beta, i, -1)
        dst = self.spaces.get(nb) if min(nb) >= 0 else None
        if src is None or dst is None:
            mat = linalg.zeros(dst.dim if dst else 0, src.dim if src else 0, QQq)
        else:
            cols = []
            for w in src.basis_words:
                combo: dict = {}
                for c, u in self._raise_cached(i, w):
                    combo[u] = combo.get(u, ZERO) + c
                cols.append(self.coords(nb, combo))
            mat = linalg.columns_to_matrix(cols, dst.dim, QQq)
        self._raise_mats[key] = mat
        return mat

    def lower_power(self, i: int, beta, k: int, divided: bool = True) -> list:
        """Matrix of f_i^(k) (or f_i^k) from V_beta to V_(beta + k alpha_i)."""
        beta = tuple(beta)
        d = self.dim(beta)
        mat = linalg.identity(d, QQq)
        cur = beta
        for _ in range(k):
            mat = linalg.matmul(self.lower(i, cur), mat, QQq)
            cur = add_beta(cur, i)
        if divided and k > 1:
            den = self.datum.divided_power_denominator(k, i)
            if den != ONE:
                inv = ONE / den
                mat = [[x * inv for x in row] for row in mat]
        return mat

    def apply_lower(self, i: int, beta, v: Sequence) -> list:
        return linalg.matvec(self.lower(i, beta), v, QQq)

    def apply_raise(self, i: int, beta, v: Sequence) -> list:
        return linalg.matvec(self.raise_(i, beta), v, QQq)

    def top_vector(self) -> list:
        return [ONE]

    def zero_beta(self) -> tuple:
        return tuple([0] * self.datum.n)


def _weight_key(word: Word, n: int) -> tuple:
    b = [0] * n
    for i in word:
        b[i] += 1
    return tuple(b)


def word_beta(word: Word, n: int) -> tuple:
    return _weight_key(word, n)
