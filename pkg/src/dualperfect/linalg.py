"""Exact dense linear algebra over Q or Q(q).

Matrices are lists of rows; vectors are lists.  Every routine takes a
:class:`Field` so that the same code serves classical inputs (``QQ``,
``fractions.Fraction`` entries) and quantum ones (``QQq``, :class:`Scalar`
entries).  Pivots are chosen by least complexity to keep intermediate
expressions small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from .scalars import ONE, ZERO, Scalar, to_scalar


@dataclass(frozen=True)
class Field:
    name: str
    zero: Any
    one: Any
    coerce: Callable[[Any], Any]
    cost: Callable[[Any], int]
    fmt: Callable[[Any], str]

    def __repr__(self) -> str:
        return f"Field({self.name})"


def _fraction(x) -> Fraction:
    if isinstance(x, Scalar):
        if not x.is_rational():
            raise ValueError(f"{x} is not a rational number")
        return x.num.coeff(0)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _fraction_cost(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


QQ = Field("QQ", Fraction(0), Fraction(1), _fraction, _fraction_cost, str)
QQq = Field("QQ(q)", ZERO, ONE, to_scalar, lambda s: s.complexity, str)

FIELDS = {"QQ": QQ, "QQ(q)": QQq}


def zeros(rows: int, cols: int, field: Field) -> list:
    return [[field.zero] * cols for _ in range(rows)]


def identity(n: int, field: Field) -> list:
    m = zeros(n, n, field)
    for k in range(n):
        m[k][k] = field.one
    return m


def transpose(m: Sequence[Sequence], cols: int | None = None) -> list:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(r) for r in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], field: Field) -> list:
    """Product of an r x k and a k x c matrix (k may be 0)."""
    if not a:
        return []
    k = len(a[0])
    c = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [field.zero] * c
        for t in range(k):
            x = row[t]
            if not x:
                continue
            brow = b[t]
            for j in range(c):
                y = brow[j]
                if y:
                    new[j] = new[j] + x * y
        out.append(new)
    return out


def matvec(a: Sequence[Sequence], v: Sequence, field: Field) -> list:
    out = []
    for row in a:
        acc = field.zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def is_zero_vector(v: Sequence) -> bool:
    return not any(v)


def rref(m: Sequence[Sequence], field: Field) -> tuple[list, list]:
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    rows = [list(r) for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        best, best_cost = None, None
        for k in range(r, len(rows)):
            x = rows[k][c]
            if x:
                cost = field.cost(x)
                if best is None or cost < best_cost:
                    best, best_cost = k, cost
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        if piv != field.one:
            inv = field.one / piv
            rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        for k in range(len(rows)):
            if k != r:
                x = rows[k][c]
                if x:
                    row = rows[k]
                    rows[k] = [a - x * b if b else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Sequence[Sequence], field: Field) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    rows = [list(r) for r in m if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = field.one
    for c in range(ncols):
        best, best_cost = None, None
        for k in range(r, len(rows)):
            x = rows[k][c]
            if x:
                cost = field.cost(x)
                if best is None or cost < best_cost:
                    best, best_cost = k, cost
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for k in range(r + 1, len(rows)):
            x = rows[k][c]
            row = rows[k]
            # row <- (piv*row - x*prow) / prev ; exact division
            new = []
            for j in range(ncols):
                a = row[j]
                b = prow[j]
                v = piv * a if a else field.zero
                if x and b:
                    v = v - x * b
                if v and prev != field.one:
                    v = v / prev
                new.append(v)
            rows[k] = new
        prev = piv
        r += 1
        if r == len(rows):
            break
    return r


def nullspace(m: Sequence[Sequence], ncols: int, field: Field) -> list:
    """Basis of ``{x : m x = 0}`` as a list of vectors."""
    if not m:
        return [[field.one if j == k else field.zero for j in range(ncols)] for k in range(ncols)]
    rows, pivots = rref(m, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, p in zip(rows, pivots):
            x = row[f]
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence], b: Sequence, field: Field):
    """Some solution ``x`` of ``m x = b`` or ``None`` when inconsistent.

    ``m`` is r x c; free variables are set to zero.
    """
    nrows = len(m)
    if nrows == 0:
        return None if any(b) else []
    ncols = len(m[0])
    aug = [list(row) + [b[k]] for k, row in enumerate(m)]
    rows, pivots = rref(aug, field)
    if pivots and pivots[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return x


def inverse(m: Sequence[Sequence], field: Field) -> list:
    n = len(m)
    aug = [list(row) + [field.one if j == k else field.zero for j in range(n)] for k, row in enumerate(m)]
    rows, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in rows]


def columns_to_matrix(cols: Sequence[Sequence], nrows: int, field: Field) -> list:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[r] for col in cols] for r in range(nrows)]


def span_rank(vectors: Sequence[Sequence], field: Field) -> int:
    return rank([list(v) for v in vectors], field) if vectors else 0


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace of k^n.

    ``add`` inserts a vector and reports whether it enlarged the span;
    ``reduce`` returns the residual of a vector against the current span.
    """

    def __init__(self, n: int, field: Field):
        self.n = n
        self.field = field
        self.rows: list = []  # pivot entry normalized to one
        self.pivots: list = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> list:
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            x = v[p]
            if x:
                v = [a - x * b if b else a for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence) -> bool:
        r = self.reduce(v)
        best, best_cost = None, None
        for j, x in enumerate(r):
            if x:
                cost = self.field.cost(x)
                if best is None or cost < best_cost:
                    best, best_cost = j, cost
        if best is None:
            return False
        inv = self.field.one / r[best]
        r = [x * inv if x else x for x in r]
        # keep existing rows reduced at the new pivot
        for k, row in enumerate(self.rows):
            x = row[best]
            if x:
                self.rows[k] = [a - x * b if b else a for a, b in zip(row, r)]
        self.rows.append(r)
        self.pivots.append(best)
        return True

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))


def span_contains(vectors: Sequence[Sequence], v: Sequence, field: Field) -> bool:
    if not any(v):
        return True
    if not vectors:
        return False
    e = Echelon(len(v), field)
    for w in vectors:
        e.add(w)
    return e.contains(v)


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], n: int, field: Field) -> bool:
    ea = Echelon(n, field)
    for v in a:
        ea.add(v)
    eb = Echelon(n, field)
    for v in b:
        eb.add(v)
    return len(ea) == len(eb) and all(ea.contains(v) for v in b)
