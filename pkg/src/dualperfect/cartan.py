"""Borcherds-Cartan data, weight lattices and quantum integers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .linalg import QQ
from .scalars import ONE, LaurentPoly, Scalar


class InvalidDatum(ValueError):
    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class NotDominant(ValueError):
    pass


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"valid": self.ok, "violations": list(self.violations)}


def find_symmetrizer(A: Sequence[Sequence[int]]):
    """Smallest positive integer vector ``s`` with ``diag(s) A`` symmetric, or None."""
    n = len(A)
    ratio: list = [None] * n
    for start in range(n):
        if ratio[start] is not None:
            continue
        ratio[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or A[i][j] == 0 or A[j][i] == 0:
                    continue
                # s_j = s_i a_ij / a_ji
                r = ratio[i] * Fraction(A[i][j], A[j][i])
                if r <= 0:
                    return None
                if ratio[j] is None:
                    ratio[j] = r
                    stack.append(j)
                elif ratio[j] != r:
                    return None
    from math import lcm, gcd

    den = 1
    for r in ratio:
        den = lcm(den, r.denominator)
    s = [int(r * den) for r in ratio]
    g = 0
    for x in s:
        g = gcd(g, x)
    return tuple(x // g for x in s)


def validate(A, s=None, lattice=None) -> ValidationReport:
    """Check the Borcherds-Cartan conditions and, if given, an explicit realization."""
    v = []
    n = len(A)
    if n == 0 or any(len(row) != n for row in A):
        return ValidationReport(False, ["A must be a nonempty square matrix"])
    for i in range(n):
        a = A[i][i]
        if a != 2 and a > 0:
            v.append(f"a_{i+1}{i+1}={a}: diagonal entries must be 2 or <= 0")
        elif a <= 0 and a % 2:
            v.append(f"a_{i+1}{i+1}={a}: imaginary diagonal entries must be even")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if A[i][j] > 0:
                v.append(f"a_{i+1}{j+1}={A[i][j]} > 0")
            if (A[i][j] == 0) != (A[j][i] == 0):
                v.append(f"a_{i+1}{j+1}={A[i][j]} but a_{j+1}{i+1}={A[j][i]}: zero pattern not symmetric")
    if s is not None:
        if len(s) != n or any(int(x) != x or x <= 0 for x in s):
            v.append("symmetrizer must be n positive integers")
        else:
            for i in range(n):
                for j in range(i + 1, n):
                    if s[i] * A[i][j] != s[j] * A[j][i]:
                        v.append(f"DA not symmetric at ({i+1},{j+1})")
    elif not v and find_symmetrizer(A) is None:
        v.append("A is not symmetrizable")
    if lattice is not None and not v:
        v.extend(_check_lattice(A, lattice))
    return ValidationReport(not v, v)


def _check_lattice(A, lattice) -> list:
    v = []
    n = len(A)
    try:
        alpha = [tuple(int(x) for x in a) for a in lattice["alpha"]]
        h = [tuple(int(x) for x in a) for a in lattice["h"]]
        Lam = [tuple(int(x) for x in a) for a in lattice["Lambda"]]
    except (KeyError, TypeError, ValueError):
        return ["lattice needs integer vectors 'alpha', 'h', 'Lambda'"]
    if not (len(alpha) == len(h) == len(Lam) == n):
        return ["lattice needs one alpha, h, Lambda per index"]
    dim = len(alpha[0])
    if any(len(x) != dim for x in alpha + h + Lam):
        return ["lattice vectors must share one length"]
    for i in range(n):
        for j in range(n):
            if _dot(h[i], alpha[j]) != A[i][j]:
                v.append(f"<h_{i+1}, alpha_{j+1}> != a_{i+1}{j+1}")
            if _dot(h[j], Lam[i]) != (1 if i == j else 0):
                v.append(f"<h_{j+1}, Lambda_{i+1}> != delta")
    if linalg.rank([[Fraction(x) for x in a] for a in alpha], QQ) != n:
        v.append("simple roots are linearly dependent")
    return v


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


class CartanDatum:
    """A validated Borcherds-Cartan datum with an explicit integral realization.

    Indices are ``0..n-1`` internally.  Weights are integer tuples in
    P = Z^(n+c); by default ``h_i`` pairs with the i-th coordinate and
    ``Lambda_i`` is the i-th unit vector, so a dominant weight given as
    ``(m_1, ..., m_n)`` means ``sum m_i Lambda_i``.
    """

    def __init__(self, A, s=None, lattice=None):
        A = tuple(tuple(int(x) for x in row) for row in A)
        report = validate(A, s, lattice)
        if not report.ok:
            raise InvalidDatum(report.violations)
        self.A = A
        self.n = len(A)
        self.s = tuple(int(x) for x in s) if s is not None else find_symmetrizer(A)
        if lattice is None:
            lattice = minimal_realization(A)
        self.alpha = tuple(tuple(int(x) for x in a) for a in lattice["alpha"])
        self.h = tuple(tuple(int(x) for x in a) for a in lattice["h"])
        self.Lambda = tuple(tuple(int(x) for x in a) for a in lattice["Lambda"])
        self.rank_P = len(self.alpha[0])
        self._alpha_cols = [[Fraction(self.alpha[j][r]) for j in range(self.n)] for r in range(self.rank_P)]

    # -- identity --------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "A": [list(r) for r in self.A],
            "s": list(self.s),
            "lattice": {
                "alpha": [list(a) for a in self.alpha],
                "h": [list(a) for a in self.h],
                "Lambda": [list(a) for a in self.Lambda],
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "CartanDatum":
        return cls(data["A"], data.get("s"), data.get("lattice"))

    def __eq__(self, other) -> bool:
        return isinstance(other, CartanDatum) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash((self.A, self.s, self.alpha, self.h))

    def __repr__(self) -> str:
        return f"CartanDatum(A={[list(r) for r in self.A]}, s={list(self.s)})"

    # -- indices -----------------------------------------------------------------
    @property
    def indices(self) -> range:
        return range(self.n)

    def is_real(self, i: int) -> bool:
        return self.A[i][i] == 2

    def is_imaginary(self, i: int) -> bool:
        return self.A[i][i] <= 0

    def sym(self, i: int, j: int) -> int:
        """(alpha_i, alpha_j) = s_i a_ij."""
        return self.s[i] * self.A[i][j]

    # -- weights -----------------------------------------------------------------
    def pair(self, i: int, weight: Sequence[int]) -> int:
        """<h_i, weight>."""
        return _dot(self.h[i], weight)

    def weight(self, coords: Sequence[int]) -> tuple:
        """Weight from fundamental-weight coordinates or a full P-vector."""
        coords = tuple(int(x) for x in coords)
        if len(coords) == self.rank_P:
            return coords
        if len(coords) == self.n:
            return tuple(sum(c * L[r] for c, L in zip(coords, self.Lambda)) for r in range(self.rank_P))
        raise ValueError(f"weight needs {self.n} or {self.rank_P} coordinates, got {len(coords)}")

    def is_dominant(self, weight: Sequence[int]) -> bool:
        return all(self.pair(i, weight) >= 0 for i in self.indices)

    def root_sum(self, beta: Sequence[int]) -> tuple:
        """sum beta_i alpha_i as a P-vector."""
        return tuple(sum(b * self.alpha[i][r] for i, b in enumerate(beta)) for r in range(self.rank_P))

    def lower(self, top: Sequence[int], beta: Sequence[int]) -> tuple:
        """top - sum beta_i alpha_i."""
        rs = self.root_sum(beta)
        return tuple(t - x for t, x in zip(top, rs))

    def shift(self, weight: Sequence[int], i: int, k: int = 1) -> tuple:
        """weight + k alpha_i."""
        return tuple(w + k * a for w, a in zip(weight, self.alpha[i]))

    def root_coordinates(self, diff: Sequence[int]):
        """Coefficients of ``diff`` in the simple roots, or None if outside Q."""
        x = linalg.solve(self._alpha_cols, [Fraction(d) for d in diff], QQ)
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return tuple(int(c) for c in x)

    def in_positive_cone(self, diff: Sequence[int]) -> bool:
        c = self.root_coordinates(diff)
        return c is not None and all(x >= 0 for x in c)

    def height(self, diff: Sequence[int]):
        """Height of ``diff`` when it lies in Q^+, else None."""
        c = self.root_coordinates(diff)
        if c is None or any(x < 0 for x in c):
            return None
        return sum(c)

    # -- quantum numbers ----------------------------------------------------------
    def qi(self, i: int, power: int = 1) -> Scalar:
        return Scalar.q(self.s[i] * power)

    def quantum_integer(self, n: int, i: int) -> Scalar:
        return quantum_integer(n, self.s[i])

    def quantum_factorial(self, n: int, i: int) -> Scalar:
        return quantum_factorial(n, self.s[i])

    def quantum_binomial(self, m1: int, m2: int, i: int) -> Scalar:
        return quantum_binomial(m1, m2, self.s[i])

    def divided_power_denominator(self, k: int, i: int) -> Scalar:
        """[k]_i! for real i, 1 for imaginary i."""
        return self.quantum_factorial(k, i) if self.is_real(i) else ONE


def minimal_realization(A) -> dict:
    """Integral realization of rank n + (n - rank A).

    ``h_i`` and ``Lambda_i`` are unit vectors in the first n coordinates;
    ``alpha_j`` is column j of A, padded with a distinct unit vector for each
    column outside a greedily chosen maximal independent set of columns.
    """
    n = len(A)
    cols = [[Fraction(A[r][j]) for r in range(n)] for j in range(n)]
    ech = linalg.Echelon(n, QQ)
    extra = []
    for j in range(n):
        if not ech.add(cols[j]):
            extra.append(j)
    c = len(extra)
    alpha = []
    for j in range(n):
        pad = [0] * c
        if j in extra:
            pad[extra.index(j)] = 1
        alpha.append([A[r][j] for r in range(n)] + pad)
    unit = [[1 if r == i else 0 for r in range(n + c)] for i in range(n)]
    return {"alpha": alpha, "h": unit, "Lambda": [list(u) for u in unit]}


@lru_cache(maxsize=None)
def quantum_integer(n: int, s: int = 1) -> Scalar:
    """[n] with q replaced by q^s: q^(s(n-1)) + q^(s(n-3)) + ... + q^(-s(n-1))."""
    if n == 0:
        return Scalar(0)
    if n < 0:
        return -quantum_integer(-n, s)
    return Scalar(LaurentPoly.from_terms({s * (n - 1 - 2 * k): 1 for k in range(n)}))


@lru_cache(maxsize=None)
def quantum_factorial(n: int, s: int = 1) -> Scalar:
    if n < 0:
        raise ValueError("quantum factorial of a negative integer")
    out = ONE
    for k in range(1, n + 1):
        out = out * quantum_integer(k, s)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(m1: int, m2: int, s: int = 1) -> Scalar:
    if not 0 <= m2 <= m1:
        raise ValueError("quantum binomial needs 0 <= m2 <= m1")
    return quantum_factorial(m1, s) / (quantum_factorial(m2, s) * quantum_factorial(m1 - m2, s))


NAMED = {
    "A1": {"A": [[2]], "s": [1]},
    "sl2": {"A": [[2]], "s": [1]},
    "A2": {"A": [[2, -1], [-1, 2]], "s": [1, 1]},
    "A1xA1": {"A": [[2, 0], [0, 2]], "s": [1, 1]},
    "B2": {"A": [[2, -2], [-1, 2]], "s": [1, 2]},
    "G2": {"A": [[2, -3], [-1, 2]], "s": [1, 3]},
    "im0": {"A": [[0]], "s": [1]},
    "im-2": {"A": [[-2]], "s": [1]},
}


def named(name: str) -> CartanDatum:
    d = NAMED[name]
    return CartanDatum(d["A"], d["s"])
