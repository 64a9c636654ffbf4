"""Independent reference computations used to cross-check the main routes.

None of these touch the word models: positive roots come from closing the
simple roots under simple reflections, weight multiplicities of U^- from
the Kostant partition count, and module dimensions from the Weyl formula.
All of them assume a finite-type (real, positive definite) datum.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cartan import CartanDatum


def positive_roots(datum: CartanDatum, max_height: int = 64) -> list:
    """Positive roots (root coordinates) of a finite-type datum."""
    if not all(datum.is_real(i) for i in datum.indices):
        raise ValueError("root closure needs a datum with only real indices")
    n = datum.n
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for r in frontier:
            for i in range(n):
                # s_i(r) = r - <h_i, r> alpha_i with <h_i, alpha_j> = a_ij
                c = sum(datum.A[i][j] * r[j] for j in range(n))
                s = list(r)
                s[i] -= c
                s = tuple(s)
                if all(x >= 0 for x in s) and any(s) and s not in roots:
                    if sum(s) > max_height:
                        raise ValueError("root closure does not terminate; datum not of finite type?")
                    roots.add(s)
                    new.append(s)
        frontier = new
    return sorted(roots, key=lambda r: (sum(r), r))


def kostant_partition(datum: CartanDatum, beta) -> int:
    """Number of ways to write beta as an unordered sum of positive roots."""
    roots = positive_roots(datum)

    @lru_cache(maxsize=None)
    def count(rest: tuple, k: int) -> int:
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        total = 0
        r = roots[k]
        cur = rest
        while all(x >= 0 for x in cur):
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, r))
        return total

    return count(tuple(beta), 0)


def weyl_dimension(datum: CartanDatum, lam) -> int:
    """prod over positive roots of (lambda + rho, alpha) / (rho, alpha); lam in fundamental coordinates."""
    lam = list(lam)[: datum.n]
    num, den = Fraction(1), Fraction(1)
    for r in positive_roots(datum):
        # (Lambda_i, alpha_j) = s_j delta_ij
        a = sum(r[j] * datum.s[j] * (lam[j] + 1) for j in range(datum.n))
        b = sum(r[j] * datum.s[j] for j in range(datum.n))
        num *= a
        den *= b
    val = num / den
    assert val.denominator == 1
    return int(val)


def sl2_chain(m: int) -> dict:
    """Classical sl2 crystal of highest weight m: eps and phi along the chain."""
    return {k: {"eps": k, "phi": m - k} for k in range(m + 1)}
