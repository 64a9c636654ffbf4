from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from dualperfect import linalg
from dualperfect.linalg import QQ, QQq, Echelon
from dualperfect.scalars import Q, Scalar

small = st.integers(-3, 3).map(Fraction)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), matrices(n, n + 1))))
def test_rank_nullity(data):
    n, m = data
    r = linalg.rank(m, QQ)
    ns = linalg.nullspace(m, n + 1, QQ)
    assert r + len(ns) == n + 1
    for v in ns:
        assert not any(linalg.matvec(m, v, QQ))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_inverse_when_full_rank(m):
    n = len(m)
    if linalg.rank(m, QQ) < n:
        return
    inv = linalg.inverse(m, QQ)
    assert linalg.matmul(m, inv, QQ) == linalg.identity(n, QQ)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve(m, x):
    b = linalg.matvec(m, x, QQ)
    y = linalg.solve(m, b, QQ)
    assert y is not None
    assert linalg.matvec(m, y, QQ) == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_echelon_agrees_with_rank(vectors):
    e = Echelon(3, QQ)
    for v in vectors:
        e.add(v)
    assert len(e) == linalg.rank(vectors, QQ)
    assert all(e.contains(v) for v in vectors)


def test_rational_function_field():
    m = [[Q, Scalar(1)], [Scalar(1), Q ** -1]]
    assert linalg.rank(m, QQq) == 1
    m2 = [[Q, Scalar(1)], [Scalar(1), Q]]
    assert linalg.rank(m2, QQq) == 2
    inv = linalg.inverse(m2, QQq)
    assert linalg.matmul(m2, inv, QQq) == linalg.identity(2, QQq)


def test_same_span():
    a = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(1)]]
    b = [[Fraction(0), Fraction(2)], [Fraction(3), Fraction(0)]]
    assert linalg.same_span(a, b, 2, QQ)
    assert not linalg.same_span(a[:1], b, 2, QQ)
    assert linalg.span_contains(a[:1], [Fraction(5), Fraction(0)], QQ)
