"""Tests for the half algebra and highest weight module models."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualperfect import linalg
from dualperfect.cartan import NotDominant, named
from dualperfect.graded import TruncationEscape, add_beta
from dualperfect.halfalg import HalfAlgebra, form_by_permutations, in_radical, serre_element
from dualperfect.linalg import QQq
from dualperfect.module import HWModule, check_oint, compare_with_halfalgebra
from dualperfect.oracles import kostant_partition, weyl_dimension
from dualperfect.scalars import ONE, Q

from conftest import rep


def gram(sp):
    return [[sp.gram[a][b] for b in sp.basis] for a in sp.basis]


def _contravariance_failures(R):
    bad = []
    for beta in R.betas():
        if R.is_frontier(beta):
            continue
        for i in R.datum.indices:
            nb = add_beta(beta, i)
            if not R.has(nb):
                continue
            F = R.lower(i, beta)
            E = R.raise_(i, nb)
            lhs = linalg.matmul(linalg.transpose(F, R.dim(beta)), gram(R.spaces[nb]), QQq)
            rhs = linalg.matmul(gram(R.spaces[beta]), E, QQq)
            if lhs != rhs:
                bad.append((i, beta))
    return bad


@pytest.mark.parametrize("name", ["sl2", "A2", "B2", "im0", "im-2"])
def test_form_is_contravariant_in_half_algebra(name):
    assert _contravariance_failures(rep(name, None, 4)) == []


@pytest.mark.parametrize("name, lam", [("sl2", (3,)), ("A2", (1, 1)), ("B2", (0, 1)), ("im0", (1,)), ("im-2", (2,))])
def test_form_is_contravariant_in_module(name, lam):
    assert _contravariance_failures(rep(name, lam, 4)) == []


words = st.lists(st.integers(0, 1), min_size=0, max_size=4).map(tuple)


@settings(max_examples=50, deadline=None)
@given(words, st.permutations(list(range(4))), st.sampled_from(["A2", "B2", "im-2"]))
def test_form_matches_permutation_formula(w, perm, name):
    if name == "im-2":
        w = tuple(0 for _ in w)
    u = tuple(w[k] for k in perm if k < len(w))
    U = rep(name, None, 4)
    assert U.form_words(w, u) == form_by_permutations(U.datum, w, u)
    assert U.form_words(w, u) == U.form_words(u, w)


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_serre_relations_lie_in_radical(name):
    d = named(name)
    U = HalfAlgebra(d, 5 if name == "G2" else 4)
    for i in d.indices:
        for j in d.indices:
            if i != j:
                assert in_radical(U, serre_element(d, i, j))


def test_imaginary_commuting_relation():
    # a_ij = 0 forces f_i f_j = f_j f_i even for imaginary indices
    from dualperfect.cartan import CartanDatum

    d = CartanDatum([[0, 0], [0, 2]], [1, 1])
    U = HalfAlgebra(d, 3)
    assert in_radical(U, {(0, 1): ONE, (1, 0): -ONE})
    assert U.dim((1, 1)) == 1


def test_A2_dims_match_kostant():
    U = rep("A2", None, 6)
    d = named("A2")
    for a in range(7):
        for b in range(7 - a):
            assert U.dim((a, b)) == kostant_partition(d, (a, b))


def test_imaginary_half_algebra_is_free():
    # a single imaginary index with a_ii <= 0: every word is independent
    U = rep("im-2", None, 4)
    assert [U.dim((k,)) for k in range(5)] == [1, 1, 1, 1, 1]
    d = named("im0")
    V = HalfAlgebra(d, 4)
    assert [V.dim((k,)) for k in range(5)] == [1, 1, 1, 1, 1]


def _apply(M, kind, i, beta, v):
    """Apply f_i or e_i to v in V_beta; None stands for the zero space."""
    if v is None:
        return None
    nb = add_beta(beta, i, 1 if kind == "f" else -1)
    if min(nb) < 0 or not M.has(nb):
        return None
    op = M.lower(i, beta) if kind == "f" else M.raise_(i, beta)
    return linalg.matvec(op, v, QQq)


def test_module_raise_relation():
    # e_i f_j - f_j e_i = delta_ij [<h_i, mu>]_i on V_mu
    M = rep("A2", (1, 1), 6)
    d = M.datum
    for beta in M.betas():
        if M.is_frontier(beta):
            continue
        mu = M.weight_of(beta)
        for k in range(M.dim(beta)):
            v = [ONE if r == k else QQq.zero for r in range(M.dim(beta))]
            for i in d.indices:
                for j in d.indices:
                    a = _apply(M, "e", i, add_beta(beta, j), _apply(M, "f", j, beta, v))
                    b = _apply(M, "f", j, add_beta(beta, i, -1), _apply(M, "e", i, beta, v))
                    n = len(v) if i == j else M.dim(add_beta(add_beta(beta, j), i, -1))
                    a = a or [QQq.zero] * n
                    b = b or [QQq.zero] * n
                    want = [x * d.quantum_integer(d.pair(i, mu), i) for x in v] if i == j else [QQq.zero] * n
                    assert [x - y for x, y in zip(a, b)] == want, (i, j, beta)


@pytest.mark.parametrize("name, lam, want", [("A2", (1, 0), 3), ("A2", (1, 1), 8), ("B2", (1, 1), 16), ("G2", (1, 0), 7), ("sl2", (4,), 5)])
def test_module_dimensions_match_weyl(name, lam, want):
    d = named(name)
    M = HWModule(d, lam, 10)
    assert M.total_dim() == weyl_dimension(d, lam) == want


def test_imaginary_modules():
    M = HWModule(named("im0"), (1,), 6)
    assert [M.dim((k,)) for k in range(7)] == [1] * 7
    assert HWModule(named("im0"), (0,), 6).total_dim() == 1
    # <h, lambda> = 0 puts f v in the radical for any imaginary index
    M2 = HWModule(named("im-2"), (0,), 4)
    assert M2.total_dim() == 1


def test_oint_report():
    r = check_oint(rep("A2", (1, 1), 6))
    assert r["ok"] and r["real_nilpotent"]["witnessed"] > 0
    r = check_oint(rep("im0", (1,), 5))
    assert r["ok"]
    assert r["real_nilpotent"]["status"] == "vacuous"


def test_not_dominant():
    with pytest.raises(NotDominant):
        HWModule(named("A2"), (1, -1), 3)


def test_truncation_escape():
    M = rep("sl2", (2,), 4)
    U = rep("sl2", None, 6)
    with pytest.raises(TruncationEscape):
        U.lower(0, (6,))
    with pytest.raises(TruncationEscape):
        U.dim((7,))
    assert M.dim((3,)) == 0


@pytest.mark.parametrize("name, lam, depth", [("sl2", (2,), 4), ("A2", (1, 1), 5), ("B2", (1, 0), 5), ("im0", (1,), 4), ("im-2", (1,), 4)])
def test_module_agrees_with_half_algebra(name, lam, depth):
    M = HWModule(named(name), lam, depth)
    U = HalfAlgebra(named(name), depth)
    assert compare_with_halfalgebra(M, U)["ok"]


def test_quantum_number_in_sl2_module():
    M = rep("sl2", (2,), 4)
    # e f v = [2] v
    ef = linalg.matmul(M.raise_(0, (1,)), M.lower(0, (0,)), QQq)
    assert ef == [[Q + Q ** -1]]
