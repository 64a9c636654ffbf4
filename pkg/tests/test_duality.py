from fractions import Fraction

import pytest

from dualperfect.cartan import named
from dualperfect.dualperfect import make_basis, verify_dual_perfect
from dualperfect.duality import (
    DualSpace,
    check_duality_roundtrip,
    dual_basis,
    kernel_filtration_suite,
    module_raise_comparison,
    pairing_report,
    transpose_back,
    transpose_space,
    verify_perfect,
)
from dualperfect.linalg import QQ

from conftest import EXAMPLES, example_id, gspace, rep
from test_dualperfect import space, two_doublets

ONE, ZERO = Fraction(1), Fraction(0)


def test_transpose_of_chain():
    V = space([(1, 1), (-1, 1)], [(1, [["1"]])])
    D = transpose_space(V)
    assert D.e_matrix(0, (-1,)) == [[ONE]]
    assert D.e_matrix(0, (1,)) == []
    W = transpose_back(D)
    assert W.f == V.f


def test_zero_operators_transpose_to_zero():
    V = space([(1, 2), (-1, 1)], [])
    D = transpose_space(V)
    assert D.e_matrix(0, (-1,)) == [[ZERO], [ZERO]]
    res = verify_perfect(D)
    assert res.ok
    assert all(t is None for t in res.certificate.Emap[0].values())


def test_perfect_injectivity_failure():
    d = named("sl2")
    D = DualSpace(d, [(1,), (-1,)], {(1,): 1, (-1,): 2}, {(0, (-1,)): [[ONE, ONE]]}, QQ)
    res = verify_perfect(D)
    assert not res.ok
    fixed = verify_perfect(D, {(1,): [[ONE]], (-1,): [[ONE, -ONE], [ZERO, ONE]]})
    assert fixed.ok


def test_sl2_dual_global_basis():
    V, mats, _ = gspace("sl2", (2,), 4)
    B = make_basis(V, mats)
    res = verify_perfect(transpose_space(V), dual_basis(B))
    assert res.ok
    cert = res.certificate
    # E is the chain shift upwards
    assert {b: t for b, t in cert.Emap[0].items() if t is not None} == {1: 0, 2: 1}
    assert [cert.delta[0, b] for b in range(3)] == [0, 1, 2]
    assert kernel_filtration_suite(cert)["ok"]


@pytest.mark.parametrize("ex", EXAMPLES, ids=example_id)
def test_roundtrip_on_global_bases(ex):
    V, mats, _ = gspace(*ex)
    r = check_duality_roundtrip(V, mats)
    assert r["ok"] and r["dual_perfect"] and r["perfect"]
    assert r["ell_equals_delta"] and r["graph_correspondence"]


@pytest.mark.parametrize("ex", EXAMPLES, ids=example_id)
def test_roundtrip_on_monomial_bases(ex):
    V, _, _ = gspace(*ex)
    r = check_duality_roundtrip(V)
    assert r["agree"] and r["ok"]


def test_roundtrip_on_refuted_basis():
    V = two_doublets()
    bad = {(1,): [["1", "0"], ["0", "1"]], (-1,): [["1", "0"], ["1", "1"]]}
    r = check_duality_roundtrip(V, bad)
    assert r["agree"] and not r["dual_perfect"] and not r["perfect"]


def test_pairing():
    V, _, _ = gspace("A2", (1, 1), 6)
    assert pairing_report(V, transpose_space(V))["ok"]


@pytest.mark.parametrize("name, lam, depth", [("A2", (1, 0), 4), ("A2", (1, 1), 6), ("im0", (1,), 5)])
def test_module_raising_is_adjoint(name, lam, depth):
    assert module_raise_comparison(rep(name, lam, depth))["ok"]


def test_dual_basis_pairs_to_identity():
    V, mats, _ = gspace("A2", (1, 1), 6)
    B = make_basis(V, mats)
    dual = dual_basis(B)
    for mu in V.weights:
        d = V.dim(mu)
        P, Q = B.matrices[mu], dual[mu]
        for a in range(d):
            for c in range(d):
                s = sum((P[r][a] * Q[r][c] for r in range(d)), V.field.zero)
                assert s == (V.field.one if a == c else V.field.zero)


def test_verify_dual_perfect_matches_on_transposed_back():
    V, mats, _ = gspace("A2", (1, 1), 6)
    W = transpose_back(transpose_space(V), V.frontier)
    assert verify_dual_perfect(W, mats).certificate.to_json() == verify_dual_perfect(V, mats).certificate.to_json()
