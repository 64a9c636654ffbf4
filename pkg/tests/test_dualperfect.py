import json
from fractions import Fraction

import pytest

from dualperfect.cartan import named
from dualperfect.crystal import check_crystal_axioms, find_isomorphism, is_isomorphism
from dualperfect.dualperfect import (
    NotABasis,
    PreDualPerfectSpace,
    SpaceFormatError,
    ZeroVector,
    direct_sum,
    extract_graph,
    global_basis_space,
    filtration_suite,
    make_basis,
    recheck_refutation,
    rescale,
    verify_dual_perfect,
)
from dualperfect.globalbasis import global_basis
from dualperfect.module import HWModule
from dualperfect.scalars import Q

from conftest import EXAMPLES, example_id, gbasis, gspace

SL2 = {"A": [[2]], "s": [1]}


def space(weights, f, field="QQ", datum=SL2):
    data = {
        "datum": datum,
        "field": field,
        "weights": [{"mu": [m], "dim": d} for m, d in weights],
        "f": [{"i": 1, "mu": [m], "matrix": mat} for m, mat in f],
    }
    return PreDualPerfectSpace.from_json(data)[0]


def two_doublets():
    # V(1) + V(1) for sl2: f a = x, f a' = x'
    return space([(1, 2), (-1, 2)], [(1, [["1", "0"], ["0", "1"]])])


def defined(m):
    return {b: t for b, t in m.items() if t is not None}


def test_ell_values():
    V = two_doublets()
    one, zero = Fraction(1), Fraction(0)
    assert V.ell(0, (1,), [one, zero]) == 0
    assert V.ell(0, (-1,), [one, one]) == 1
    with pytest.raises(ZeroVector):
        V.ell(0, (1,), [zero, zero])


def test_standard_basis_accepted():
    V = two_doublets()
    res = verify_dual_perfect(V)
    assert res.ok
    cert = res.certificate
    assert defined(cert.fmap[0]) == {0: 2, 1: 3}


def test_mixed_basis_refuted():
    V = two_doublets()
    one, zero = "1", "0"
    basis = {(1,): [[one, zero], [zero, one]], (-1,): [[one, zero], [one, one]]}
    res = verify_dual_perfect(V, basis)
    assert not res.ok
    ref = res.refutation
    assert ref.i == 0
    assert recheck_refutation(V, make_basis(V, basis), ref)
    # the reverse mixing on the top weight is refuted too
    basis = {(1,): [[one, one], [zero, one]], (-1,): [[one, zero], [zero, one]]}
    assert not verify_dual_perfect(V, basis).ok


def test_injectivity_failure():
    V = space([(1, 2), (-1, 1)], [(1, [["1", "1"]])])
    res = verify_dual_perfect(V)
    assert not res.ok
    assert "injective" in res.refutation.reason
    # the kernel vector a' - a fixes it
    ok = verify_dual_perfect(V, {(1,): [["1", "-1"], ["0", "1"]], (-1,): [["1"]]})
    assert ok.ok


def test_zero_operators():
    V = space([(1, 2), (-1, 1)], [])
    res = verify_dual_perfect(V, {(1,): [["1", "1"], ["2", "3"]], (-1,): [["5"]]})
    assert res.ok
    assert all(not defined(m) for m in res.certificate.fmap.values())
    assert all(v == 0 for v in res.certificate.ell.values())


def test_not_a_basis():
    V = two_doublets()
    with pytest.raises(NotABasis):
        make_basis(V, {(1,): [["1", "1"], ["1", "1"]], (-1,): [["1", "0"], ["0", "1"]]})
    with pytest.raises(NotABasis):
        make_basis(V, {(1,): [["1", "0"], ["0", "1"]]})


def test_space_format_errors():
    with pytest.raises(SpaceFormatError):
        space([(1, 2), (-1, 2)], [(1, [["1", "0"]])])
    with pytest.raises(SpaceFormatError):
        PreDualPerfectSpace.from_json({"weights": []})
    with pytest.raises(SpaceFormatError):
        space([(1, 1)], [(3, [["1"]])])


def test_sl2_global_basis_certificate():
    V, mats, _ = gspace("sl2", (2,), 4)
    res = verify_dual_perfect(V, mats)
    assert res.ok
    cert = res.certificate
    assert defined(cert.fmap[0]) == {0: 1, 1: 2}
    assert [cert.ell[0, b] for b in range(3)] == [0, 1, 2]
    assert cert.coeff[0, 1] == Q + Q ** -1
    C = extract_graph(cert)
    assert [C.eps[b] for b in C.nodes] == [(0,), (1,), (2,)]


def test_imaginary_graph():
    V, mats, _ = gspace("im0", (1,), 5)
    C = extract_graph(verify_dual_perfect(V, mats).certificate)
    assert all(C.eps[b] == (0,) for b in C.nodes)
    assert all(C.phi[b] == (V.datum.pair(0, C.wt[b]),) for b in C.nodes)


@pytest.mark.parametrize("ex", EXAMPLES, ids=example_id)
def test_global_bases_are_dual_perfect(ex):
    gb = gbasis(*ex)
    V, mats, _ = gspace(*ex)
    res = verify_dual_perfect(V, mats)
    assert res.ok
    C = extract_graph(res.certificate)
    assert check_crystal_axioms(C)["ok"]
    psi = find_isomorphism(C, gb.crystal)
    assert psi is not None and is_isomorphism(psi, C, gb.crystal)["ok"]
    assert filtration_suite(res.certificate)["ok"]


def test_filtration_suite_on_adjoint():
    V, mats, _ = gspace("A2", (1, 1), 6)
    r = filtration_suite(verify_dual_perfect(V, mats).certificate)
    assert r["ok"]
    assert set(r["clauses"]) == {"power_congruence", "filtration_span", "up_length", "level_step", "quotient_basis"}


def test_monomial_basis_refuted_for_B2():
    M = HWModule(named("B2"), (1, 1), 8)
    V = PreDualPerfectSpace.from_rep(M)
    assert not verify_dual_perfect(V).ok
    V2, mats, _ = global_basis_space(global_basis(M))
    assert verify_dual_perfect(V2, mats).ok


def test_rescaled_basis_stays_dual_perfect():
    V, mats, _ = gspace("A2", (1, 1), 6)
    scalars = [Q ** k + 1 for k in range(V.total_dim())]
    assert verify_dual_perfect(V, rescale(V, mats, scalars)).ok


def test_json_roundtrip():
    V, mats, _ = gspace("A2", (1, 1), 6)
    text = json.dumps(V.to_json(mats), sort_keys=True)
    W, basis = PreDualPerfectSpace.from_json(json.loads(text))
    assert W.weights == V.weights and W.dims == V.dims
    assert verify_dual_perfect(W, basis).certificate.to_json() == verify_dual_perfect(V, mats).certificate.to_json()


def test_direct_sum():
    V = space([(1, 1), (-1, 1)], [(1, [["1"]])])
    S = direct_sum(V, V)
    assert S.dims[(1,)] == 2
    res = verify_dual_perfect(S)
    assert res.ok
    assert len(extract_graph(res.certificate)) == 4


def test_frontier_images_are_open():
    V, mats, _ = gspace("sl2", None, 6)
    cert = verify_dual_perfect(V, mats).certificate
    assert cert.open
    bottom = cert.basis.at[V.weights[-1]][0]
    assert (0, bottom) in cert.open
