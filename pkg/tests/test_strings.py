import pytest

from dualperfect.dualperfect import rescale, verify_dual_perfect
from dualperfect import linalg
from dualperfect.scalars import ONE, Q, Scalar
from dualperfect.strings import (
    GoodSequence,
    HypothesisFailed,
    NonTermination,
    NotDualPerfect,
    all_string_data,
    check_string_subspaces,
    e_top,
    in_BH,
    lex_le,
    lex_lt,
    match_bases,
    string_datum,
    subspace_geq,
    subspace_gt,
    v_h_projection,
)

from conftest import EXAMPLES, example_id, gspace
from test_dualperfect import two_doublets


def cert_of(ex):
    V, mats, _ = gspace(*ex)
    return V, mats, verify_dual_perfect(V, mats).certificate


def test_good_sequence():
    s = GoodSequence.parse("1,2", 2, prefix="2")
    assert [s[k] for k in range(5)] == [1, 0, 1, 0, 1]
    assert s.to_json() == {"prefix": [2], "block": [1, 2]}
    with pytest.raises(ValueError):
        GoodSequence.parse("1", 2)
    with pytest.raises(ValueError):
        GoodSequence.parse("1,3", 2)


def test_lex_order_pads_with_zeros():
    assert lex_le((1,), (1, 0, 0))
    assert lex_lt((0, 1), (1,))
    assert not lex_lt((1, 0), (1,))


def test_A2_fundamental_string_data():
    V, mats, cert = cert_of(("A2", (1, 0), 4))
    seq = GoodSequence.cyclic(2)
    data = all_string_data(seq, cert)
    # f_2 f_1 v has l_1 = 0, so its datum along 1,2,1,... starts with a zero
    assert sorted(L for L, _ in data.values()) == [(), (0, 1, 1), (1,)]
    rev = GoodSequence.parse("2,1", 2)
    assert sorted(string_datum(rev, b, cert)[0] for b in range(3)) == [(), (0, 1), (1, 1)]


def test_e_top_and_BH():
    V, mats, cert = cert_of(("sl2", (2,), 4))
    assert e_top(0, 2, cert) == 0
    assert e_top(0, 0, cert) == 0
    assert in_BH(cert, 0) and not in_BH(cert, 1)
    assert string_datum(GoodSequence.cyclic(1), 0, cert) == ((), 0)


def test_string_datum_bound():
    V, mats, cert = cert_of(("sl2", (2,), 4))
    with pytest.raises(NonTermination):
        string_datum(GoodSequence.cyclic(1), 2, cert, bound=0)


def test_subspaces_for_zero_datum():
    V, mats, cert = cert_of(("A2", (1, 1), 6))
    seq = GoodSequence.cyclic(2)
    geq = subspace_geq(seq, (), V)
    gt = subspace_gt(seq, (), V)
    for mu in V.weights:
        assert len(geq[mu]) == V.dim(mu)
    top = V.weights[0]
    assert len(gt[top]) == 0
    assert all(len(gt[mu]) == V.dim(mu) for mu in V.weights[1:])
    # a datum beyond everything present gives the zero space
    big = subspace_geq(seq, (9, 9), V)
    assert all(len(e) == 0 for e in big.values())


def test_geq_is_monotone():
    V, mats, cert = cert_of(("A2", (1, 1), 6))
    seq = GoodSequence.cyclic(2)
    data = sorted({L for L, _ in all_string_data(seq, cert).values()}, key=lambda L: L + (0,) * 4)
    for L, M in zip(data, data[1:]):
        a, b = subspace_geq(seq, M, V), subspace_geq(seq, L, V)
        for mu in V.weights:
            assert all(b[mu].contains(v) for v in a[mu].rows)


@pytest.mark.parametrize("ex", EXAMPLES, ids=example_id)
def test_structure_suites(ex):
    V, mats, cert = cert_of(ex)
    for seq in (GoodSequence.cyclic(V.datum.n), GoodSequence(tuple(reversed(range(V.datum.n))), tuple(range(V.datum.n)))):
        r = check_string_subspaces(V, cert, seq)
        assert r["ok"], {k: v["failures"][:2] for k, v in r["clauses"].items() if not v["ok"]}
    assert v_h_projection(V, cert)["ok"]


def test_match_identity():
    V, mats, cert = cert_of(("A2", (1, 1), 6))
    m = match_bases(V, mats, mats)
    assert m["ok"]
    assert m["psi"] == {b: b for b in range(V.total_dim())}
    assert all(c == ONE for c in m["scalars"].values())


def test_match_rescaled():
    V, mats, cert = cert_of(("A2", (1, 1), 6))
    units = [ONE if in_BH(cert, b) else Q ** (b % 3) * (b + 1) for b in range(V.total_dim())]
    m = match_bases(V, mats, rescale(V, mats, units))
    assert m["ok"]
    assert m["psi"] == {b: b for b in range(V.total_dim())}
    assert all(m["scalars"][b] * units[b] == ONE for b in m["psi"])


def test_match_monomial_basis():
    V, mats, _ = cert_of(("A2", (1, 0), 4))
    std = {mu: linalg.identity(V.dim(mu), V.field) for mu in V.weights}
    m = match_bases(V, mats, rescale(V, std, [ONE, Scalar(5), -Q]))
    assert m["ok"] and m["string_data_preserved"] and m["top_projection_preserved"]


def test_match_negative_controls():
    V, mats, _ = cert_of(("sl2", (2,), 4))
    with pytest.raises(HypothesisFailed):
        match_bases(V, mats, rescale(V, mats, [Scalar(2)] * 3))
    W = two_doublets()
    one, zero = "1", "0"
    bad = {(1,): [[one, zero], [zero, one]], (-1,): [[one, zero], [one, one]]}
    with pytest.raises(NotDualPerfect):
        match_bases(W, None, bad)
    mixed = {(1,): [[one, one], [zero, one]], (-1,): [[one, one], [zero, one]]}
    with pytest.raises(HypothesisFailed):
        match_bases(W, None, mixed)
