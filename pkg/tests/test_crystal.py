import copy
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualperfect.cartan import named
from dualperfect.crystal import (
    AbstractCrystal,
    check_crystal_axioms,
    check_morphism,
    find_isomorphism,
    from_json,
    is_isomorphism,
)
from dualperfect.kashiwara import (
    KashiwaraOps,
    LatticeViolation,
    generate_crystal,
    lattice_basis,
    residue,
)
from dualperfect.module import HWModule
from dualperfect.oracles import sl2_chain, weyl_dimension
from dualperfect.scalars import ONE, Q, Scalar

from conftest import EXAMPLES, example_id, gbasis, rep


def sl2_crystal(m):
    d = named("sl2")
    nodes = list(range(m + 1))
    wt = {k: d.weight([m - 2 * k]) for k in nodes}
    eps = {k: (k,) for k in nodes}
    f = {0: {k: k + 1 for k in range(m)}}
    e = {0: {k + 1: k for k in range(m)}}
    return AbstractCrystal(d, nodes, wt, eps, None, f, e)


def test_hand_built_chain_is_a_crystal():
    C = sl2_crystal(3)
    assert check_crystal_axioms(C)["ok"]
    assert C.phi[0] == (3,)


def test_axiom_checker_catches_each_clause():
    C = sl2_crystal(2)
    bad = copy.deepcopy(C)
    bad.phi[1] = (5,)
    assert not check_crystal_axioms(bad)["clauses"]["1"]["ok"]
    bad = copy.deepcopy(C)
    bad.f[0][0] = 2
    bad.e[0][2] = 0
    r = check_crystal_axioms(bad)
    assert not r["clauses"]["2"]["ok"]
    bad = copy.deepcopy(C)
    del bad.e[0][1]
    assert not check_crystal_axioms(bad)["clauses"]["3"]["ok"]
    bad = copy.deepcopy(C)
    bad.eps[2] = (1,)
    bad.phi[2] = (-1,)
    assert not check_crystal_axioms(bad)["clauses"]["6"]["ok"]


@pytest.mark.parametrize("ex", EXAMPLES, ids=example_id)
def test_generated_crystals(ex):
    R = rep(*ex)
    C, lat = generate_crystal(R)
    assert check_crystal_axioms(C)["ok"]
    assert len(C) == R.total_dim()
    # every node representative is a lattice vector with the node as residue
    for b in C.nodes:
        beta = lat.node_beta[b]
        assert lat.node_of(beta, lat.node_vec[b]) == b


def test_sl2_module_crystal_matches_chain():
    C, _ = generate_crystal(HWModule(named("sl2"), (4,), 6))
    chain = sl2_chain(4)
    top = C.highest_weight_nodes()
    assert len(top) == 1
    b, k = top[0], 0
    while b is not None:
        assert C.eps[b] == (chain[k]["eps"],) and C.phi[b] == (chain[k]["phi"],)
        b, k = C.f_tilde(0, b), k + 1
    assert k == 5


def test_binf_sl2_is_chain():
    C, _ = generate_crystal(rep("sl2", None, 6))
    assert len(C) == 7
    assert [C.f_tilde(0, k) for k in range(6)] == list(range(1, 7))
    assert (0, 6) in C.open_f


def test_imaginary_crystal_rules():
    C, _ = generate_crystal(rep("im0", (1,), 5))
    # eps vanishes on an imaginary index; phi = <h, wt> is constant for a_ii = 0
    assert all(C.eps[b] == (0,) for b in C.nodes)
    assert all(C.phi[b] == (1,) for b in C.nodes)
    assert [C.string_length_up(0, b) for b in C.nodes] == list(range(6))


@settings(max_examples=12, deadline=None)
@given(
    st.sampled_from(["sl2", "A2", "B2", "A1xA1", "im0", "im-2"]),
    st.lists(st.integers(0, 2), min_size=2, max_size=2),
)
def test_random_module_crystals(name, lam):
    d = named(name)
    lam = lam[: d.n]
    depth = 4
    C, _ = generate_crystal(HWModule(d, lam, depth))
    assert check_crystal_axioms(C)["ok"]
    # crystal of a module: a unique highest weight node
    assert C.highest_weight_nodes() == [C.nodes[0]]
    if all(d.is_real(i) for i in d.indices) and sum(lam) <= 1:
        M = HWModule(d, lam, 12)
        assert M.total_dim() == weyl_dimension(d, lam)


def test_json_roundtrip_and_isomorphism():
    C, _ = generate_crystal(rep("A2", (1, 1), 6))
    data = json.loads(json.dumps(C.to_json()))
    D = from_json(C.datum, data)
    assert check_crystal_axioms(D)["ok"]
    psi = find_isomorphism(D, C)
    assert psi is not None
    assert is_isomorphism(psi, D, C)["ok"]
    assert check_morphism(psi, D, C)["ok"]


def test_morphism_checker_rejects_bad_maps():
    C, _ = generate_crystal(rep("A2", (1, 1), 6))
    ident = {b: b for b in C.nodes}
    assert is_isomorphism(ident, C, C)["ok"]
    swapped = dict(ident)
    swapped[1], swapped[2] = swapped[2], swapped[1]
    assert not check_morphism(swapped, C, C)["ok"]
    assert not is_isomorphism({b: 0 for b in C.nodes}, C, C)["ok"]
    # the zero map is a morphism
    assert check_morphism({}, C, C)["ok"]


def test_non_isomorphic_crystals():
    C1, _ = generate_crystal(rep("A2", (1, 0), 4))
    C2, _ = generate_crystal(HWModule(named("A2"), (0, 1), 4))
    assert len(C1) == len(C2)
    assert find_isomorphism(C1, C2) is None


def test_dot_export():
    C, _ = generate_crystal(rep("sl2", (2,), 4))
    dot = C.to_dot()
    assert dot.count("->") == 2
    assert 'label="1"' in dot


def test_string_decomposition_sl2():
    M = rep("sl2", (2,), 4)
    ops = KashiwaraOps(M)
    # f v_lambda = f^(1) v_lambda: one term, k = 1
    v = M.apply_lower(0, (0,), [ONE])
    terms = ops.string_decompose(0, (1,), v)
    assert len(terms) == 1 and terms[0][0] == 1
    # f~ on f v gives f^(2) v = f f v / [2]
    ff = M.apply_lower(0, (1,), v)
    assert ops.f_tilde(0, (1,), v) == [x / (Q + Q ** -1) for x in ff]
    assert ops.e_tilde(0, (1,), v) == [ONE]


def test_lattice_basis_and_residue():
    gens = [[Q, Scalar(1)], [Scalar(1), Scalar(0)], [Q ** 2, Q]]
    basis = lattice_basis(gens)
    assert len(basis) == 2
    assert residue([Scalar(1) + Q, Q]) == (1, 0)
    with pytest.raises(LatticeViolation):
        residue([Q ** -1])


def test_crystal_matches_global_basis_nodes():
    gb = gbasis("A2", (1, 1), 6)
    zero = [b for b in gb.crystal.nodes if gb.beta_of(b) == (1, 1)]
    assert len(zero) == 2
