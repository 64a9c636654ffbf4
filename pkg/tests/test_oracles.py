import pytest

from dualperfect.cartan import named
from dualperfect.oracles import kostant_partition, positive_roots, sl2_chain, weyl_dimension


@pytest.mark.parametrize("name, count", [("sl2", 1), ("A2", 3), ("A1xA1", 2), ("B2", 4), ("G2", 6)])
def test_positive_root_counts(name, count):
    assert len(positive_roots(named(name))) == count


def test_roots_need_finite_type():
    with pytest.raises(ValueError):
        positive_roots(named("im0"))


def test_kostant_partition_A2():
    d = named("A2")
    assert kostant_partition(d, (1, 1)) == 2
    assert kostant_partition(d, (2, 2)) == 3
    assert kostant_partition(d, (2, 1)) == 2
    assert kostant_partition(d, (3, 0)) == 1


@pytest.mark.parametrize(
    "name, lam, dim",
    [("A2", (1, 0), 3), ("A2", (1, 1), 8), ("A2", (2, 0), 6), ("B2", (1, 0), 4), ("B2", (0, 1), 5), ("G2", (1, 0), 7), ("G2", (0, 1), 14)],
)
def test_weyl_dimension(name, lam, dim):
    assert weyl_dimension(named(name), lam) == dim


def test_sl2_chain():
    assert sl2_chain(2) == {0: {"eps": 0, "phi": 2}, 1: {"eps": 1, "phi": 1}, 2: {"eps": 2, "phi": 0}}
