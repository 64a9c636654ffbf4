from functools import lru_cache

import pytest

from dualperfect.cartan import named
from dualperfect.dualperfect import global_basis_space
from dualperfect.globalbasis import global_basis
from dualperfect.halfalg import HalfAlgebra
from dualperfect.module import HWModule

# (datum, lambda, depth); lambda None means U^-
EXAMPLES = [
    ("sl2", (2,), 4),
    ("A2", (1, 0), 4),
    ("A2", (1, 1), 6),
    ("im0", (1,), 5),
    ("sl2", None, 6),
    ("A2", None, 4),
]


def example_id(ex):
    name, lam, depth = ex
    return f"{name}-{'binf' if lam is None else '-'.join(map(str, lam))}-d{depth}"


@lru_cache(maxsize=None)
def rep(name, lam, depth):
    if lam is None:
        return HalfAlgebra(named(name), depth)
    return HWModule(named(name), lam, depth)


@lru_cache(maxsize=None)
def gbasis(name, lam, depth):
    return global_basis(rep(name, lam, depth))


@lru_cache(maxsize=None)
def gspace(name, lam, depth):
    return global_basis_space(gbasis(name, lam, depth))


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # keep the call-phase report on the item so fixtures can see the outcome
    outcome = yield
    report = outcome.get_result()
    setattr(item, "rep_" + report.when, report)
