from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fibersum import catalog
from fibersum.lattice import IntersectionLattice, LatticeClass

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4)
small_ints = st.integers(min_value=-3, max_value=3)


def classes(lattice: IntersectionLattice, elements=small_rationals):
    return st.lists(elements, min_size=lattice.rank, max_size=lattice.rank).map(
        lambda cs: LatticeClass(lattice, tuple(Fraction(c) for c in cs)))


@pytest.fixture(scope="session")
def B():
    return catalog.get("B")


@pytest.fixture(scope="session")
def K3():
    return catalog.get("K3")


@pytest.fixture(scope="session")
def C():
    return catalog.get("C")
