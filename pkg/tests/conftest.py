import numpy as np
import pytest
from hypothesis import settings, strategies as st

from overlap_workbench.corpus import enumerate_lattices
from overlap_workbench.lattice import bits, mask_of
from overlap_workbench.topology import CoverPresentation

settings.register_profile("workbench", max_examples=60, deadline=None)
settings.load_profile("workbench")

SMALL_LATTICES = enumerate_lattices(6)


@st.composite
def lattices(draw, max_n=6):
    pool = [L for L in SMALL_LATTICES if L.n <= max_n]
    return draw(st.sampled_from(pool))


@st.composite
def relations(draw, max_size=3):
    from overlap_workbench.morphism import FiniteRelation

    x = draw(st.integers(0, max_size))
    y = draw(st.integers(0, max_size))
    code = draw(st.integers(0, (1 << (x * y)) - 1)) if x * y else 0
    return FiniteRelation.from_code(x, y, code)


@st.composite
def presentations(draw, max_base=5, max_axioms=3):
    """A corpus lattice read as a meet-semilattice base, with random axioms."""
    L = draw(lattices(max_n=max_base))
    k = L.n
    axioms = []
    for _ in range(draw(st.integers(0, max_axioms))):
        a = draw(st.integers(0, k - 1))
        U = draw(st.integers(0, (1 << k) - 1))
        axioms.append((a, U))
    return CoverPresentation(L.meet_table, L.top, tuple(axioms), L.names)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
