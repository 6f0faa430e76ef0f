import numpy as np
import pytest
from hypothesis import given, strategies as st

from overlap_workbench.errors import NoBounds, NoPseudocomplement, NotABase, NotLattice, NotPoset, SizeLimit
from overlap_workbench.lattice import (
    BaseFamily,
    build_lattice,
    chain_lattice,
    diamond_lattice,
    heyting_implication,
    is_boolean,
    is_distributive,
    join_of,
    lattice_laws,
    minimal_base,
    pentagon_lattice,
    powerset_lattice,
    pseudocomplement,
    pseudocomplement_table,
    full_base,
)

from conftest import lattices


def test_trivial_lattice():
    L = build_lattice([[True]])
    assert L.n == 1 and L.bottom == L.top == 0
    assert L.is_trivial


def test_three_chain():
    L = chain_lattice(3)
    assert (L.bottom, L.top) == (0, 2)
    assert L.meet(1, 2) == 1 and L.join(0, 1) == 1


def test_two_atoms_without_top_is_not_a_lattice():
    # bottom below two incomparable atoms, plus a fourth element above only one atom
    leq = np.eye(4, dtype=bool)
    leq[0, :] = True
    leq[1, 3] = True
    with pytest.raises(NotLattice) as exc:
        build_lattice(leq)
    assert exc.value.witness


def test_not_a_poset_is_rejected_with_witness():
    leq = np.array([[True, True], [True, True]])
    with pytest.raises(NotPoset) as exc:
        build_lattice(leq)
    assert exc.value.witness
    with pytest.raises(NotPoset):
        build_lattice([[False]])


def test_empty_matrix_has_no_bounds():
    with pytest.raises(NoBounds):
        build_lattice(np.zeros((0, 0), dtype=bool))


@pytest.mark.parametrize("k,size", [(0, 1), (2, 4), (3, 8)])
def test_powerset_sizes(k, size):
    L, base = powerset_lattice(k)
    assert L.n == size
    assert base.members == tuple(1 << i for i in range(k))


def test_powerset_atoms_are_singletons():
    L, _ = powerset_lattice(3)
    atoms = [p for p in L.elements if p != L.bottom and L.down_mask(p) == (1 << p | 1 << L.bottom)]
    assert atoms == [1, 2, 4]


def test_powerset_size_limit():
    with pytest.raises(SizeLimit):
        powerset_lattice(5, max_elements=16)


def test_join_of_examples():
    L, _ = powerset_lattice(2)
    assert join_of(L, []) == L.bottom
    assert join_of(L, [0b01, 0b10]) == 0b11
    C = chain_lattice(3)
    assert join_of(C, [1, 2]) == 2


def test_pseudocomplement_examples():
    L, _ = powerset_lattice(2)
    assert pseudocomplement(L, 0b01) == 0b10
    C = chain_lattice(3)
    assert pseudocomplement(C, 1) == 0
    assert pseudocomplement(C, C.bottom) == C.top


def test_pseudocomplement_missing_in_m3():
    M3 = diamond_lattice()
    assert pseudocomplement_table(M3) is None
    atom = next(p for p in M3.elements if p not in (M3.bottom, M3.top))
    with pytest.raises(NoPseudocomplement):
        pseudocomplement(M3, atom)


def test_heyting_examples():
    L, base = powerset_lattice(2)
    assert heyting_implication(L, base, 0b01, 0b01) == L.top
    assert heyting_implication(L, base, 0b01, 0b10) == 0b10
    C = chain_lattice(3)
    assert heyting_implication(C, full_base(C), 1, 0) == 0


def test_distributive_and_boolean():
    assert is_distributive(powerset_lattice(3)[0])
    assert not is_distributive(diamond_lattice())
    assert not is_distributive(pentagon_lattice())
    assert is_distributive(chain_lattice(3))
    assert is_boolean(powerset_lattice(3)[0])
    assert not is_boolean(chain_lattice(3))
    assert not is_boolean(diamond_lattice())


def test_minimal_base_examples():
    assert minimal_base(powerset_lattice(2)[0]).members == (1, 2)
    assert minimal_base(chain_lattice(3)).members == (1, 2)
    assert minimal_base(build_lattice([[True]])).members == ()


def test_base_family_rejects_non_generating_set():
    with pytest.raises(NotABase):
        BaseFamily(powerset_lattice(2)[0], [1])


@given(lattices())
def test_lattice_laws_hold_for_every_small_lattice(L):
    rep = lattice_laws(L)
    assert rep.ok, rep.describe()


@given(lattices())
def test_join_of_extremes(L):
    assert L.join_of(range(L.n)) == L.top
    assert L.join_of([]) == L.bottom


@given(lattices())
def test_double_pseudocomplement_is_inflationary(L):
    neg = pseudocomplement_table(L)
    if neg is None:
        return
    for p in L.elements:
        assert L.le(p, neg[neg[p]])


@given(lattices())
def test_boolean_implies_involutive_pseudocomplement(L):
    if not is_boolean(L):
        return
    neg = pseudocomplement_table(L)
    assert neg is not None
    assert all(neg[neg[p]] == p for p in L.elements)


@given(lattices())
def test_minimal_base_generates(L):
    base = minimal_base(L)
    for p in L.elements:
        assert L.join_of(base.below(p)) == p


@given(lattices(), st.data())
def test_heyting_residuation_on_distributive_lattices(L, data):
    if not is_distributive(L):
        return
    p = data.draw(st.integers(0, L.n - 1))
    q = data.draw(st.integers(0, L.n - 1))
    r = heyting_implication(L, full_base(L), p, q)
    for x in L.elements:
        assert L.le(x, r) == L.le(L.meet(x, p), q)
