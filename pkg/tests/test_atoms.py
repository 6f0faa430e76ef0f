import numpy as np
import pytest
from hypothesis import given

from overlap_workbench.atoms import (
    atom_char_equivalence,
    atom_conditions,
    atom_join_split_property,
    eqatom_equivalence,
    ft_atoms,
    is_atom_oalg,
    is_atomic,
    is_discrete,
    powerset_iso,
    atoms_of,
)
from overlap_workbench.corpus import named_lattices, oalgebra_corpus
from overlap_workbench.errors import NotAtomic
from overlap_workbench.lattice import build_lattice, minimal_base
from overlap_workbench.overlap import OAlgebra, canonical_overlap, powerset_oalgebra
from overlap_workbench.topology import (
    build_frame,
    discrete_presentation,
    empty_presentation,
    presentation,
    sierpinski_presentation,
    trivial_presentation,
)

from conftest import presentations

TRIVIAL = build_lattice([[True]])
TRIVIAL_A = OAlgebra(TRIVIAL, minimal_base(TRIVIAL), canonical_overlap(TRIVIAL))


def test_is_atom_examples():
    A = powerset_oalgebra(3)
    assert is_atom_oalg(A, 0b001)
    assert not is_atom_oalg(A, 0b011)
    assert not is_atom_oalg(A, 0)


def test_atom_characterizations():
    A = powerset_oalgebra(3)
    assert atom_char_equivalence(A)
    assert np.flatnonzero(atom_conditions(A)[0]).tolist() == [1, 2, 4]
    A1 = powerset_oalgebra(1)
    assert atom_char_equivalence(A1) and atoms_of(A1).members == (1,)
    assert atom_char_equivalence(TRIVIAL_A) and atoms_of(TRIVIAL_A).members == ()


def test_is_atomic_examples():
    ok, At = is_atomic(powerset_oalgebra(3))
    assert ok and At.members == (1, 2, 4)
    assert is_atomic(TRIVIAL_A) == (True, atoms_of(TRIVIAL_A))


def test_powerset_iso_examples():
    h, h_inv = powerset_iso(powerset_oalgebra(2))
    assert h.table == (0, 1, 2, 3) and h_inv.table == (0, 1, 2, 3)
    h, h_inv = powerset_iso(TRIVIAL_A)
    assert h.target.n == 1
    L = named_lattices()["P(3) shuffled"]
    A = OAlgebra(L, minimal_base(L), canonical_overlap(L))
    h, h_inv = powerset_iso(A)
    assert h.target.n == 8
    for p in L.elements:
        assert h_inv(h(p)) == p
    M = A.overlap.matrix
    t = h.array
    assert np.array_equal(M, (t[:, None] & t[None, :]) != 0)


def test_powerset_iso_needs_atomic(monkeypatch):
    import overlap_workbench.atoms as atoms

    monkeypatch.setattr(atoms, "is_atomic", lambda A: (False, atoms.AtomSet(A, ())))
    with pytest.raises(NotAtomic):
        atoms.powerset_iso(powerset_oalgebra(1))


@pytest.mark.parametrize("k", range(6))
def test_powerset_atoms_are_singletons(k):
    assert atoms_of(powerset_oalgebra(k)).members == tuple(1 << i for i in range(k))


def test_corpus_oalgebras():
    for name, A in oalgebra_corpus(6, 3):
        assert atom_char_equivalence(A), name
        h, h_inv = powerset_iso(A)
        assert [h_inv(h(p)) for p in A.lattice.elements] == list(A.lattice.elements)


def test_ft_atoms_examples():
    assert ft_atoms(build_frame(discrete_presentation(2))).members == (1, 2)
    assert ft_atoms(build_frame(sierpinski_presentation())).members == (0,)
    # base {s, ⊤} with s ◁ ∅: s is not positive, ⊤ becomes the only atom
    P = presentation([[0, 0], [0, 1]], 1, [(0, [])], ["s", "⊤"])
    F = build_frame(P)
    assert F.pos == (False, True)
    assert ft_atoms(F).members == (1,)


def test_is_discrete_examples():
    assert is_discrete(build_frame(discrete_presentation(2)))
    assert not is_discrete(build_frame(sierpinski_presentation()))
    assert is_discrete(build_frame(empty_presentation()))


def test_eqatom_examples():
    assert eqatom_equivalence(build_frame(discrete_presentation(3)))
    assert not eqatom_equivalence(build_frame(sierpinski_presentation()))
    assert eqatom_equivalence(build_frame(trivial_presentation()))


def test_atom_join_split_examples():
    for P in (discrete_presentation(2), sierpinski_presentation(), empty_presentation()):
        assert atom_join_split_property(build_frame(P))


@given(presentations(max_base=4))
def test_atom_split_and_eqatom_over_random_presentations(P):
    F = build_frame(P)
    assert atom_join_split_property(F)
    eqatom_equivalence(F)
