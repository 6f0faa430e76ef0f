import numpy as np
import pytest
from hypothesis import given

from overlap_workbench.errors import CarrierMismatch, NotOAlgebra, NotSymmetric, SearchBudgetExceeded
from overlap_workbench.lattice import (
    build_lattice,
    chain_lattice,
    diamond_lattice,
    is_boolean,
    is_distributive,
    minimal_base,
    powerset_lattice,
    pseudocomplement_table,
)
from overlap_workbench.overlap import (
    AXIOMS,
    DERIVED,
    OAlgebra,
    OverlapRelation,
    PositivityPredicate,
    canonical_overlap,
    check_overlap_axioms,
    check_positivity_laws,
    derived_properties_suite,
    find_all_overlaps,
    ft_overlap_criterion,
    ft_overlap_witness,
    negative_density_check,
    oo_structure_check,
    overlap_from_positivity,
    positivity_of,
    powerset_oalgebra,
)

from conftest import lattices

TRIVIAL = build_lattice([[True]])


def test_powerset_overlap_passes_all_axioms():
    L, base = powerset_lattice(2)
    rep = check_overlap_axioms(L, base, canonical_overlap(L))
    assert rep.ok
    assert [v.law for v in rep] == list(AXIOMS)


def test_empty_relation_fails_density_with_witness():
    L, base = powerset_lattice(2)
    rep = check_overlap_axioms(L, base, np.zeros((4, 4), dtype=bool))
    v = rep["density"]
    assert not v.passed
    assert v.witness == {"p": 0b01, "q": 0b00}
    assert rep["symmetry"].passed and rep["splitting"].passed


def test_relating_bottom_fails_splitting():
    L, base = powerset_lattice(2)
    M = canonical_overlap(L).matrix.copy()
    M[0, 3] = M[3, 0] = True
    rep = check_overlap_axioms(L, base, M)
    assert not rep["splitting"].passed
    assert rep["splitting"].witness


def test_verdict_witness_iff_failure():
    L, base = powerset_lattice(2)
    for M in (canonical_overlap(L).matrix, np.zeros((4, 4), dtype=bool), np.ones((4, 4), dtype=bool)):
        for v in check_overlap_axioms(L, base, M):
            assert (v.witness is None) == v.passed


def test_asymmetric_input_is_rejected():
    L, _ = powerset_lattice(1)
    with pytest.raises(NotSymmetric):
        OverlapRelation(L, np.array([[False, True], [False, True]]))


def test_carrier_mismatch():
    L, base = powerset_lattice(2)
    with pytest.raises(CarrierMismatch):
        check_overlap_axioms(L, base, np.zeros((3, 3), dtype=bool))


def test_canonical_overlap_examples():
    L, _ = powerset_lattice(2)
    r = canonical_overlap(L)
    assert r(0b01, 0b11) and not r(0b01, 0b10)
    assert not canonical_overlap(TRIVIAL).matrix.any()
    C = chain_lattice(3)
    rc = canonical_overlap(C)
    assert rc(1, 1) and rc(1, 2)
    assert not rc.matrix[0].any()


def test_chain_canonical_fails_density():
    C = chain_lattice(3)
    rep = check_overlap_axioms(C, minimal_base(C), canonical_overlap(C))
    assert rep["density"].witness == {"p": 2, "q": 1}


def test_find_all_overlaps_examples():
    L, base = powerset_lattice(2)
    found = find_all_overlaps(L, base)
    assert found == [canonical_overlap(L)]
    assert find_all_overlaps(chain_lattice(3)) == []
    triv = find_all_overlaps(TRIVIAL)
    assert len(triv) == 1 and not triv[0].matrix.any()
    assert find_all_overlaps(diamond_lattice()) == []
    P3, _ = powerset_lattice(3)
    assert find_all_overlaps(P3) == [canonical_overlap(P3)]


def test_search_budget():
    with pytest.raises(SearchBudgetExceeded):
        find_all_overlaps(chain_lattice(6), budget=10)


def test_trivial_oalgebra_is_degenerate():
    A = OAlgebra(TRIVIAL, minimal_base(TRIVIAL), canonical_overlap(TRIVIAL))
    assert A.degenerate
    assert not powerset_oalgebra(1).degenerate


def test_invalid_oalgebra_raises_with_report():
    C = chain_lattice(3)
    with pytest.raises(NotOAlgebra) as exc:
        OAlgebra(C, minimal_base(C), canonical_overlap(C))
    assert exc.value.report is not None


def test_derived_suite_on_p3():
    rep = derived_properties_suite(powerset_oalgebra(3))
    assert rep.ok
    assert [v.law for v in rep] == list(DERIVED)


def test_disjoint_singletons_do_not_overlap():
    A = powerset_oalgebra(2)
    assert not A.overlap(0b01, 0b10)
    assert A.lattice.meet(0b01, 0b10) == A.lattice.bottom


def test_negative_density_examples():
    assert negative_density_check(powerset_lattice(2)[0]) == (True, True, True)
    assert negative_density_check(chain_lattice(3)) == (False, False, True)
    assert negative_density_check(TRIVIAL) == (True, True, True)


def test_positivity_of_powerset():
    A = powerset_oalgebra(2)
    pos = positivity_of(A)
    assert not pos(0) and pos(0b01)
    A3 = powerset_oalgebra(3)
    assert check_positivity_laws(A3.lattice, A3.base, positivity_of(A3)).ok


def test_ft_overlap_criterion_examples():
    L, base = powerset_lattice(2)
    assert ft_overlap_criterion(L, base, lambda p: p != 0)
    assert overlap_from_positivity(L, lambda p: p != 0) == canonical_overlap(L)
    C = chain_lattice(3)
    nonzero = lambda p: p != C.bottom
    assert not ft_overlap_criterion(C, minimal_base(C), nonzero)
    assert ft_overlap_witness(C, minimal_base(C), nonzero) == (2, 1)
    assert ft_overlap_criterion(TRIVIAL, minimal_base(TRIVIAL), lambda p: False)


def test_oo_structure_examples():
    P3, base = powerset_lattice(3)
    assert oo_structure_check(P3, base, canonical_overlap(P3)).kind == "o-Ba"
    C = chain_lattice(3)
    assert oo_structure_check(C, minimal_base(C), canonical_overlap(C)).kind is None
    M3 = diamond_lattice()
    assert oo_structure_check(M3, minimal_base(M3), canonical_overlap(M3)).kind is None


@given(lattices())
def test_classical_collapse(L):
    found = find_all_overlaps(L)
    assert len(found) <= 1
    if is_boolean(L) or L.is_trivial:
        assert found == [canonical_overlap(L)]
    else:
        assert found == []


@given(lattices())
def test_valid_oalgebras_are_distributive_and_pass_derived_suite(L):
    base = minimal_base(L)
    for r in find_all_overlaps(L, base):
        assert is_distributive(L)
        assert derived_properties_suite(OAlgebra(L, base, r)).ok


@given(lattices())
def test_negative_density_biconditional(L):
    if pseudocomplement_table(L) is None:
        return
    nd, inv, stable = negative_density_check(L)
    assert nd == inv and stable


@given(lattices())
def test_canonical_overlap_on_boolean_lattices(L):
    if not is_boolean(L):
        return
    assert check_overlap_axioms(L, minimal_base(L), canonical_overlap(L)).ok


@given(lattices())
def test_base_density_agrees_with_carrier_density(L):
    # raises InternalInconsistency if the two density readings ever disagree
    from overlap_workbench.lattice import full_base

    r = canonical_overlap(L)
    a = check_overlap_axioms(L, minimal_base(L), r)
    b = check_overlap_axioms(L, full_base(L), r)
    if a["symmetry"] and a["splitting"]:
        assert a["density"].passed == b["density"].passed
