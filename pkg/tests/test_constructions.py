import numpy as np
import pytest
from hypothesis import given, strategies as st

from overlap_workbench.constructions import (
    dm_completion,
    dm_extend,
    dm_is_iso,
    finite_cofinite,
    free_oalgebra,
    generated_oo_sublattice,
)
from overlap_workbench.corpus import named_lattices
from overlap_workbench.errors import NotJoinPreserving, NotPoset, SearchBudgetExceeded, ValidationError
from overlap_workbench.lattice import bits, chain_lattice, is_boolean, powerset_lattice
from overlap_workbench.morphism import LatticeMap, all_maps, constant_map, identity_map, preserves_joins
from overlap_workbench.overlap import powerset_oalgebra

from conftest import lattices

ANTICHAIN2 = np.eye(2, dtype=bool)


def test_free_on_empty_set():
    for k in range(3):
        r = free_oalgebra(0, powerset_oalgebra(k), ())
        assert r.mediating.table == (0,)
        assert r.unique and r.commutes


def test_free_single_point_into_p2():
    r = free_oalgebra(1, powerset_oalgebra(2), (3,))
    assert r.mediating.table == (0, 3)
    assert r.unique and r.commutes and r.unit == (1,)


def test_free_constant_into_p1():
    r = free_oalgebra(2, powerset_oalgebra(1), (1, 1))
    assert r.mediating.table == (0, 1, 1, 1)
    assert r.unique and r.candidates_checked == 4


def test_free_validation_and_budget():
    with pytest.raises(ValidationError):
        free_oalgebra(1, powerset_oalgebra(1), (2,))
    with pytest.raises(SearchBudgetExceeded):
        free_oalgebra(3, powerset_oalgebra(2), (1, 2, 3), budget=100)


def test_dm_antichain():
    D = dm_completion(ANTICHAIN2)
    assert D.lattice.n == 4 and is_boolean(D.lattice)
    assert sorted(D.cuts) == [0, 1, 2, 3]
    assert not dm_is_iso(D)


def test_dm_single_point():
    D = dm_completion(np.ones((1, 1), dtype=bool))
    assert D.lattice.n == 1 and dm_is_iso(D)


def test_dm_fixes_named_lattices():
    for name, L in named_lattices().items():
        assert dm_is_iso(dm_completion(L.leq)), name


def test_dm_rejects_non_poset():
    with pytest.raises(NotPoset):
        dm_completion(np.array([[True, True], [True, True]]))


def _random_poset(draw_bits, n):
    leq = np.eye(n, dtype=bool)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            leq[i, j] = draw_bits >> k & 1
            k += 1
    for m in range(n):
        leq |= leq[:, m : m + 1] & leq[m : m + 1, :]
    return leq


@given(st.integers(1, 6), st.integers(0, 2**15 - 1))
def test_dm_density_and_embedding(n, code):
    leq = _random_poset(code, n)
    D = dm_completion(leq)  # embedding, density and preservation are checked inside
    L = D.lattice
    emb = D.embedding
    for x in range(n):
        for y in range(n):
            assert bool(L.leq[emb[x], emb[y]]) == bool(leq[x, y])
    for c in L.elements:
        below = [emb[x] for x in range(n) if L.leq[emb[x], c]]
        above = [emb[x] for x in range(n) if L.leq[c, emb[x]]]
        assert L.join_of(below) == c
        assert L.meet_of(above) == c
    # cuts are closed under intersection
    cuts = set(D.cuts)
    assert all(a & b in cuts for a in cuts for b in cuts)


def test_dm_extend_examples():
    P2 = powerset_lattice(2)[0]
    ext = dm_extend(identity_map(P2))
    assert ext.extension.table == tuple(range(4))
    swap = dm_extend([1, 0], ANTICHAIN2, ANTICHAIN2)
    assert swap.extension.table == (0, 2, 1, 3)
    zero = dm_extend(constant_map(P2, P2, 0))
    assert set(zero.extension.table) == {zero.target.lattice.bottom}


def test_dm_extend_rejects_non_join_preserving():
    P2 = powerset_lattice(2)[0]
    with pytest.raises(NotJoinPreserving):
        dm_extend(LatticeMap(P2, P2, [0, 1, 2, 1]))


def test_dm_extend_restricts_on_lattices():
    for L in (chain_lattice(3), named_lattices()["M3"], named_lattices()["N5"]):
        for f in all_maps(L, L):
            if preserves_joins(f):
                ext = dm_extend(f)
                D, E = ext.source, ext.target
                assert all(ext.extension(D.embedding[x]) == E.embedding[f(x)] for x in L.elements)


def test_red_bridge_on_p2():
    P2 = powerset_lattice(2)[0]
    bridges = [dm_extend(f).red_bridge for f in all_maps(P2, P2) if preserves_joins(f)]
    assert len(bridges) == 16 and all(b is True for b in bridges)


@pytest.mark.parametrize("k", range(4))
def test_finite_cofinite(k):
    r = finite_cofinite(k)
    assert r.ok and r.classical_collapse
    assert sorted(r.members) == list(range(1 << k))
    assert 0 in r.members and (1 << k) - 1 in r.members
    assert r.structure.is_o_ha
    assert "classical collapse" in r.describe()


def test_generated_examples():
    r = generated_oo_sublattice(2)
    assert sorted(r.members) == [0, 1, 2, 3]
    assert sorted(generated_oo_sublattice(1).members) == [0, 1]
    again = generated_oo_sublattice(3, seeds=r.members)
    assert len(again.members) == 8 and again.structure.is_oo_lattice
    with pytest.raises(ValidationError):
        generated_oo_sublattice(1, seeds=[0b10])


@given(st.integers(0, 4), st.lists(st.integers(0, 15), max_size=3))
def test_generated_is_fixpoint(k, seeds):
    seeds = [s & ((1 << k) - 1) for s in seeds]
    r = generated_oo_sublattice(k, seeds)
    assert sorted(generated_oo_sublattice(k, r.members).members) == sorted(r.members)
    assert r.closure.ok
