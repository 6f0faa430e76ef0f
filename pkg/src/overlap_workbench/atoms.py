"""Atoms of o-algebras and formal topologies, atomicity and discreteness."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAtomic, NotOAlgebra, SearchBudgetExceeded, TheoremViolation
from .lattice import bits, mask_of, minimal_base, powerset_lattice
from .morphism import LatticeMap, check_o_morphism, compose, identity_map, is_monotone
from .overlap import (
    DEFAULT_SEARCH_BUDGET,
    OAlgebra,
    find_all_overlaps,
    overlap_from_positivity,
    powerset_oalgebra,
)
from .topology import FTFrame


@dataclass(frozen=True)
class AtomSet:
    """Atoms of a structure. For an FTFrame the members are base indices."""

    carrier: object
    members: tuple[int, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, m):
        return m in self.members


def atom_conditions(A: OAlgebra) -> np.ndarray:
    """4 × n boolean array; row i holds characterization i+1 for every element."""
    L, M = A.lattice, A.overlap.matrix
    n = L.n
    diag = M.diagonal().copy()
    c1 = diag & (~M | L.leq).all(axis=1)
    positive_below = diag[None, :] & L.leq.T  # [m, p]: p ⊲ p and p ≤ m
    c2 = diag & (~positive_below | np.eye(n, dtype=bool)).all(axis=1)
    c3 = (M == L.leq).all(axis=1)
    # m ⊲ p and m ⊲ q imply m ⊲ p ∧ q
    conj = M[:, :, None] & M[:, None, :]
    closed = M[np.arange(n)[:, None, None], L.meet_table[None, :, :]]
    c4 = diag & (~conj | closed).all(axis=(1, 2))
    return np.vstack([c1, c2, c3, c4])


def is_atom_oalg(A: OAlgebra, m: int) -> bool:
    M, L = A.overlap.matrix, A.lattice
    return bool(M[m, m] and (~M[m] | L.leq[m]).all())


def atom_char_equivalence(A: OAlgebra) -> bool:
    C = atom_conditions(A)
    return bool((C == C[0]).all())


def atoms_of(A: OAlgebra) -> AtomSet:
    return AtomSet(A, tuple(m for m in A.lattice.elements if is_atom_oalg(A, m)))


def is_atomic(A: OAlgebra) -> tuple[bool, AtomSet]:
    """Atoms form a base: every element is the join of the atoms below it."""
    At = atoms_of(A)
    L = A.lattice
    ok = all(L.join_of(a for a in At.members if L.leq[a, p]) == p for p in L.elements)
    return ok, At


def powerset_iso(A: OAlgebra) -> tuple[LatticeMap, LatticeMap]:
    """h(p) = {atoms below p} onto P(At), with inverse U ↦ ⋁U; both are verified."""
    ok, At = is_atomic(A)
    if not ok:
        raise NotAtomic("atoms do not join-generate the algebra")
    L = A.lattice
    atoms = At.members
    k = len(atoms)
    B = powerset_oalgebra(k)
    h = LatticeMap(L, B.lattice, [mask_of(i for i, a in enumerate(atoms) if L.leq[a, p]) for p in L.elements])
    h_inv = LatticeMap(B.lattice, L, [L.join_of(atoms[i] for i in bits(U)) for U in B.lattice.elements])
    if compose(h_inv, h) != identity_map(L) or compose(h, h_inv) != identity_map(B.lattice):
        raise TheoremViolation("atom map and its inverse are not mutually inverse")
    if not (is_monotone(h) and is_monotone(h_inv)):
        raise TheoremViolation("atom isomorphism is not order-preserving")
    t = h.array
    if not np.array_equal(A.overlap.matrix, (t[:, None] & t[None, :]) != 0):
        raise TheoremViolation("atom map does not send overlap to inhabited intersection")
    check_o_morphism(h, A, B)
    check_o_morphism(h_inv, B, A)
    return h, h_inv


# -- formal topologies ------------------------------------------------------


def ft_atoms(F: FTFrame) -> AtomSet:
    """Positive base elements with no other positive base element strictly below.

    Equality is equality in the frame. Also checks that every frame element
    meeting both clauses is the saturation of a base atom, and that the
    minimality clause holds against arbitrary frame elements.
    """
    k = F.presentation.k
    pos = F.pos
    be = F.base_elements
    atoms = tuple(
        a
        for a in range(k)
        if pos[a] and all(be[b] == be[a] for b in range(k) if pos[b] and F.base_le(b, a))
    )
    L = F.lattice
    atom_elements = {be[a] for a in atoms}
    for p in L.elements:
        if not F.frame_pos(p):
            continue
        minimal = all(be[b] == p for b in range(k) if pos[b] and L.leq[be[b], p])
        if minimal and p not in atom_elements:
            raise TheoremViolation(f"frame element {L.label(p)} is minimal positive but not a base atom")
    for a in atoms:
        for q in L.elements:
            if F.frame_pos(q) and L.leq[q, be[a]] and q != be[a]:
                raise TheoremViolation(
                    f"positive {L.label(q)} lies strictly below atom {F.presentation.names[a]}"
                )
    return AtomSet(F, atoms)


def atom_elements(F: FTFrame) -> tuple[int, ...]:
    """Distinct frame elements that are saturations of atoms."""
    return tuple(sorted({F.base_elements[a] for a in ft_atoms(F).members}))


def is_discrete(F: FTFrame) -> bool:
    L = F.lattice
    ats = atom_elements(F)
    return all(L.join_of(a for a in ats if L.leq[a, p]) == p for p in L.elements)


def _frame_oalgebra(F: FTFrame) -> OAlgebra | None:
    r = overlap_from_positivity(F.lattice, F.frame_pos)
    try:
        return OAlgebra(F.lattice, F.base, r)
    except NotOAlgebra:
        return None


def eqatom_equivalence(F: FTFrame, budget: int = DEFAULT_SEARCH_BUDGET) -> bool:
    """Evaluate the three conditions separately and require them to agree.

    (1) some overlap turns the frame into an atomic o-algebra; the relation
        Pos(x ∧ y) is tried first, then an exhaustive search if needed;
    (2) the frame is order-isomorphic to a powerset: size 2^k with k
        order-theoretic atoms, and the canonical atom map is an isomorphism;
    (3) the frame is discrete.
    """
    L = F.lattice

    A = _frame_oalgebra(F)
    cond1 = A is not None and is_atomic(A)[0]
    if not cond1:
        found = find_all_overlaps(L, None, budget)
        base = minimal_base(L)
        cond1 = any(is_atomic(OAlgebra(L, base, r))[0] for r in found)

    cond2 = _powerset_order_iso(L)
    cond3 = is_discrete(F)
    if not cond1 == cond2 == cond3:
        raise TheoremViolation(f"atomic o-algebra={cond1}, powerset={cond2}, discrete={cond3}")
    return cond1


def _powerset_order_iso(L) -> bool:
    n = L.n
    k = n.bit_length() - 1
    if n != 1 << k:
        return False
    order_atoms = [p for p in L.elements if p != L.bottom and L.down_mask(p) == (1 << p | 1 << L.bottom)]
    if len(order_atoms) != k:
        return False
    P, _ = powerset_lattice(k)
    h = [mask_of(i for i, a in enumerate(order_atoms) if L.leq[a, p]) for p in L.elements]
    if len(set(h)) != n:
        return False
    t = np.asarray(h)
    return bool(np.array_equal(L.leq, P.leq[t[:, None], t[None, :]]))


def atom_join_split_property(F: FTFrame) -> bool:
    """An atom below ⋁U lies below some u ∈ U, for every U ⊆ base.

    U ranges over sets of distinct positive base frame-elements. A
    non-positive base element is the frame bottom and never lies above a
    positive atom, so dropping it changes neither ⋁U nor the conclusion.
    """
    L = F.lattice
    k = F.presentation.k
    gens = sorted({F.base_elements[b] for b in range(k) if F.pos[b]})
    atoms = atom_elements(F)
    if len(gens) > 20:
        raise SearchBudgetExceeded(f"{len(gens)} positive base elements is too many")
    joins = [L.bottom] * (1 << len(gens))
    for U in range(1, 1 << len(gens)):
        hi = U.bit_length() - 1
        joins[U] = L.join_table[joins[U ^ (1 << hi)], gens[hi]]
        for a in atoms:
            if L.leq[a, joins[U]] and not any(L.leq[a, gens[i]] for i in bits(U)):
                return False
    return True
