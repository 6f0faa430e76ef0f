"""Finite bounded lattices.

Elements are the indices ``0..n-1``; names are for display only. The order is
a read-only boolean matrix ``leq[p, q] == (p <= q)`` and meets/joins are
precomputed index tables, so every downstream check is table lookups.

Subsets of a carrier (the ``U`` of joins, bases, atom sets) are plain Python
int bitmasks: bit ``i`` set means element ``i`` is in the subset.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NoBounds,
    NoPseudocomplement,
    NotABase,
    NotHeyting,
    NotLattice,
    NotPoset,
    SizeLimit,
)
from .report import AxiomReport, Verdict

MAX_ELEMENTS = 2**16
# Carriers up to this size get joins checked over every subset; larger ones
# over binary and empty joins, which is equivalent on finite carriers.
EXHAUSTIVE_SUBSET_LIMIT = 16


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def _as_indices(subset) -> list[int]:
    if isinstance(subset, (int, np.integer)):
        return bits(int(subset))
    return [int(i) for i in subset]


def subset_fold(n: int, step: np.ndarray, images: Sequence[int], unit: int) -> np.ndarray:
    """``out[mask] = step(...step(unit, images[i0])..., images[ik])`` over the bits of mask.

    ``step`` is a binary operation table (typically a join table). Returns an
    array of length ``2**n``. Used to get the join of every subset in one pass.
    """
    out = np.empty(1 << n, dtype=np.intp)
    out[0] = unit
    for i in range(n):
        lo = 1 << i
        out[lo : 2 * lo] = step[out[:lo], images[i]]
    return out


@dataclass(frozen=True)
class JoinFamily:
    """Subsets over which join-laws are checked, with their joins.

    ``members[r]`` is the boolean indicator of the r-th subset and ``joins[r]``
    its join. ``exhaustive`` says whether these are all ``2**n`` subsets or only
    the empty and binary ones.
    """

    members: np.ndarray
    joins: np.ndarray
    masks: tuple[int, ...]
    exhaustive: bool


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    leq: np.ndarray
    meet_table: np.ndarray
    join_table: np.ndarray
    bottom: int
    top: int
    names: tuple[str, ...]
    # set when this is the powerset lattice of {0..k-1} indexed by bitmask
    ground_size: int | None = None

    @property
    def n(self) -> int:
        return self.leq.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.leq, other.leq))

    def __hash__(self):
        return hash((self.n, self.leq.tobytes()))

    def __repr__(self):
        tag = f", P({self.ground_size})" if self.ground_size is not None else ""
        return f"FiniteLattice(n={self.n}{tag})"

    @property
    def elements(self) -> range:
        return range(self.n)

    @property
    def is_trivial(self) -> bool:
        return self.bottom == self.top

    def le(self, p: int, q: int) -> bool:
        return bool(self.leq[p, q])

    def meet(self, p: int, q: int) -> int:
        return int(self.meet_table[p, q])

    def join(self, p: int, q: int) -> int:
        return int(self.join_table[p, q])

    def join_of(self, subset) -> int:
        r = self.bottom
        for i in _as_indices(subset):
            r = int(self.join_table[r, i])
        return r

    def meet_of(self, subset) -> int:
        r = self.top
        for i in _as_indices(subset):
            r = int(self.meet_table[r, i])
        return r

    def down_mask(self, p: int) -> int:
        return mask_of(np.flatnonzero(self.leq[:, p]))

    def label(self, x) -> str:
        if isinstance(x, (int, np.integer)):
            return self.names[int(x)]
        return "{" + ", ".join(self.names[int(i)] for i in x) + "}"

    @cached_property
    def join_family(self) -> JoinFamily:
        n = self.n
        if n <= EXHAUSTIVE_SUBSET_LIMIT:
            masks = np.arange(1 << n)
            members = ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)
            joins = subset_fold(n, self.join_table, list(range(n)), self.bottom)
            return JoinFamily(members, joins, tuple(range(1 << n)), True)
        pairs = [()] + [(i,) for i in range(n)] + list(combinations(range(n), 2))
        members = np.zeros((len(pairs), n), dtype=bool)
        joins = np.empty(len(pairs), dtype=np.intp)
        for r, U in enumerate(pairs):
            members[r, list(U)] = True
            joins[r] = self.join_of(U)
        return JoinFamily(members, joins, tuple(mask_of(U) for U in pairs), False)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def check_partial_order(leq) -> np.ndarray:
    """Validate and return ``leq`` as a boolean matrix; raise NotPoset otherwise."""
    m = np.asarray(leq, dtype=bool)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotPoset(f"order matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    diag = np.flatnonzero(~m.diagonal())
    if diag.size:
        raise NotPoset("order is not reflexive", {"p": int(diag[0])})
    both = m & m.T & ~np.eye(n, dtype=bool)
    if both.any():
        p, q = map(int, np.argwhere(both)[0])
        raise NotPoset("order is not antisymmetric", {"p": p, "q": q})
    comp = (m.astype(np.int64) @ m.astype(np.int64)) > 0
    bad = comp & ~m
    if bad.any():
        p, r = map(int, np.argwhere(bad)[0])
        q = int(np.flatnonzero(m[p] & m[:, r])[0])
        raise NotPoset("order is not transitive", {"p": p, "q": q, "r": r})
    return m


def _bound_table(rel: np.ndarray, kind: str) -> np.ndarray:
    """Greatest common lower bound under ``rel`` (rel[x, m] means x below m).

    For meets pass ``leq``; for joins pass ``leq.T``. A pair without a bound
    raises NotLattice.
    """
    n = rel.shape[0]
    size = rel.sum(axis=0)
    table = np.empty((n, n), dtype=np.intp)
    rows = np.arange(n)
    for i in range(n):
        common = rel[:, i][None, :] & rel.T
        score = np.where(common, size[None, :], -1)
        best = score.argmax(axis=1)
        good = score[rows, best] == common.sum(axis=1)
        if not good.all():
            j = int(np.flatnonzero(~good)[0])
            raise NotLattice(f"elements {i} and {j} have no {kind}", {"p": i, "q": j})
        table[i] = best
    return table


def _default_names(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def build_lattice(leq, names: Sequence[str] | None = None) -> FiniteLattice:
    """Validate an order matrix and precompute meet/join tables.

    Raises NotPoset, NotLattice (some pair lacks a meet or join) or NoBounds
    (empty carrier).
    """
    m = check_partial_order(leq)
    n = m.shape[0]
    if n == 0:
        raise NoBounds("empty carrier has no bottom or top")
    meet = _bound_table(m, "meet")
    join = _bound_table(m.T, "join")
    bottom = int(np.flatnonzero(m.all(axis=1))[0])
    top = int(np.flatnonzero(m.all(axis=0))[0])
    if names is None:
        names = _default_names(n)
    if len(names) != n:
        raise ValueError(f"expected {n} names, got {len(names)}")
    return FiniteLattice(_frozen(m), _frozen(meet), _frozen(join), bottom, top, tuple(names))


def lattice_from_tables(leq, meet, join, names=None, ground_size=None) -> FiniteLattice:
    """Assemble a lattice whose tables are already known to be correct."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    return FiniteLattice(
        _frozen(leq),
        _frozen(np.asarray(meet, dtype=np.intp)),
        _frozen(np.asarray(join, dtype=np.intp)),
        bottom,
        top,
        tuple(names) if names is not None else _default_names(n),
        ground_size,
    )


def lattice_of_sets(masks: Sequence[int], names=None) -> FiniteLattice:
    """Lattice of a family of subsets (bitmasks) ordered by inclusion.

    The family must be closed under the lattice operations that exist; meets
    and joins are whatever greatest lower / least upper bounds the inclusion
    order has, found by build_lattice.
    """
    masks = list(masks)
    width = max((m.bit_length() for m in masks), default=0)
    S = np.array([[(m >> i) & 1 for i in range(width)] for m in masks], dtype=np.int64).reshape(
        len(masks), width
    )
    leq = (S @ (1 - S).T) == 0
    if names is None:
        names = [set_label(m) for m in masks]
    return build_lattice(leq, names)


def set_label(mask: int, names: Sequence[str] | None = None) -> str:
    idx = bits(mask)
    if not idx:
        return "∅"
    if names is None:
        return "{" + ",".join(str(i) for i in idx) + "}"
    return "{" + ",".join(names[i] for i in idx) + "}"


@lru_cache(maxsize=None)
def _powerset(k: int) -> FiniteLattice:
    n = 1 << k
    idx = np.arange(n)
    meet = idx[:, None] & idx[None, :]
    join = idx[:, None] | idx[None, :]
    leq = meet == idx[:, None]
    names = [set_label(m) for m in range(n)]
    return lattice_from_tables(leq, meet, join, names, ground_size=k)


def powerset_lattice(k: int, max_elements: int = MAX_ELEMENTS):
    """The lattice P({0..k-1}) with element index = subset bitmask, and its singleton base."""
    if k < 0:
        raise ValueError("ground size must be non-negative")
    if (1 << k) > max_elements:
        raise SizeLimit(f"P({k}) has {1 << k} elements, limit is {max_elements}")
    L = _powerset(k)
    return L, BaseFamily(L, tuple(1 << i for i in range(k)))


def chain_lattice(n: int) -> FiniteLattice:
    """The n-element chain 0 < 1 < ... < n-1."""
    idx = np.arange(n)
    return build_lattice(idx[:, None] <= idx[None, :])


def diamond_lattice() -> FiniteLattice:
    """M3: bottom, three pairwise incomparable atoms, top."""
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    return build_lattice(leq, ["0", "a", "b", "c", "1"])


def pentagon_lattice() -> FiniteLattice:
    """N5: 0 < a < b < 1 and 0 < c < 1 with c incomparable to a, b."""
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    leq[1, 2] = True
    return build_lattice(leq, ["0", "a", "b", "c", "1"])


@dataclass(frozen=True)
class BaseFamily:
    """A join-generating family: every element is the join of the members below it."""

    lattice: FiniteLattice
    members: tuple[int, ...]

    def __post_init__(self):
        L = self.lattice
        members = tuple(sorted(set(int(a) for a in self.members)))
        object.__setattr__(self, "members", members)
        for a in members:
            if not 0 <= a < L.n:
                raise NotABase(f"base member {a} out of range")
        for p in L.elements:
            below = [a for a in members if L.leq[a, p]]
            if L.join_of(below) != p:
                raise NotABase(
                    f"element {L.names[p]} is not the join of base members below it", {"p": p}
                )

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def below(self, p: int) -> list[int]:
        return [a for a in self.members if self.lattice.leq[a, p]]


def join_of(L: FiniteLattice, U) -> int:
    """Least upper bound of a subset (bitmask or iterable); the empty join is bottom."""
    return L.join_of(U)


def minimal_base(L: FiniteLattice) -> BaseFamily:
    """Join-irreducible elements: nonzero and not the join of strictly smaller elements."""
    members = []
    for p in L.elements:
        if p == L.bottom:
            continue
        strictly_below = [x for x in L.elements if L.leq[x, p] and x != p]
        if L.join_of(strictly_below) != p:
            members.append(p)
    return BaseFamily(L, tuple(members))


def full_base(L: FiniteLattice) -> BaseFamily:
    return BaseFamily(L, tuple(L.elements))


def pseudocomplement(L: FiniteLattice, p: int) -> int:
    """Largest q with p ∧ q = 0; raises NoPseudocomplement if there is none."""
    disjoint = [q for q in L.elements if L.meet_table[p, q] == L.bottom]
    for c in disjoint:
        if all(L.leq[q, c] for q in disjoint):
            return c
    raise NoPseudocomplement(f"{L.names[p]} has no pseudocomplement", {"p": p})


def pseudocomplement_table(L: FiniteLattice) -> tuple[int, ...] | None:
    """Pseudocomplement of every element, or None when it is not total."""
    try:
        return tuple(pseudocomplement(L, p) for p in L.elements)
    except NoPseudocomplement:
        return None


def heyting_implication(L: FiniteLattice, base: BaseFamily, p: int, q: int) -> int:
    """``p → q`` as the join of base members a with a ∧ p ≤ q, checked by residuation."""
    r = L.join_of(a for a in base if L.leq[L.meet_table[a, p], q])
    for x in L.elements:
        if bool(L.leq[x, r]) != bool(L.leq[L.meet_table[x, p], q]):
            raise NotHeyting(
                f"residuation fails for {L.names[p]} → {L.names[q]}", {"p": p, "q": q, "x": x}
            )
    return r


def heyting_table(L: FiniteLattice, base: BaseFamily) -> np.ndarray | None:
    try:
        return np.array(
            [[heyting_implication(L, base, p, q) for q in L.elements] for p in L.elements],
            dtype=np.intp,
        )
    except NotHeyting:
        return None


def distributivity_witness(L: FiniteLattice):
    """First triple (p, q, r) with p∧(q∨r) ≠ (p∧q)∨(p∧r), or None."""
    M, J = L.meet_table, L.join_table
    for p in L.elements:
        lhs = M[p][J]
        rhs = J[M[p][:, None], M[p][None, :]]
        bad = lhs != rhs
        if bad.any():
            q, r = map(int, np.argwhere(bad)[0])
            return p, q, r
    return None


def is_distributive(L: FiniteLattice) -> bool:
    return distributivity_witness(L) is None


def complements(L: FiniteLattice, p: int) -> list[int]:
    return [
        c
        for c in L.elements
        if L.meet_table[p, c] == L.bottom and L.join_table[p, c] == L.top
    ]


def is_boolean(L: FiniteLattice) -> bool:
    """Distributive and complemented."""
    return is_distributive(L) and all(complements(L, p) for p in L.elements)


def lattice_laws(L: FiniteLattice, base: BaseFamily | None = None) -> AxiomReport:
    """Exhaustive check of the lattice identities and the derived-table sanity laws."""
    M, J, leq = L.meet_table, L.join_table, L.leq
    n = L.n
    idx = np.arange(n)
    verdicts = []

    def first(bad):
        return tuple(int(v) for v in np.argwhere(bad)[0])

    for name, T in (("meet", M), ("join", J)):
        bad = T != T.T
        verdicts.append(
            Verdict.fail(f"{name}_commutative", p=(L, first(bad)[0]), q=(L, first(bad)[1]))
            if bad.any()
            else Verdict.ok(f"{name}_commutative")
        )
        lhs = T[T[:, :, None], idx[None, None, :]]
        rhs = T[idx[:, None, None], T[None, :, :]]
        bad = lhs != rhs
        if bad.any():
            p, q, r = first(bad)
            verdicts.append(Verdict.fail(f"{name}_associative", p=(L, p), q=(L, q), r=(L, r)))
        else:
            verdicts.append(Verdict.ok(f"{name}_associative"))
        bad = T[idx, idx] != idx
        verdicts.append(
            Verdict.fail(f"{name}_idempotent", p=(L, int(np.flatnonzero(bad)[0])))
            if bad.any()
            else Verdict.ok(f"{name}_idempotent")
        )
    bad = (M[idx[:, None], J] != idx[:, None]) | (J[idx[:, None], M] != idx[:, None])
    verdicts.append(
        Verdict.fail("absorption", p=(L, first(bad)[0]), q=(L, first(bad)[1]))
        if bad.any()
        else Verdict.ok("absorption")
    )
    bad = ~(leq[L.bottom] & leq[:, L.top])
    verdicts.append(
        Verdict.fail("bounds", p=(L, int(np.flatnonzero(bad)[0])))
        if bad.any()
        else Verdict.ok("bounds")
    )
    ok = L.join_of(range(n)) == L.top and L.join_of(()) == L.bottom
    verdicts.append(Verdict.ok("join_of_extremes") if ok else Verdict.fail("join_of_extremes"))

    neg = pseudocomplement_table(L)
    if neg is not None:
        bad = [p for p in L.elements if not leq[p, neg[neg[p]]]]
        verdicts.append(
            Verdict.fail("double_pseudocomplement_inflationary", p=(L, bad[0]))
            if bad
            else Verdict.ok("double_pseudocomplement_inflationary")
        )
    base = base or minimal_base(L)
    bad = [p for p in L.elements if L.join_of(base.below(p)) != p]
    verdicts.append(
        Verdict.fail("base_join_generates", p=(L, bad[0])) if bad else Verdict.ok("base_join_generates")
    )
    notes = [
        f"distributive: {is_distributive(L)}",
        f"boolean: {is_boolean(L)}",
        f"pseudocomplement total: {neg is not None}",
    ]
    return AxiomReport("lattice laws", tuple(verdicts), tuple(notes))
