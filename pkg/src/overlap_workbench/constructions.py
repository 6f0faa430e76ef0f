"""Free o-algebras, Dedekind-MacNeille completion and two subfamilies of P(X)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotJoinPreserving, SearchBudgetExceeded, TheoremViolation, ValidationError
from .lattice import (
    BaseFamily,
    FiniteLattice,
    bits,
    check_partial_order,
    is_boolean,
    lattice_of_sets,
    mask_of,
    minimal_base,
    powerset_lattice,
    pseudocomplement_table,
)
from .morphism import (
    LatticeMap,
    check_o_morphism,
    is_o_morphism,
    join_preservation_witness,
    red_condition,
)
from .overlap import (
    DEFAULT_SEARCH_BUDGET,
    OAlgebra,
    OOReport,
    OverlapRelation,
    canonical_overlap,
    oo_structure_check,
    powerset_oalgebra,
)
from .report import AxiomReport, Verdict


@dataclass(frozen=True)
class FreeAlgebraResult:
    algebra: OAlgebra
    unit: tuple[int, ...]  # x ↦ index of {x}
    mediating: LatticeMap
    unique: bool
    commutes: bool
    candidates_checked: int


def free_oalgebra(x_size: int, Q: OAlgebra, f, budget: int = DEFAULT_SEARCH_BUDGET) -> FreeAlgebraResult:
    """The mediating map f̄(U) = ⋁ f[U] out of P(X), verified against every competitor.

    Uniqueness is checked by enumerating all maps P(X) → Q that agree with f
    on singletons; there are |Q|^(2^|X| - |X|) of them.
    """
    f = tuple(int(v) for v in f)
    if len(f) != x_size or any(not 0 <= v < Q.lattice.n for v in f):
        raise ValidationError("f must send each point of X to an element of Q")
    A = powerset_oalgebra(x_size)
    P = A.lattice
    QL = Q.lattice
    unit = tuple(1 << x for x in range(x_size))
    fbar = LatticeMap(P, QL, [QL.join_of(f[x] for x in bits(U)) for U in P.elements])
    quad = check_o_morphism(fbar, A, Q)
    simplified = [mask_of(x for x in range(x_size) if Q.overlap(f[x], q)) for q in QL.elements]
    if list(quad.f_minus.table) != simplified:
        raise TheoremViolation("symmetric map of f̄ differs from q ↦ {x | f(x) ⊲ q}")
    commutes = all(fbar(unit[x]) == f[x] for x in range(x_size))

    free_slots = [U for U in P.elements if U not in unit]
    count = QL.n ** len(free_slots)
    if count > budget:
        raise SearchBudgetExceeded(f"{count} competing maps exceed budget {budget}")
    unique = True
    table = list(fbar.table)
    for values in itertools.product(range(QL.n), repeat=len(free_slots)):
        for U, v in zip(free_slots, values):
            table[U] = v
        g = LatticeMap(P, QL, table)
        if g != fbar and is_o_morphism(g, A, Q):
            unique = False
            break
    return FreeAlgebraResult(A, unit, fbar, unique, commutes, count)


# -- Dedekind-MacNeille -----------------------------------------------------


@dataclass(frozen=True)
class CutLattice:
    source_leq: np.ndarray
    cuts: tuple[int, ...]  # bitmasks over source elements
    lattice: FiniteLattice
    embedding: tuple[int, ...]  # source element ↦ index of its principal cut


def _uppers(leq: np.ndarray, A: int) -> int:
    n = leq.shape[0]
    idx = bits(A)
    return mask_of(y for y in range(n) if all(leq[x, y] for x in idx))


def _lowers(leq: np.ndarray, B: int) -> int:
    n = leq.shape[0]
    idx = bits(B)
    return mask_of(x for x in range(n) if all(leq[x, y] for y in idx))


def dm_completion(leq, names=None) -> CutLattice:
    """All normal cuts A = L(U(A)) of a finite poset, ordered by inclusion.

    Cuts are the intersections of principal down-sets (the empty family giving
    the whole poset); each one is re-checked as a fixed point of L∘U.
    """
    leq = check_partial_order(leq)
    n = leq.shape[0]
    full = (1 << n) - 1
    principal = [mask_of(np.flatnonzero(leq[:, x])) for x in range(n)]
    seen = {full}
    queue = [full]
    for C in queue:
        for d in principal:
            D = C & d
            if D not in seen:
                seen.add(D)
                queue.append(D)
    cuts = sorted(seen, key=lambda m: (bin(m).count("1"), m))
    for C in cuts:
        if _lowers(leq, _uppers(leq, C)) != C:
            raise TheoremViolation(f"intersection of principal cuts {bits(C)} is not a normal cut")
    if names is None:
        names = [str(i) for i in range(n)]
    L = lattice_of_sets(cuts, [_cut_label(C, names) for C in cuts])
    index = {C: i for i, C in enumerate(cuts)}
    emb = tuple(index[principal[x]] for x in range(n))
    out = CutLattice(leq, tuple(cuts), L, emb)
    _check_dm(out)
    return out


def _cut_label(C: int, names) -> str:
    idx = bits(C)
    return "↓{" + ",".join(names[i] for i in idx) + "}" if idx else "∅"


def _existing_joins(leq: np.ndarray, subsets):
    """(subset mask, join index) for every listed subset whose join exists."""
    for A in subsets:
        ups = bits(_uppers(leq, A))
        least = [u for u in ups if all(leq[u, v] for v in ups)]
        if least:
            yield A, least[0]


def _source_subsets(n: int):
    if n <= 10:
        return range(1 << n)
    return [0] + [1 << i | 1 << j for i in range(n) for j in range(i, n)]


def _check_dm(D: CutLattice):
    leq, L, emb = D.source_leq, D.lattice, D.embedding
    n = leq.shape[0]
    e = np.asarray(emb, dtype=np.intp)
    if n and not np.array_equal(L.leq[e[:, None], e[None, :]], leq):
        raise TheoremViolation("principal-cut embedding is not an order embedding")
    for c in L.elements:
        below = e[np.flatnonzero(L.leq[e, c])] if n else []
        above = e[np.flatnonzero(L.leq[c, e])] if n else []
        if L.join_of(below) != c:
            raise TheoremViolation(f"cut {L.label(c)} is not a join of principal cuts")
        if L.meet_of(above) != c:
            raise TheoremViolation(f"cut {L.label(c)} is not a meet of principal cuts")
    for A, j in _existing_joins(leq, _source_subsets(n)):
        if L.join_of(emb[x] for x in bits(A)) != emb[j]:
            raise TheoremViolation(f"embedding does not preserve the join of {bits(A)}")
    T = leq.T
    for A, m in _existing_joins(T, _source_subsets(n)):
        if L.meet_of(emb[x] for x in bits(A)) != emb[m]:
            raise TheoremViolation(f"embedding does not preserve the meet of {bits(A)}")


def dm_is_iso(D: CutLattice) -> bool:
    """The embedding is onto, so the source was already complete."""
    return sorted(D.embedding) == list(D.lattice.elements)


def _map_preserves_existing_joins(table, src_leq, dst_leq):
    n = src_leq.shape[0]
    for A, j in _existing_joins(src_leq, _source_subsets(n)):
        image = mask_of(table[x] for x in bits(A))
        ups = bits(_uppers(dst_leq, image))
        if table[j] not in ups or not all(dst_leq[table[j], v] for v in ups):
            return tuple(bits(A))
    return None


@dataclass(frozen=True)
class DMExtension:
    source: CutLattice
    target: CutLattice
    extension: LatticeMap
    red_bridge: bool | None  # None when the bridge is not applicable


def dm_extend(f, source_leq=None, target_leq=None) -> DMExtension:
    """Extend a map preserving existing joins to the completions.

    ``f`` is a LatticeMap between lattices, or an index table together with
    the two order matrices. f̄(C) = ⋁{e'(f(x)) | x ∈ C}. When both sides are
    Boolean lattices with their canonical overlaps, the condition (RED) is
    compared for f and f̄ over the same base.
    """
    if isinstance(f, LatticeMap):
        table = f.table
        source_leq, target_leq = f.source.leq, f.target.leq
    else:
        table = tuple(int(v) for v in f)
        if source_leq is None or target_leq is None:
            raise ValidationError("order matrices are required for a bare map table")
    src = check_partial_order(source_leq)
    dst = check_partial_order(target_leq)
    if len(table) != src.shape[0] or any(not 0 <= v < dst.shape[0] for v in table):
        raise ValidationError("map table does not fit the two posets")
    bad = _map_preserves_existing_joins(table, src, dst)
    if bad is not None:
        raise NotJoinPreserving("map does not preserve an existing join", {"U": bad})
    D, E = dm_completion(src), dm_completion(dst)
    ext_table = [E.lattice.join_of(E.embedding[table[x]] for x in bits(C)) for C in D.cuts]
    ext = LatticeMap(D.lattice, E.lattice, ext_table)
    if any(ext(D.embedding[x]) != E.embedding[table[x]] for x in range(src.shape[0])):
        raise TheoremViolation("extension does not restrict to the original map")
    w = join_preservation_witness(ext)
    if w is not None:
        raise TheoremViolation(f"extension fails to preserve the join of {w}")

    bridge = None
    if isinstance(f, LatticeMap) and is_boolean(f.source) and is_boolean(f.target):
        A = OAlgebra(f.source, minimal_base(f.source), canonical_overlap(f.source))
        B = OAlgebra(f.target, minimal_base(f.target), canonical_overlap(f.target))
        DA = OAlgebra(
            D.lattice, BaseFamily(D.lattice, [D.embedding[a] for a in A.base]), canonical_overlap(D.lattice)
        )
        DB = OAlgebra(
            E.lattice, BaseFamily(E.lattice, [E.embedding[b] for b in B.base]), canonical_overlap(E.lattice)
        )
        before, after = red_condition(f, A, B), red_condition(ext, DA, DB)
        if before != after:
            raise TheoremViolation(f"(RED) is {before} for f but {after} for its extension")
        bridge = before
    return DMExtension(D, E, ext, bridge)


# -- subfamilies of P(X) ----------------------------------------------------


@dataclass(frozen=True)
class SubfamilyReport:
    x_size: int
    members: tuple[int, ...]  # bitmasks over X
    lattice: FiniteLattice
    base: BaseFamily
    overlap: OverlapRelation
    closure: AxiomReport
    structure: OOReport
    classical_collapse: bool

    @property
    def ok(self) -> bool:
        return self.closure.ok and self.structure.kind is not None

    def describe(self) -> str:
        lines = [f"subfamily of P({self.x_size}) with {len(self.members)} members"]
        lines.append(self.closure.describe())
        lines.append(self.structure.as_report().describe())
        if self.classical_collapse:
            lines.append("  note: classical collapse, the family is all of P(X)")
        return "\n".join(lines)


def _subfamily_report(x_size: int, family: set[int]) -> SubfamilyReport:
    full = (1 << x_size) - 1
    members = tuple(sorted(family, key=lambda m: (bin(m).count("1"), m)))
    closure = []
    for name, op in (
        ("closed_union", lambda a, b: a | b),
        ("closed_intersection", lambda a, b: a & b),
        ("closed_implication", lambda a, b: (full & ~a) | b),
    ):
        bad = next(((a, b) for a in members for b in members if op(a, b) not in family), None)
        closure.append(Verdict.fail(name, A=bits(bad[0]), B=bits(bad[1])) if bad else Verdict.ok(name))
    for name, m in (("contains_empty", 0), ("contains_full", full)):
        closure.append(Verdict.ok(name) if m in family else Verdict.fail(name, missing=bits(m)))
    L = lattice_of_sets(members)
    index = {m: i for i, m in enumerate(members)}
    singles = [index[1 << x] for x in range(x_size) if 1 << x in index]
    ms = np.asarray(members, dtype=np.int64)
    overlap = OverlapRelation(L, (ms[:, None] & ms[None, :]) != 0)
    base = BaseFamily(L, singles)
    structure = oo_structure_check(L, base, overlap)
    return SubfamilyReport(
        x_size,
        members,
        L,
        base,
        overlap,
        AxiomReport("closure", tuple(closure)),
        structure,
        len(members) == 1 << x_size,
    )


def finite_cofinite(x_size: int) -> SubfamilyReport:
    """A ∈ F(X) iff some finite K has A ⊆ −−K or −K ⊆ A, with − from P(X).

    Every K ⊆ X is finite here, so the scan runs over all subsets K.
    """
    P, _ = powerset_lattice(x_size)
    neg = pseudocomplement_table(P)
    family = {
        A
        for A in P.elements
        if any((A & ~neg[neg[K]]) == 0 or (neg[K] & ~A) == 0 for K in P.elements)
    }
    return _subfamily_report(x_size, family)


def generated_oo_sublattice(x_size: int, seeds=()) -> SubfamilyReport:
    """Least family with all singletons and the seeds, closed under ∪, ∩ and complement."""
    full = (1 << x_size) - 1
    family = {0, full} | {1 << x for x in range(x_size)}
    for s in seeds:
        s = s if isinstance(s, int) else mask_of(s)
        if s & ~full:
            raise ValidationError(f"seed {bits(s)} is not a subset of X")
        family.add(s)
    frontier = list(family)
    while frontier:
        new = set()
        for a in frontier:
            new.add(full & ~a)
            for b in list(family):
                new.add(a | b)
                new.add(a & b)
        new -= family
        family |= new
        frontier = list(new)
    return _subfamily_report(x_size, family)
