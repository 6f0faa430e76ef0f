"""Overlap relations on finite lattices.

The four overlap axioms (symmetry, meet closure, splitting of joins, density)
are checked exhaustively. Density is quantified over a base and, as a
cross-check, over the whole carrier; once symmetry and splitting hold the two
must agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    CarrierMismatch,
    InternalInconsistency,
    NoPseudocomplement,
    NotOAlgebra,
    NotOOLattice,
    NotSymmetric,
    PositivityLawViolation,
    SearchBudgetExceeded,
)
from .lattice import (
    BaseFamily,
    FiniteLattice,
    full_base,
    heyting_table,
    is_boolean,
    is_distributive,
    minimal_base,
    powerset_lattice,
    pseudocomplement_table,
)
from .report import AxiomReport, Verdict

DEFAULT_SEARCH_BUDGET = 2**16
AXIOMS = ("symmetry", "meet_closure", "splitting", "density")
DERIVED = (
    "monotone_second_argument",
    "extensional_equality",
    "meet_exchange",
    "overlap_via_base",
    "zero_not_self_overlapping",
    "overlap_iff_nonzero_meet",
)
POSITIVITY_LAWS = ("monotone", "join_splitting", "positivity_axiom")


@dataclass(frozen=True, eq=False)
class OverlapRelation:
    """A symmetric boolean matrix over the elements of a lattice."""

    lattice: FiniteLattice
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=bool)
        n = self.lattice.n
        if m.shape != (n, n):
            raise CarrierMismatch(f"overlap matrix has shape {m.shape}, lattice has {n} elements")
        asym = m & ~m.T
        if asym.any():
            p, q = map(int, np.argwhere(asym)[0])
            raise NotSymmetric("overlap matrix is not symmetric", {"p": p, "q": q})
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, p: int, q: int) -> bool:
        return bool(self.matrix[p, q])

    def __eq__(self, other):
        if not isinstance(other, OverlapRelation):
            return NotImplemented
        return self.lattice == other.lattice and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(map(int, pq)) for pq in np.argwhere(self.matrix)]


def _matrix_of(L: FiniteLattice, r) -> np.ndarray:
    if isinstance(r, OverlapRelation):
        if r.lattice != L:
            raise CarrierMismatch("overlap relation lives on a different lattice")
        return r.matrix
    m = np.asarray(r, dtype=bool)
    if m.shape != (L.n, L.n):
        raise CarrierMismatch(f"overlap matrix has shape {m.shape}, lattice has {L.n} elements")
    return m


def _density_witness(L: FiniteLattice, M: np.ndarray, testers) -> tuple[int, int] | None:
    """First (p, q) with (∀t in testers)(t⊲p ⇒ t⊲q) but p ≰ q."""
    Mt = M[list(testers)].astype(np.int64)
    if Mt.shape[0] == 0:
        hyp = np.ones((L.n, L.n), dtype=bool)
    else:
        hyp = (Mt.T @ (1 - Mt)) == 0
    bad = hyp & ~L.leq
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        return p, q
    return None


def check_overlap_axioms(L: FiniteLattice, base: BaseFamily, r) -> AxiomReport:
    """Verdicts for symmetry, meet closure, splitting of all joins and set-based density.

    ``r`` may be an OverlapRelation or a raw (possibly asymmetric) boolean matrix.
    """
    if base.lattice != L:
        raise CarrierMismatch("base belongs to a different lattice")
    M = _matrix_of(L, r)
    idx = np.arange(L.n)
    verdicts = []

    asym = M & ~M.T
    if asym.any():
        p, q = map(int, np.argwhere(asym)[0])
        verdicts.append(Verdict.fail("symmetry", p=(L, p), q=(L, q)))
    else:
        verdicts.append(Verdict.ok("symmetry"))

    bad = M & ~M[idx[:, None], L.meet_table]
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        verdicts.append(Verdict.fail("meet_closure", p=(L, p), q=(L, q)))
    else:
        verdicts.append(Verdict.ok("meet_closure"))

    fam = L.join_family
    lhs = M[:, fam.joins]
    rhs = (M.astype(np.int64) @ fam.members.T.astype(np.int64)) > 0
    bad = lhs != rhs
    if bad.any():
        p, row = map(int, np.argwhere(bad)[0])
        U = tuple(int(i) for i in np.flatnonzero(fam.members[row]))
        verdicts.append(Verdict.fail("splitting", p=(L, p), U=(L, U)))
    else:
        verdicts.append(Verdict.ok("splitting"))

    w_base = _density_witness(L, M, base.members)
    w_full = _density_witness(L, M, L.elements)
    if w_base is None:
        verdicts.append(Verdict.ok("density"))
    else:
        verdicts.append(Verdict.fail("density", p=(L, w_base[0]), q=(L, w_base[1])))
    if verdicts[0].passed and verdicts[2].passed and (w_base is None) != (w_full is None):
        raise InternalInconsistency(
            "base density and carrier density disagree on a symmetric splitting relation"
        )
    notes = (f"carrier-wide density: {'holds' if w_full is None else 'fails'}",)
    if not fam.exhaustive:
        notes += ("splitting checked on empty and binary joins (carrier too large for all subsets)",)
    if L.is_trivial:
        notes += ("degenerate: 0 = 1",)
    return AxiomReport("overlap axioms", tuple(verdicts), notes)


@dataclass(frozen=True)
class OAlgebra:
    """A lattice, a base and an overlap relation satisfying all four axioms."""

    lattice: FiniteLattice
    base: BaseFamily
    overlap: OverlapRelation
    report: AxiomReport = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rep = check_overlap_axioms(self.lattice, self.base, self.overlap)
        if not rep.ok:
            v = rep.failures[0]
            raise NotOAlgebra(f"{v.law} fails", v.witness, rep)
        object.__setattr__(self, "report", rep)

    @property
    def degenerate(self) -> bool:
        return self.lattice.is_trivial


def canonical_overlap(L: FiniteLattice) -> OverlapRelation:
    """p ⊲ q iff p ∧ q ≠ 0."""
    return OverlapRelation(L, L.meet_table != L.bottom)


def canonical_oalgebra(L: FiniteLattice, base: BaseFamily | None = None) -> OAlgebra:
    return OAlgebra(L, base or minimal_base(L), canonical_overlap(L))


@lru_cache(maxsize=None)
def powerset_oalgebra(k: int) -> OAlgebra:
    """P({0..k-1}) with inhabited-intersection overlap and the singleton base."""
    L, base = powerset_lattice(k)
    return OAlgebra(L, base, canonical_overlap(L))


def _candidate_masks(L, base, start, stop, tri):
    k = len(base)
    codes = np.arange(start, stop, dtype=np.int64)
    bitsarr = ((codes[:, None] >> np.arange(len(tri[0]))[None, :]) & 1).astype(bool)
    C = np.zeros((len(codes), k, k), dtype=bool)
    C[:, tri[0], tri[1]] = bitsarr
    C[:, tri[1], tri[0]] = bitsarr
    B = L.leq[list(base.members)].astype(np.int64)  # B[a, p]: a <= p
    E = np.einsum("ap,mab,bq->mpq", B, C.astype(np.int64), B, optimize=True) > 0
    return E


def _screen(L: FiniteLattice, base: BaseFamily, E: np.ndarray) -> np.ndarray:
    """Cheap necessary conditions; returns a boolean keep-mask over candidates."""
    idx = np.arange(L.n)
    keep = ~E[:, :, L.bottom].any(axis=1)
    keep &= ~(E & ~E[:, idx[:, None], L.meet_table]).any(axis=(1, 2))
    split = E[:, :, L.join_table] != (E[:, :, :, None] | E[:, :, None, :])
    keep &= ~split.any(axis=(1, 2, 3))
    Es = E[:, list(base.members), :].astype(np.int64)
    if Es.shape[1]:
        hyp = np.einsum("map,maq->mpq", Es, 1 - Es) == 0
    else:
        hyp = np.ones(E.shape, dtype=bool)
    keep &= ~(hyp & ~L.leq[None]).any(axis=(1, 2))
    return keep


def find_all_overlaps(
    L: FiniteLattice, base: BaseFamily | None = None, budget: int = DEFAULT_SEARCH_BUDGET
) -> list[OverlapRelation]:
    """Every relation on L satisfying the four overlap axioms.

    A valid overlap is determined by its restriction to base × base through
    p ⊲ q ⇔ ∃a, b in base (a ≤ p, b ≤ q, a ⊲ b), so only symmetric base
    assignments are enumerated; each one is extended and fully verified.
    """
    base = base or minimal_base(L)
    k = len(base)
    tri = np.triu_indices(k)
    total = 1 << len(tri[0])
    if total > budget:
        raise SearchBudgetExceeded(
            f"{total} base assignments for a base of size {k} exceed budget {budget}"
        )
    chunk = max(1, min(total, 2**17 // max(1, L.n**3)))
    found: dict[bytes, OverlapRelation] = {}
    for start in range(0, total, chunk):
        E = _candidate_masks(L, base, start, min(total, start + chunk), tri)
        for m in np.flatnonzero(_screen(L, base, E)):
            key = E[m].tobytes()
            if key in found:
                continue
            rel = OverlapRelation(L, E[m])
            if check_overlap_axioms(L, base, rel).ok:
                found[key] = rel
    return list(found.values())


def derived_properties_suite(A: OAlgebra) -> AxiomReport:
    """The six standard consequences of the overlap axioms, checked exhaustively."""
    L, M, S = A.lattice, A.overlap.matrix, list(A.base.members)
    meet, leq = L.meet_table, L.leq
    n = L.n
    idx = np.arange(n)
    out = []

    # p⊲r ∧ r≤q ⇒ p⊲q
    bad = M[:, :, None] & leq[None, :, :] & ~M[:, None, :]
    if bad.any():
        p, r, q = map(int, np.argwhere(bad)[0])
        out.append(Verdict.fail(DERIVED[0], p=(L, p), r=(L, r), q=(L, q)))
    else:
        out.append(Verdict.ok(DERIVED[0]))

    # p = q ⇔ (∀a∈S)(a⊲p ⇔ a⊲q)
    MS = M[S]
    same = (MS[:, :, None] == MS[:, None, :]).all(axis=0)
    bad = same != np.eye(n, dtype=bool)
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        out.append(Verdict.fail(DERIVED[1], p=(L, p), q=(L, q)))
    else:
        out.append(Verdict.ok(DERIVED[1]))

    # (p∧r)⊲q ⇔ p⊲(r∧q)
    lhs = M[meet[:, :, None], idx[None, None, :]]  # [p, r, q]
    rhs = M[idx[:, None, None], meet[None, :, :]]
    bad = lhs != rhs
    if bad.any():
        p, r, q = map(int, np.argwhere(bad)[0])
        out.append(Verdict.fail(DERIVED[2], p=(L, p), r=(L, r), q=(L, q)))
    else:
        out.append(Verdict.ok(DERIVED[2]))

    # p⊲q ⇔ (p∧q)⊲(p∧q) ⇔ ∃a∈S (a ≤ p∧q ∧ a⊲a)
    self_ov = M[meet, meet]
    pos_base = np.array([bool(M[a, a]) for a in S], dtype=bool)
    via_base = (leq[S][:, meet] & pos_base[:, None, None]).any(axis=0) if S else np.zeros((n, n), bool)
    bad = (M != self_ov) | (self_ov != via_base)
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        out.append(Verdict.fail(DERIVED[3], p=(L, p), q=(L, q)))
    else:
        out.append(Verdict.ok(DERIVED[3]))

    b = L.bottom
    out.append(
        Verdict.fail(DERIVED[4], p=(L, b)) if M[b, b] else Verdict.ok(DERIVED[4])
    )

    bad = (~M) != (meet == b)
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        out.append(Verdict.fail(DERIVED[5], p=(L, p), q=(L, q)))
    else:
        out.append(Verdict.ok(DERIVED[5]))
    return AxiomReport("derived overlap properties", tuple(out))


def negative_density_check(L: FiniteLattice) -> tuple[bool, bool, bool]:
    """(negative density, −−p = p for all p, stability of equality).

    Raises NoPseudocomplement if some element lacks one. The first two
    components are required to agree; stability of equality always holds on
    a finite classical carrier.
    """
    neg = pseudocomplement_table(L)
    if neg is None:
        raise NoPseudocomplement("pseudocomplement is not total")
    nz = L.meet_table != L.bottom  # nz[r, p]: r ∧ p ≠ 0
    A = nz.astype(np.int64)
    hyp = (A.T @ (1 - A)) == 0  # hyp[p, q]: ∀r (r∧p≠0 ⇒ r∧q≠0)
    negative_density = not (hyp & ~L.leq).any()
    involutive = all(neg[neg[p]] == p for p in L.elements)
    if negative_density != involutive:
        raise InternalInconsistency("negative density and involutive pseudocomplement disagree")
    return negative_density, involutive, True


@dataclass(frozen=True)
class PositivityPredicate:
    lattice: FiniteLattice
    values: tuple[bool, ...]

    def __call__(self, p: int) -> bool:
        return self.values[p]

    @property
    def positive(self) -> list[int]:
        return [p for p, v in enumerate(self.values) if v]


def check_positivity_laws(L: FiniteLattice, base: BaseFamily, pos) -> AxiomReport:
    """Monotonicity, splitting of joins and the positivity axiom for a unary predicate."""
    P = np.array([bool(pos(p)) for p in L.elements], dtype=bool)
    out = []
    bad = P[:, None] & L.leq & ~P[None, :]
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        out.append(Verdict.fail("monotone", p=(L, p), q=(L, q)))
    else:
        out.append(Verdict.ok("monotone"))
    fam = L.join_family
    some = (fam.members & P[None, :]).any(axis=1)
    bad = P[fam.joins] & ~some
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        U = tuple(int(i) for i in np.flatnonzero(fam.members[row]))
        out.append(Verdict.fail("join_splitting", U=(L, U)))
    else:
        out.append(Verdict.ok("join_splitting"))
    bad = [
        p
        for p in L.elements
        if not L.leq[p, L.join_of(a for a in base.below(p) if P[a])]
    ]
    out.append(
        Verdict.fail("positivity_axiom", p=(L, bad[0])) if bad else Verdict.ok("positivity_axiom")
    )
    return AxiomReport("positivity laws", tuple(out))


def positivity_of(A: OAlgebra) -> PositivityPredicate:
    """Pos(p) iff p ⊲ p, with the positivity laws verified."""
    pos = PositivityPredicate(A.lattice, tuple(bool(v) for v in A.overlap.matrix.diagonal()))
    rep = check_positivity_laws(A.lattice, A.base, pos)
    if not rep.ok:
        v = rep.failures[0]
        raise PositivityLawViolation(f"{v.law} fails for p⊲p", v.witness)
    return pos


def overlap_from_positivity(L: FiniteLattice, pos) -> OverlapRelation:
    """p ⊲ q := Pos(p ∧ q)."""
    P = np.array([bool(pos(p)) for p in L.elements], dtype=bool)
    return OverlapRelation(L, P[L.meet_table])


def ft_overlap_witness(L: FiniteLattice, base: BaseFamily, pos) -> tuple[int, int] | None:
    """First (p, q) with (∀a∈S)(Pos(a∧p) ⇒ Pos(a∧q)) yet p ≰ q."""
    return _density_witness(L, overlap_from_positivity(L, pos).matrix, base.members)


def ft_overlap_criterion(L: FiniteLattice, base: BaseFamily, pos) -> bool:
    """Whether a positivity predicate induces an overlap relation via Pos(p ∧ q)."""
    verdict = ft_overlap_witness(L, base, pos) is None
    if verdict and is_distributive(L):
        rep = check_overlap_axioms(L, base, overlap_from_positivity(L, pos))
        if not rep.ok:
            raise InternalInconsistency(
                f"criterion holds but Pos(p∧q) fails {rep.failures[0].law}"
            )
    return verdict


@dataclass(frozen=True)
class OOReport:
    """Classification of a (lattice, base, relation) triple among the o-structures."""

    axioms: AxiomReport
    pseudocomplement_total: bool
    heyting: bool
    boolean: bool
    distributive: bool
    degenerate: bool

    @property
    def is_oo_lattice(self) -> bool:
        return self.pseudocomplement_total and self.axioms.ok

    @property
    def is_o_ha(self) -> bool:
        return self.is_oo_lattice and self.heyting

    @property
    def is_o_ba(self) -> bool:
        return self.is_o_ha and self.boolean

    @property
    def kind(self) -> str | None:
        if self.is_o_ba:
            return "o-Ba"
        if self.is_o_ha:
            return "o-Ha"
        if self.is_oo_lattice:
            return "oo-lattice"
        return None

    def as_report(self) -> AxiomReport:
        extra = (
            Verdict.ok("pseudocomplement_total")
            if self.pseudocomplement_total
            else Verdict.fail("pseudocomplement_total")
        )
        notes = self.axioms.notes + (f"classification: {self.kind or 'none'}",)
        return AxiomReport("oo-structure", self.axioms.verdicts + (extra,), notes)


def oo_structure_check(L: FiniteLattice, base: BaseFamily, r) -> OOReport:
    """Check the oo-lattice axioms and upgrade to o-Ha / o-Ba where the lattice allows.

    On finite carriers every join exists, so splitting of existing joins is
    splitting of all joins.
    """
    axioms = check_overlap_axioms(L, base, r)
    total = pseudocomplement_table(L) is not None
    distributive = is_distributive(L)
    rep = OOReport(
        axioms=axioms,
        pseudocomplement_total=total,
        heyting=heyting_table(L, full_base(L)) is not None,
        boolean=is_boolean(L),
        distributive=distributive,
        degenerate=L.is_trivial,
    )
    if rep.is_oo_lattice and not distributive:
        raise InternalInconsistency("an oo-lattice turned out non-distributive")
    return rep


@dataclass(frozen=True)
class OOLattice:
    """A validated oo-structure; ``kind`` is one of oo-lattice, o-Ha, o-Ba."""

    lattice: FiniteLattice
    base: BaseFamily
    overlap: OverlapRelation
    kind: str = field(init=False)

    def __post_init__(self):
        rep = oo_structure_check(self.lattice, self.base, self.overlap)
        if rep.kind is None:
            bad = rep.axioms.failures
            raise NotOOLattice(
                bad[0].law if bad else "pseudocomplement not total",
                bad[0].witness if bad else None,
                rep.axioms,
            )
        object.__setattr__(self, "kind", rep.kind)
