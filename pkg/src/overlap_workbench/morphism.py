"""Maps between overlap structures.

A map f: A → B of o-algebras is an o-morphism when f has a right adjoint f*,
a symmetric partner f⁻ (f(p) ⊲ q ⇔ p ⊲ f⁻(q)) exists, and f⁻ has a right
adjoint f⁻*. Three independent tests for this are provided (the adjoint
quadruple, symmetrizability, and the intrinsic condition ``red_condition``)
and ``three_way_equivalence`` insists they agree.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    CarrierMismatch,
    InconsistentCharacterizations,
    NoRightAdjoint,
    NotMonotone,
    NotOMorphism,
    SearchBudgetExceeded,
    ShapeMismatch,
)
from .lattice import BaseFamily, FiniteLattice, bits, minimal_base, powerset_lattice
from .overlap import OAlgebra, powerset_oalgebra
from .report import AxiomReport, Verdict

MAP_ENUMERATION_BUDGET = 2**20


@dataclass(frozen=True, eq=False)
class LatticeMap:
    """A total map between the carriers of two finite lattices, as an index table."""

    source: FiniteLattice
    target: FiniteLattice
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        if len(table) != self.source.n:
            raise ShapeMismatch(f"map table has {len(table)} entries, source has {self.source.n}")
        for v in table:
            if not 0 <= v < self.target.n:
                raise ShapeMismatch(f"image {v} out of range for target of size {self.target.n}")
        object.__setattr__(self, "table", table)

    def __call__(self, p: int) -> int:
        return self.table[p]

    def __eq__(self, other):
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return (
            self.table == other.table
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"LatticeMap({list(self.table)})"

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.intp)

    def then(self, g: "LatticeMap") -> "LatticeMap":
        """``g ∘ self``."""
        return compose(g, self)


def compose(outer: LatticeMap, inner: LatticeMap) -> LatticeMap:
    """``outer ∘ inner`` (inner applied first)."""
    if inner.target != outer.source:
        raise ShapeMismatch("maps are not composable")
    return LatticeMap(inner.source, outer.target, tuple(outer.table[v] for v in inner.table))


def identity_map(L: FiniteLattice) -> LatticeMap:
    return LatticeMap(L, L, tuple(L.elements))


def constant_map(source: FiniteLattice, target: FiniteLattice, value: int) -> LatticeMap:
    return LatticeMap(source, target, (value,) * source.n)


def monotonicity_witness(f: LatticeMap):
    t = f.array
    bad = f.source.leq & ~f.target.leq[t[:, None], t[None, :]]
    if bad.any():
        return tuple(map(int, np.argwhere(bad)[0]))
    return None


def is_monotone(f: LatticeMap) -> bool:
    return monotonicity_witness(f) is None


def join_preservation_witness(f: LatticeMap) -> tuple[int, ...] | None:
    """A subset U of the source (as indices) with f(⋁U) ≠ ⋁f(U), or None."""
    S, T = f.source, f.target
    fam = S.join_family
    t = f.array
    lhs = t[fam.joins]
    if fam.exhaustive:
        from .lattice import subset_fold

        rhs = subset_fold(S.n, T.join_table, f.table, T.bottom)
    else:
        rhs = np.array([T.join_of(t[np.flatnonzero(row)]) for row in fam.members], dtype=np.intp)
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        return tuple(int(i) for i in np.flatnonzero(fam.members[bad[0]]))
    return None


def preserves_joins(f: LatticeMap) -> bool:
    """f(⋁U) = ⋁f(U) for every subset U of the source, the empty one included."""
    return join_preservation_witness(f) is None


def preserves_finite_meets(f: LatticeMap) -> bool:
    S, T = f.source, f.target
    t = f.array
    if t[S.top] != T.top:
        return False
    return bool(np.array_equal(t[S.meet_table], T.meet_table[t[:, None], t[None, :]]))


def _adjunction_witness(f: LatticeMap, g: LatticeMap):
    """First (p, q) breaking f(p) ≤ q ⇔ p ≤ g(q), or None."""
    lhs = f.target.leq[f.array, :]
    rhs = f.source.leq[:, g.array]
    bad = lhs != rhs
    if bad.any():
        return tuple(map(int, np.argwhere(bad)[0]))
    return None


def right_adjoint(f: LatticeMap, base_src: BaseFamily | None = None) -> LatticeMap:
    """f*(q) = ⋁{a in base | f(a) ≤ q}, returned only if f ⊣ f* verifies."""
    w = monotonicity_witness(f)
    if w is not None:
        raise NotMonotone("map is not monotone", {"p": w[0], "q": w[1]})
    S, T = f.source, f.target
    base = base_src or minimal_base(S)
    members = list(base.members)
    img = f.array[members]
    table = [S.join_of(a for a, fa in zip(members, img) if T.leq[fa, q]) for q in T.elements]
    star = LatticeMap(T, S, table)
    w = _adjunction_witness(f, star)
    if w is not None:
        raise NoRightAdjoint("f does not preserve joins", {"p": w[0], "q": w[1]})
    return star


def _forall_table(f: LatticeMap, A: OAlgebra, B: OAlgebra) -> np.ndarray:
    """H[a, q] = (∀x in base)(x ⊲ a ⇒ f(x) ⊲ q), for every element a of A."""
    S = list(A.base.members)
    if not S:
        return np.ones((A.lattice.n, B.lattice.n), dtype=bool)
    ovA = A.overlap.matrix[S].astype(np.int64)  # [x, a]
    notB = (~B.overlap.matrix[f.array[S]]).astype(np.int64)  # [x, q]
    return (ovA.T @ notB) == 0


def _check_shapes(f: LatticeMap, A, B):
    if f.source != A.lattice or f.target != B.lattice:
        raise CarrierMismatch("map does not run between the given structures")


def symmetric_candidate(f: LatticeMap, A: OAlgebra, B: OAlgebra) -> LatticeMap:
    """g(q) = ⋁{a in base | (∀x in base)(x ⊲ a ⇒ f(x) ⊲ q)}; always defined."""
    _check_shapes(f, A, B)
    H = _forall_table(f, A, B)
    S = list(A.base.members)
    table = [A.lattice.join_of(a for a in S if H[a, q]) for q in B.lattice.elements]
    return LatticeMap(B.lattice, A.lattice, table)


def symmetry_witness(f: LatticeMap, g: LatticeMap, A, B):
    lhs = B.overlap.matrix[f.array, :]
    rhs = A.overlap.matrix[:, g.array]
    bad = lhs != rhs
    if bad.any():
        return tuple(map(int, np.argwhere(bad)[0]))
    return None


def is_symmetric_pair(f: LatticeMap, g: LatticeMap, A, B) -> bool:
    """f(p) ⊲ q ⇔ p ⊲ g(q) for all p, q."""
    _check_shapes(f, A, B)
    if g.source != B.lattice or g.target != A.lattice:
        raise ShapeMismatch("g must run backwards between the structures")
    return symmetry_witness(f, g, A, B) is None


@dataclass(frozen=True)
class AdjointQuadruple:
    """f, its symmetric f⁻, and the right adjoints f* and f⁻*."""

    f: LatticeMap
    f_minus: LatticeMap
    f_star: LatticeMap
    f_minus_star: LatticeMap
    source: OAlgebra
    target: OAlgebra

    def verify(self) -> bool:
        return (
            _adjunction_witness(self.f, self.f_star) is None
            and _adjunction_witness(self.f_minus, self.f_minus_star) is None
            and symmetry_witness(self.f, self.f_minus, self.source, self.target) is None
        )


def check_o_morphism(f: LatticeMap, A: OAlgebra, B: OAlgebra) -> AdjointQuadruple:
    """Build f⁻, f*, f⁻* and verify the three o-morphism conditions.

    Conditions are checked in the order f ⊣ f*, f ≈ f⁻, f⁻ ⊣ f⁻*; the first
    failure raises NotOMorphism naming it.
    """
    _check_shapes(f, A, B)
    try:
        f_star = right_adjoint(f, A.base)
    except (NotMonotone, NoRightAdjoint) as exc:
        raise NotOMorphism(f"f has no right adjoint: {exc}", exc.witness, "f ⊣ f*") from exc
    g = symmetric_candidate(f, A, B)
    w = symmetry_witness(f, g, A, B)
    if w is not None:
        raise NotOMorphism(
            "f is not symmetrizable", {"p": w[0], "q": w[1]}, "f ≈ f⁻"
        )
    try:
        g_star = right_adjoint(g, B.base)
    except (NotMonotone, NoRightAdjoint) as exc:
        raise NotOMorphism(f"f⁻ has no right adjoint: {exc}", exc.witness, "f⁻ ⊣ f⁻*") from exc
    return AdjointQuadruple(f, g, f_star, g_star, A, B)


def is_o_morphism(f: LatticeMap, A: OAlgebra, B: OAlgebra) -> bool:
    try:
        check_o_morphism(f, A, B)
    except NotOMorphism:
        return False
    return True


def _red_sides(f: LatticeMap, A, B):
    H = _forall_table(f, A, B)
    S = list(A.base.members)
    lhs = B.overlap.matrix[f.array, :]
    if S:
        rhs = (A.overlap.matrix[:, S].astype(np.int64) @ H[S].astype(np.int64)) > 0
    else:
        rhs = np.zeros_like(lhs)
    return lhs, rhs


def red_condition(f: LatticeMap, A, B) -> bool:
    """f(p) ⊲ q ⇔ (∃a in base)(p ⊲ a ∧ (∀x in base)(x ⊲ a ⇒ f(x) ⊲ q))."""
    _check_shapes(f, A, B)
    lhs, rhs = _red_sides(f, A, B)
    return bool(np.array_equal(lhs, rhs))


def three_way_equivalence(f: LatticeMap, A: OAlgebra, B: OAlgebra) -> bool:
    """Shared verdict of the three o-morphism characterizations.

    Raises InconsistentCharacterizations if they disagree, or if a
    symmetrizable map fails to preserve joins.
    """
    by_quadruple = is_o_morphism(f, A, B)
    by_symmetry = is_symmetric_pair(f, symmetric_candidate(f, A, B), A, B)
    by_red = red_condition(f, A, B)
    if not by_quadruple == by_symmetry == by_red:
        raise InconsistentCharacterizations(
            f"quadruple={by_quadruple} symmetrizable={by_symmetry} red={by_red} for {f.table}"
        )
    if by_symmetry and not preserves_joins(f):
        raise InconsistentCharacterizations(f"symmetrizable map {f.table} does not preserve joins")
    return by_quadruple


@dataclass(frozen=True)
class EquivalenceReport:
    mode: str  # "exhaustive" or "sampled"
    maps_checked: int
    o_morphisms: int
    join_preserving: int
    mismatches: tuple[tuple[int, ...], ...]

    @property
    def agree(self) -> bool:
        return not self.mismatches


def _join_extensions(A: OAlgebra, B: OAlgebra, choices):
    """Maps sending each base element of A to a chosen image, extended by joins."""
    S = list(A.base.members)
    L = A.lattice
    for imgs in choices:
        val = dict(zip(S, imgs))
        yield LatticeMap(
            L, B.lattice, [B.lattice.join_of(val[a] for a in A.base.below(p)) for p in L.elements]
        )


def classical_equivalence_suite(
    A: OAlgebra, B: OAlgebra, budget: int = MAP_ENUMERATION_BUDGET, seed: int | None = None,
    samples: int = 2000,
) -> EquivalenceReport:
    """Compare the set of o-morphisms A → B with the set of join-preserving maps.

    All ``|B|^|A|`` tables are enumerated when that is within budget. Otherwise
    the join-preserving maps are generated from base images (sampled if even
    that is too many), plus a seeded sample of arbitrary tables, and both
    inclusions are checked on those.
    """
    nA, nB = A.lattice.n, B.lattice.n
    mismatches = []
    n_checked = n_o = n_jp = 0

    def visit(f):
        nonlocal n_checked, n_o, n_jp
        o = is_o_morphism(f, A, B)
        jp = preserves_joins(f)
        n_checked += 1
        n_o += o
        n_jp += jp
        if o != jp and len(mismatches) < 10:
            mismatches.append(f.table)

    if nB**nA <= budget:
        for table in itertools.product(range(nB), repeat=nA):
            visit(LatticeMap(A.lattice, B.lattice, table))
        return EquivalenceReport("exhaustive", n_checked, n_o, n_jp, tuple(mismatches))

    rng = random.Random(seed)
    k = len(A.base)
    if nB**k <= budget:
        choices = itertools.product(range(nB), repeat=k)
    else:
        choices = (tuple(rng.randrange(nB) for _ in range(k)) for _ in range(samples))
    for f in _join_extensions(A, B, choices):
        visit(f)
    for _ in range(samples):
        visit(LatticeMap(A.lattice, B.lattice, [rng.randrange(nB) for _ in range(nA)]))
    return EquivalenceReport("sampled", n_checked, n_o, n_jp, tuple(mismatches))


@dataclass(frozen=True)
class FiniteRelation:
    """A relation between {0..x_size-1} and {0..y_size-1}."""

    x_size: int
    y_size: int
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(x), int(y)) for x, y in self.pairs)
        for x, y in pairs:
            if not (0 <= x < self.x_size and 0 <= y < self.y_size):
                raise ShapeMismatch(f"pair ({x}, {y}) out of range")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_code(cls, x_size: int, y_size: int, code: int) -> "FiniteRelation":
        """Relation whose pair (x, y) is present iff bit x*y_size + y of code is set."""
        return cls(
            x_size, y_size,
            frozenset((x, y) for x in range(x_size) for y in range(y_size) if code >> (x * y_size + y) & 1),
        )

    def successors(self, x: int) -> int:
        return sum(1 << y for (a, y) in self.pairs if a == x)

    def predecessors(self, y: int) -> int:
        return sum(1 << x for (x, b) in self.pairs if b == y)

    def inverse(self) -> "FiniteRelation":
        return FiniteRelation(self.y_size, self.x_size, frozenset((y, x) for x, y in self.pairs))

    def then(self, other: "FiniteRelation") -> "FiniteRelation":
        """Relational composite: x (self;other) z iff x self y and y other z for some y."""
        if self.y_size != other.x_size:
            raise ShapeMismatch("relations are not composable")
        return FiniteRelation(
            self.x_size, other.y_size,
            frozenset((x, z) for x, y in self.pairs for y2, z in other.pairs if y == y2),
        )


class RelationOperators(NamedTuple):
    image: LatticeMap  # R
    preimage: LatticeMap  # R⁻
    restriction: LatticeMap  # R*
    co_restriction: LatticeMap  # R⁻*


def relation_operators(R: FiniteRelation) -> RelationOperators:
    """Existential images and their universal duals, as maps of powerset lattices."""
    PX, _ = powerset_lattice(R.x_size)
    PY, _ = powerset_lattice(R.y_size)
    succ = [R.successors(x) for x in range(R.x_size)]
    pred = [R.predecessors(y) for y in range(R.y_size)]

    def image(A):
        out = 0
        for x in bits(A):
            out |= succ[x]
        return out

    def preimage(B):
        return sum(1 << x for x in range(R.x_size) if succ[x] & B)

    def restriction(B):
        return sum(1 << x for x in range(R.x_size) if succ[x] & ~B == 0)

    def co_restriction(A):
        return sum(1 << y for y in range(R.y_size) if pred[y] & ~A == 0)

    return RelationOperators(
        LatticeMap(PX, PY, [image(A) for A in PX.elements]),
        LatticeMap(PY, PX, [preimage(B) for B in PY.elements]),
        LatticeMap(PY, PX, [restriction(B) for B in PY.elements]),
        LatticeMap(PX, PY, [co_restriction(A) for A in PX.elements]),
    )


def morphism_to_relation(f: LatticeMap) -> FiniteRelation:
    """x R y iff y ∈ f({x}); f must be an o-morphism of powerset algebras."""
    kx, ky = f.source.ground_size, f.target.ground_size
    if kx is None or ky is None:
        raise ShapeMismatch("map must run between powerset lattices")
    check_o_morphism(f, powerset_oalgebra(kx), powerset_oalgebra(ky))
    return FiniteRelation(
        kx, ky, frozenset((x, y) for x in range(kx) for y in bits(f(1 << x)))
    )


def _map_equality(name, got: LatticeMap, want: LatticeMap) -> Verdict:
    for p, (a, b) in enumerate(zip(got.table, want.table)):
        if a != b:
            return Verdict.fail(name, p=(got.source, p))
    return Verdict.ok(name)


def composition_laws(f: AdjointQuadruple, g: AdjointQuadruple) -> AxiomReport:
    """Laws for the composite f ∘ g (g applied first).

    (f∘g)⁻ = g⁻∘f⁻, (f∘g)* = g*∘f*, (f∘g)⁻* = f⁻*∘g⁻*, and f∘g is itself an
    o-morphism.
    """
    if g.f.target != f.f.source:
        raise ShapeMismatch("quadruples are not composable")
    h = compose(f.f, g.f)
    try:
        q = check_o_morphism(h, g.source, f.target)
    except NotOMorphism as exc:
        return AxiomReport(
            "composition laws", (Verdict.fail("composite_is_o_morphism", condition=exc.condition),)
        )
    verdicts = (
        Verdict.ok("composite_is_o_morphism"),
        _map_equality("minus_law", q.f_minus, compose(g.f_minus, f.f_minus)),
        _map_equality("star_law", q.f_star, compose(g.f_star, f.f_star)),
        _map_equality("minus_star_law", q.f_minus_star, compose(f.f_minus_star, g.f_minus_star)),
    )
    return AxiomReport("composition laws", verdicts)


def oo_morphism_check(f: LatticeMap, S, T) -> bool:
    """Morphism test for oo-structures: the intrinsic condition with the base of S.

    Also asserts that monotonicity plus the forward half of the condition
    gives the same verdict, and that a passing map preserves every join.
    """
    _check_shapes(f, S, T)
    lhs, rhs = _red_sides(f, S, T)
    verdict = bool(np.array_equal(lhs, rhs))
    via_forward = is_monotone(f) and not (lhs & ~rhs).any()
    if verdict != via_forward:
        raise InconsistentCharacterizations(
            f"condition verdict {verdict} but monotone+forward verdict {via_forward}"
        )
    if verdict and not preserves_joins(f):
        raise InconsistentCharacterizations("oo-morphism fails to preserve an existing join")
    return verdict


def all_maps(source: FiniteLattice, target: FiniteLattice, budget: int = MAP_ENUMERATION_BUDGET):
    """Every total map source → target; raises SearchBudgetExceeded beyond budget."""
    count = target.n**source.n
    if count > budget:
        raise SearchBudgetExceeded(f"{count} maps exceed budget {budget}")
    for table in itertools.product(range(target.n), repeat=source.n):
        yield LatticeMap(source, target, table)


def relation_image_maps(x_size: int, y_size: int) -> Sequence[LatticeMap]:
    """Existential images of every relation between the two ground sets."""
    return [
        relation_operators(FiniteRelation.from_code(x_size, y_size, c)).image
        for c in range(1 << (x_size * y_size))
    ]
