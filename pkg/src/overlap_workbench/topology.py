"""Finite inductively generated formal topologies.

A presentation is a finite meet-semilattice base with top plus cover axioms
``a ◁ U``. The generated cover is the least relation closed under

* ``a ◁ U`` whenever ``a ≤ b`` for some ``b ∈ U``, and
* ``a ◁ U`` whenever some axiom ``a' ◁ W`` has ``a ≤ a'`` and every
  ``w ∧ a`` (w ∈ W) is covered by U.

``saturate`` computes ``Sat(U) = {a | a ◁ U}`` as a least fixpoint over
bitmasks; the frame is the family of saturated sets, with intersection as
meet and saturated union as join. A base element is positive iff it is not
covered by the empty set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    FrameBudgetExceeded,
    InternalInconsistency,
    NoLeftAdjoint,
    NotFrameMap,
    PositivityLawViolation,
    ShapeMismatch,
    TheoremViolation,
    ValidationError,
)
from .lattice import BaseFamily, FiniteLattice, _bound_table, bits, lattice_from_tables, mask_of, set_label
from .morphism import LatticeMap, _adjunction_witness
from .overlap import check_positivity_laws

FRAME_BUDGET = 4096
BASE_LIMIT = 256


@dataclass(frozen=True, eq=False)
class CoverPresentation:
    meet: np.ndarray
    top: int | None
    axioms: tuple[tuple[int, int], ...]  # (a, bitmask of U)
    names: tuple[str, ...] = ()
    factors: tuple["CoverPresentation", "CoverPresentation"] | None = field(default=None, repr=False)

    def __post_init__(self):
        m = np.asarray(self.meet, dtype=np.intp)
        if m.size == 0:
            m = m.reshape(0, 0)
        k = m.shape[0]
        if m.ndim != 2 or m.shape != (k, k):
            raise ValidationError("base meet table must be square")
        if k > BASE_LIMIT:
            raise FrameBudgetExceeded(f"base of {k} elements exceeds limit {BASE_LIMIT}")
        if k and ((m < 0) | (m >= k)).any():
            raise ValidationError("base meet table has out-of-range entries")
        idx = np.arange(k)
        if k:
            if not np.array_equal(m, m.T):
                raise ValidationError("base meet is not commutative")
            if not np.array_equal(m[idx, idx], idx):
                raise ValidationError("base meet is not idempotent")
            if not np.array_equal(m[m[:, :, None], idx[None, None, :]], m[idx[:, None, None], m[None, :, :]]):
                raise ValidationError("base meet is not associative")
            if self.top is None or not 0 <= self.top < k or not np.array_equal(m[self.top], idx):
                raise ValidationError("top must be a unit for the base meet")
        elif self.top is not None:
            raise ValidationError("empty base has no top")
        axioms = []
        for a, U in self.axioms:
            U = U if isinstance(U, int) else mask_of(U)
            if not 0 <= a < k or U >> k:
                raise ValidationError(f"axiom ({a}, {bits(U)}) refers outside the base")
            axioms.append((int(a), int(U)))
        m.setflags(write=False)
        object.__setattr__(self, "meet", m)
        object.__setattr__(self, "axioms", tuple(axioms))
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(k)))
        elif len(self.names) != k:
            raise ValidationError("names must match the base size")

    @property
    def k(self) -> int:
        return self.meet.shape[0]

    @cached_property
    def leq(self) -> np.ndarray:
        """Meet-semilattice order on the base: a ≤ b iff a ∧ b = a."""
        return self.meet == np.arange(self.k)[:, None]

    @cached_property
    def down(self) -> tuple[int, ...]:
        return tuple(mask_of(np.flatnonzero(self.leq[:, a])) for a in range(self.k))

    @cached_property
    def _rules(self) -> tuple[tuple[int, int, int], ...]:
        # (bit of a, mask that must be covered, down-set of a) per localized axiom
        needs: dict[int, list[int]] = {}
        for a_top, W in self.axioms:
            ws = bits(W)
            for a in np.flatnonzero(self.leq[:, a_top]):
                a = int(a)
                need = mask_of(int(self.meet[w, a]) for w in ws)
                if need >> a & 1:
                    continue
                lst = needs.setdefault(a, [])
                if any(old & ~need == 0 for old in lst):
                    continue
                lst[:] = [old for old in lst if need & ~old != 0] + [need]
        return tuple((1 << a, need, self.down[a]) for a, lst in sorted(needs.items()) for need in lst)

    def _downclose(self, v: int) -> int:
        out = v
        for a in bits(v):
            out |= self.down[a]
        return out

    def saturate(self, U, closed_part: int = 0) -> int:
        """Sat(U) as a bitmask. ``closed_part`` may name an already saturated subset of U."""
        U = U if isinstance(U, int) else mask_of(U)
        v = closed_part | self._downclose(U & ~closed_part)
        rules = self._rules
        changed = True
        while changed:
            changed = False
            for bit, need, dn in rules:
                if not v & bit and not need & ~v:
                    v |= dn
                    changed = True
        return v

    def label(self, mask: int) -> str:
        return set_label(mask, self.names)


def presentation(base_meet, top, axioms=(), names=()) -> CoverPresentation:
    return CoverPresentation(np.asarray(base_meet), top, tuple((a, mask_of(U)) for a, U in axioms), tuple(names))


def saturate(P: CoverPresentation, U) -> int:
    """Least saturated superset of U (bitmask in, bitmask out)."""
    return P.saturate(U)


@dataclass(frozen=True, eq=False)
class FTFrame:
    presentation: CoverPresentation
    sets: tuple[int, ...]
    lattice: FiniteLattice
    base_elements: tuple[int, ...]  # frame index of Sat({a}) per base element
    pos: tuple[bool, ...]  # positivity of base elements
    base: BaseFamily
    order_mismatches: tuple[tuple[int, int], ...]

    @cached_property
    def index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.sets)}

    @property
    def n(self) -> int:
        return len(self.sets)

    def element_of(self, U) -> int:
        return self.index[self.presentation.saturate(U)]

    def frame_pos(self, i: int) -> bool:
        """A frame element is positive iff it contains a positive base element."""
        return any(self.pos[a] for a in bits(self.sets[i]))

    def base_le(self, a: int, b: int) -> bool:
        return bool(self.sets[self.base_elements[b]] >> a & 1)


def _enumerate_saturated(P: CoverPresentation, budget: int) -> list[int]:
    start = P.saturate(0)
    seen = {start}
    queue = [start]
    for C in queue:
        for a in range(P.k):
            if C >> a & 1:
                continue
            D = P.saturate(C | 1 << a, closed_part=C)
            if D not in seen:
                seen.add(D)
                queue.append(D)
                if len(seen) > budget:
                    raise FrameBudgetExceeded(f"more than {budget} saturated sets")
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


@lru_cache(maxsize=64)
def build_frame(P: CoverPresentation, budget: int = FRAME_BUDGET) -> FTFrame:
    """Enumerate the saturated sets of P and validate them as a frame with positivity."""
    sets = _enumerate_saturated(P, budget)
    n, k = len(sets), P.k
    S = np.array([[(m >> i) & 1 for i in range(k)] for m in sets], dtype=np.int64).reshape(n, k)
    leq = (S @ (1 - S).T) == 0
    index = {m: i for i, m in enumerate(sets)}
    meet = np.empty((n, n), dtype=np.intp)
    for i, mi in enumerate(sets):
        for j in range(i, n):
            w = index.get(mi & sets[j])
            if w is None:
                raise InternalInconsistency("intersection of saturated sets is not saturated")
            meet[i, j] = meet[j, i] = w
    join = _bound_table(leq.T, "join")
    names = [P.label(m) for m in sets]
    L = lattice_from_tables(leq, meet, join, names)

    base_elements = tuple(index[P.saturate(1 << a)] for a in range(k))
    bottom_set = sets[0]
    pos = tuple(not (bottom_set >> a & 1) for a in range(k))
    base = BaseFamily(L, tuple(set(base_elements)))
    mismatches = tuple(
        (a, b)
        for a in range(k)
        for b in range(k)
        if (sets[base_elements[b]] >> a & 1) and not P.leq[a, b]
    )
    F = FTFrame(P, tuple(sets), L, base_elements, pos, base, mismatches)

    from .lattice import distributivity_witness

    w = distributivity_witness(L)
    if w is not None:
        raise InternalInconsistency(f"saturated sets do not form a distributive lattice at {w}")
    rep = check_positivity_laws(L, base, F.frame_pos)
    if not rep.ok:
        v = rep.failures[0]
        raise PositivityLawViolation(f"positivity {v.law} fails", v.witness)
    return F


def positivity(P: CoverPresentation, verify: bool = True) -> tuple[bool, ...]:
    """Pos(a) iff a is not covered by ∅; the laws are verified on the built frame."""
    if verify:
        return build_frame(P).pos
    z = P.saturate(0)
    return tuple(not (z >> a & 1) for a in range(P.k))


def product(P: CoverPresentation, Q: CoverPresentation) -> CoverPresentation:
    """Product presentation on the base P × Q with lifted axioms.

    Pair (a, b) has index ``a * Q.k + b``. After construction the product
    positivity formula Pos(a, b) ⇔ ∃(x, y) ≤ (a, b) with Pos(x) and Pos(y) is
    checked against the generated cover.
    """
    kp, kq = P.k, Q.k
    if kp * kq > BASE_LIMIT:
        raise FrameBudgetExceeded(f"product base of {kp * kq} elements exceeds limit {BASE_LIMIT}")
    pair = lambda a, b: a * kq + b
    meet = np.empty((kp * kq, kp * kq), dtype=np.intp)
    for a in range(kp):
        for b in range(kq):
            for c in range(kp):
                for d in range(kq):
                    meet[pair(a, b), pair(c, d)] = pair(int(P.meet[a, c]), int(Q.meet[b, d]))
    axioms = []
    for a, U in P.axioms:
        for b in range(kq):
            axioms.append((pair(a, b), mask_of(pair(u, b) for u in bits(U))))
    for b, V in Q.axioms:
        for a in range(kp):
            axioms.append((pair(a, b), mask_of(pair(a, v) for v in bits(V))))
    top = None if kp * kq == 0 else pair(P.top, Q.top)
    names = tuple(f"({x},{y})" for x in P.names for y in Q.names)
    R = CoverPresentation(meet, top, tuple(axioms), names, factors=(P, Q))

    pp, pq = positivity(P, verify=False), positivity(Q, verify=False)
    pr = positivity(R, verify=False)
    for a in range(kp):
        for b in range(kq):
            below = R.saturate(1 << pair(a, b))
            formula = any(
                below >> pair(x, y) & 1 and pp[x] and pq[y] for x in range(kp) for y in range(kq)
            )
            if formula != pr[pair(a, b)]:
                raise InternalInconsistency(f"product positivity formula fails at ({a},{b})")
    return R


@lru_cache(maxsize=64)
def square(P: CoverPresentation) -> CoverPresentation:
    return product(P, P)


def _projections(P: CoverPresentation, W: int) -> tuple[int, int]:
    k = P.k
    first = second = 0
    for i in bits(W):
        first |= 1 << (i // k)
        second |= 1 << (i % k)
    return first, second


def openness_condition(P: CoverPresentation, a: int, b: int, W) -> bool:
    """(a, b) ≤ ⋁W in P × P implies a ≤ ⋁π₁W and b ≤ ⋁π₂W in P."""
    pos = positivity(P, verify=False)
    if not (pos[a] and pos[b]):
        raise ValueError("openness condition is stated for positive base elements")
    Q = square(P)
    W = W if isinstance(W, int) else mask_of(W)
    if not Q.saturate(W) >> (a * P.k + b) & 1:
        return True
    first, second = _projections(P, W)
    return bool(P.saturate(first) >> a & 1) and bool(P.saturate(second) >> b & 1)


def openness_exhaustive(P: CoverPresentation):
    """Check the openness condition for all positive (a, b) and all W.

    Non-positive members of W change neither ⋁W nor the projections' joins
    in a way that could rescue a failure, so W ranges over subsets of the
    positive product base. Returns (holds, witness, number of W checked).
    """
    Q = square(P)
    k = P.k
    pos = positivity(P, verify=False)
    positive = [a for a in range(k) if pos[a]]
    qpos = positivity(Q, verify=False)
    gens = [i for i in range(Q.k) if qpos[i]]
    if len(gens) > 20:
        raise FrameBudgetExceeded(f"{len(gens)} positive product generators is too many")
    target_pairs = [(a, b, 1 << (a * k + b)) for a in positive for b in positive]
    sat_p: dict[int, int] = {}

    def sp(m):
        if m not in sat_p:
            sat_p[m] = P.saturate(m)
        return sat_p[m]

    count = 1 << len(gens)
    sat = [0] * count
    proj = [(0, 0)] * count
    sat[0] = Q.saturate(0)
    for W in range(count):
        if W:
            hi = W.bit_length() - 1
            rest = W ^ (1 << hi)
            g = gens[hi]
            sat[W] = Q.saturate(sat[rest] | 1 << g, closed_part=sat[rest])
            f0, s0 = proj[rest]
            proj[W] = (f0 | 1 << (g // k), s0 | 1 << (g % k))
        first, second = proj[W]
        for a, b, bit in target_pairs:
            if sat[W] & bit and not (sp(first) >> a & 1 and sp(second) >> b & 1):
                return False, {"a": a, "b": b, "W": tuple(gens[i] for i in bits(W))}, W + 1
    return True, None, count


def _check_frame_map(g: LatticeMap):
    S, T = g.source, g.target
    t = g.array
    if t[S.top] != T.top or t[S.bottom] != T.bottom:
        raise NotFrameMap("frame map must preserve top and bottom")
    bad = t[S.meet_table] != T.meet_table[t[:, None], t[None, :]]
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        raise NotFrameMap("binary meet not preserved", {"p": p, "q": q})
    bad = t[S.join_table] != T.join_table[t[:, None], t[None, :]]
    if bad.any():
        p, q = map(int, np.argwhere(bad)[0])
        raise NotFrameMap("binary join not preserved", {"p": p, "q": q})


def diagonal_pullback(P: CoverPresentation) -> LatticeMap:
    """Δ*: frame(P × P) → frame(P), sending (a, b) to a ∧ b and extended by joins."""
    F = build_frame(P)
    Q = square(P)
    G = build_frame(Q)
    k = P.k
    table = []
    for V in G.sets:
        img = 0
        for i in bits(V):
            img |= 1 << int(P.meet[i // k, i % k])
        table.append(F.index[P.saturate(img)])
    g = LatticeMap(G.lattice, F.lattice, table)
    _check_frame_map(g)
    return g


def left_adjoint_of(g: LatticeMap) -> LatticeMap:
    """∃(p) = ⋀{q | p ≤ g(q)}, returned only if ∃ ⊣ g verifies everywhere."""
    Q, P = g.source, g.target
    t = g.array
    table = [Q.meet_of(np.flatnonzero(P.leq[p, t])) for p in P.elements]
    ex = LatticeMap(P, Q, table)
    w = _adjunction_witness(ex, g)
    if w is not None:
        raise NoLeftAdjoint("map does not preserve meets", {"p": w[0], "q": w[1]})
    return ex


def frobenius_check(exists_map: LatticeMap, g: LatticeMap) -> bool:
    """∃(x ∧ g(y)) = ∃(x) ∧ y for all x, y."""
    P, Q = exists_map.source, exists_map.target
    if g.source != Q or g.target != P:
        raise ShapeMismatch("maps do not form an adjoint pair shape")
    e, t = exists_map.array, g.array
    lhs = e[P.meet_table[:, t]]
    rhs = Q.meet_table[e, :]
    return bool(np.array_equal(lhs, rhs))


@dataclass(frozen=True)
class DiagonalAnalysis:
    frame: FTFrame
    square_frame: FTFrame
    delta_star: LatticeMap
    exists: LatticeMap | None
    frobenius: bool | None

    @property
    def open(self) -> bool:
        return self.exists is not None and bool(self.frobenius)


def diagonal_analysis(P: CoverPresentation) -> DiagonalAnalysis:
    g = diagonal_pullback(P)
    try:
        ex = left_adjoint_of(g)
    except NoLeftAdjoint:
        return DiagonalAnalysis(build_frame(P), build_frame(square(P)), g, None, None)
    return DiagonalAnalysis(build_frame(P), build_frame(square(P)), g, ex, frobenius_check(ex, g))


def diagonal_open(P: CoverPresentation) -> bool:
    """Δ* has a left adjoint satisfying Frobenius reciprocity."""
    return diagonal_analysis(P).open


def explicit_diagonal_adjoint(P: CoverPresentation) -> LatticeMap:
    """p ↦ ⋁{(a, a) | a an atom, a ≤ p} in frame(P × P)."""
    from .atoms import ft_atoms

    F, G = build_frame(P), build_frame(square(P))
    atoms = ft_atoms(F).members
    k = P.k
    diag = {a: G.index[square(P).saturate(1 << (a * k + a))] for a in atoms}
    table = []
    for p, U in enumerate(F.sets):
        table.append(G.lattice.join_of(diag[a] for a in atoms if U >> a & 1))
    return LatticeMap(F.lattice, G.lattice, table)


def discrete_iff_open_theorem(P: CoverPresentation) -> bool:
    """is_discrete(frame(P)) and diagonal_open(P) must agree; returns the verdict.

    When both hold, the computed left adjoint is compared pointwise with the
    explicit atom formula.
    """
    from .atoms import is_discrete

    disc = is_discrete(build_frame(P))
    an = diagonal_analysis(P)
    if disc != an.open:
        raise TheoremViolation(f"discrete={disc} but diagonal open={an.open}")
    if disc and an.exists.table != explicit_diagonal_adjoint(P).table:
        raise TheoremViolation("left adjoint of Δ* differs from the atom formula")
    return disc


# -- standard presentations -------------------------------------------------


def discrete_presentation(n: int) -> CoverPresentation:
    """Points x0..x(n-1) plus ⊥ (covered by ∅) and ⊤ (covered by all points).

    Base indices: 0 = ⊥, 1..n = points, n+1 = ⊤.
    """
    k = n + 2
    top, bot = n + 1, 0
    meet = np.full((k, k), bot, dtype=np.intp)
    for i in range(k):
        meet[i, i] = i
        meet[top, i] = meet[i, top] = i
    names = ("⊥",) + tuple(f"x{i}" for i in range(n)) + ("⊤",)
    axioms = ((bot, 0), (top, mask_of(range(1, n + 1))))
    return CoverPresentation(meet, top, axioms, names)


def chain_presentation(n: int) -> CoverPresentation:
    """A chain base c0 < c1 < ... < c(n-1) = ⊤ with no axioms."""
    idx = np.arange(n)
    meet = np.minimum(idx[:, None], idx[None, :])
    names = tuple(f"c{i}" for i in range(n - 1)) + ("⊤",) if n else ()
    return CoverPresentation(meet, n - 1 if n else None, (), names)


def sierpinski_presentation() -> CoverPresentation:
    """Base {s, ⊤} with s < ⊤ and no axioms; the frame is a 3-chain."""
    return CoverPresentation(np.array([[0, 0], [0, 1]]), 1, (), ("s", "⊤"))


def point_presentation() -> CoverPresentation:
    """Single base element ⊤, no axioms: the one-point space."""
    return CoverPresentation(np.array([[0]]), 0, (), ("⊤",))


def trivial_presentation() -> CoverPresentation:
    """Single base element ⊤ covered by ∅: the one-element frame."""
    return CoverPresentation(np.array([[0]]), 0, ((0, 0),), ("⊤",))


def empty_presentation() -> CoverPresentation:
    return CoverPresentation(np.zeros((0, 0), dtype=np.intp), None, ())
