"""The eleven end-to-end checks, each with its runtime bound.

``run_all(scale)`` returns one CriterionResult per check. A check passes when
its body raises nothing and finishes inside the bound. Budget errors are not
caught here; the CLI turns them into exit code 3.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import atoms, constructions, corpus, morphism, overlap, topology
from .errors import BudgetError
from .lattice import is_boolean, minimal_base, pseudocomplement_table, powerset_lattice
from .morphism import LatticeMap


class CriterionFailed(AssertionError):
    pass


def _require(cond, message):
    if not cond:
        raise CriterionFailed(message)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    bound: float
    detail: str

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.2f}s / {self.bound:g}s)"


SCALES = ("small", "default", "large")


def _ground_sizes(scale):
    return {"small": 2, "default": 4, "large": 5}[scale]


def _lattice_size(scale):
    return {"small": 4, "default": 6, "large": 8}[scale]


def c1_powerset_suite(scale):
    kmax = _ground_sizes(scale)
    for k in range(kmax + 1):
        A = overlap.powerset_oalgebra(k)
        ax = overlap.check_overlap_axioms(A.lattice, A.base, A.overlap)
        _require(ax.ok, f"P({k}) axioms: {[v.law for v in ax.failures]}")
        d = overlap.derived_properties_suite(A)
        _require(d.ok, f"P({k}) derived: {[v.law for v in d.failures]}")
    return f"P(0)..P({kmax}) pass 4 axioms and 6 properties"


def c2_classical_collapse(scale):
    Ls = corpus.enumerate_lattices(_lattice_size(scale))
    boolean = 0
    for L in Ls:
        found = overlap.find_all_overlaps(L, minimal_base(L))
        if is_boolean(L) or L.is_trivial:
            boolean += 1
            _require(len(found) == 1, f"{L.n}-element Boolean lattice has {len(found)} overlaps")
            _require(found[0] == overlap.canonical_overlap(L), "unique overlap is not canonical")
        else:
            _require(not found, f"non-Boolean lattice {L.names} admits an overlap")
    return f"{len(Ls)} lattices, {boolean} Boolean with a unique canonical overlap"


def c3_negative_density(scale):
    checked = 0
    for L in corpus.enumerate_lattices(_lattice_size(scale)):
        if pseudocomplement_table(L) is None:
            continue
        nd, inv, _ = overlap.negative_density_check(L)
        _require(nd == inv, f"negative density {nd} but involution {inv}")
        checked += 1
    return f"{checked} pseudocomplemented lattices agree"


def c4_morphisms(scale):
    A = overlap.powerset_oalgebra(2)
    passing, jp = set(), set()
    maps = list(morphism.all_maps(A.lattice, A.lattice))
    for f in maps:
        if morphism.three_way_equivalence(f, A, A):
            passing.add(f.table)
        if morphism.preserves_joins(f):
            jp.add(f.table)
    _require(len(maps) == 256, f"{len(maps)} maps enumerated")
    _require(passing == jp, "o-morphisms differ from join-preserving maps")
    _require(len(passing) == 16, f"{len(passing)} o-morphisms")
    return f"{len(maps)} maps, {len(passing)} o-morphisms = join-preserving"


def c5_relations(scale):
    top = {"small": 2, "default": 3, "large": 4}[scale]
    count = 0
    for x in range(top + 1):
        for y in range(top + 1):
            for code in range(1 << (x * y)):
                R = morphism.FiniteRelation.from_code(x, y, code)
                ops = morphism.relation_operators(R)
                _require(morphism.morphism_to_relation(ops.image) == R, f"round trip fails for {sorted(R.pairs)}")
                _require(morphism._adjunction_witness(ops.image, ops.restriction) is None, "R ⊣ R* fails")
                _require(morphism._adjunction_witness(ops.preimage, ops.co_restriction) is None, "R⁻ ⊣ R⁻* fails")
                im, pre = ops.image.array, ops.preimage.array
                PX, PY = ops.image.source, ops.image.target
                a = np.arange(PX.n)[:, None]
                b = np.arange(PY.n)[None, :]
                _require(np.array_equal((im[:, None] & b) != 0, (a & pre[None, :]) != 0), "R ≈ R⁻ fails")
                count += 1
    return f"{count} relations round-trip with both adjunctions"


def c6_atoms(scale):
    for k in range(_ground_sizes(scale) + 2):
        A = overlap.powerset_oalgebra(k)
        _require(atoms.atoms_of(A).members == tuple(1 << i for i in range(k)), f"At(P({k})) is not the singletons")
    algebras = corpus.oalgebra_corpus(_lattice_size(scale), _ground_sizes(scale))
    for name, A in algebras:
        _require(atoms.atom_char_equivalence(A), f"atom characterizations disagree on {name}")
        h, h_inv = atoms.powerset_iso(A)
    return f"{len(algebras)} o-algebras: characterizations agree, iso round-trips"


def c7_discrete_open(scale):
    pres = corpus.presentation_corpus(scale)
    verdicts = {}
    for name, P in pres.items():
        verdicts[name] = topology.discrete_iff_open_theorem(P)
    shown = ", ".join(f"{k}={'T' if v else 'F'}" for k, v in verdicts.items())
    return f"{len(pres)} presentations agree ({shown})"


def c8_openness(scale):
    pres = corpus.presentation_corpus(scale)
    total = 0
    for name, P in pres.items():
        ok, witness, n = topology.openness_exhaustive(P)
        _require(ok, f"openness fails for {name} at {witness}")
        total += n
    return f"{len(pres)} products, {total} sets W checked"


def c9_free(scale):
    cases = 0
    for x in range(3):
        for k in range(3):
            Q = overlap.powerset_oalgebra(k)
            for f in np.ndindex(*([Q.lattice.n] * x)):
                r = constructions.free_oalgebra(x, Q, f)
                _require(r.unique and r.commutes, f"free property fails for X={x}, Q=P({k}), f={f}")
                cases += 1
    return f"{cases} maps f, each with a unique mediating o-morphism"


def c10_dm(scale):
    D = constructions.dm_completion(np.eye(2, dtype=bool))
    _require(D.lattice.n == 4 and is_boolean(D.lattice), "DM of the 2-antichain is not the 4-element Boolean lattice")
    booleans = [L for L in corpus.enumerate_lattices(_lattice_size(scale)) if is_boolean(L)]
    booleans += [L for n, L in corpus.named_lattices().items() if is_boolean(L)]
    for L in booleans:
        _require(constructions.dm_is_iso(constructions.dm_completion(L.leq)), f"DM(B) ≇ B for {L.names}")
    swap = constructions.dm_extend([1, 0], np.eye(2, dtype=bool), np.eye(2, dtype=bool))
    _require(swap.extension.table == (0, 2, 1, 3), "antichain swap does not extend to the Boolean automorphism")
    P2 = powerset_lattice(2)[0]
    extended = 0
    for f in morphism.all_maps(P2, P2):
        if morphism.preserves_joins(f):
            ext = constructions.dm_extend(f)
            _require(ext.red_bridge is True, f"(RED) bridge fails for {f.table}")
            extended += 1
    return f"{len(booleans)} Boolean lattices fixed by DM, {extended} maps extended"


def c11_subfamilies(scale):
    for k in range(4):
        for rep in (constructions.finite_cofinite(k), constructions.generated_oo_sublattice(k)):
            _require(rep.closure.ok, f"closure fails for X={k}")
            _require(rep.structure.is_o_ha and rep.structure.is_oo_lattice, f"o-Ha suite fails for X={k}")
            _require(rep.classical_collapse and len(rep.members) == 1 << k, f"family is not P({k})")
    return "F(X) and the generated family equal P(X) for |X| ≤ 3, collapse flagged"


CRITERIA: tuple[tuple[int, str, float, Callable[[str], str]], ...] = (
    (1, "powerset o-algebra suite", 5.0, c1_powerset_suite),
    (2, "classical collapse and uniqueness", 60.0, c2_classical_collapse),
    (3, "negative density biconditional", 5.0, c3_negative_density),
    (4, "morphism characterization", 5.0, c4_morphisms),
    (5, "relation bijection", 30.0, c5_relations),
    (6, "atoms", 10.0, c6_atoms),
    (7, "discrete iff open diagonal", 60.0, c7_discrete_open),
    (8, "openness condition", 30.0, c8_openness),
    (9, "free universal property", 10.0, c9_free),
    (10, "Dedekind-MacNeille completion", 10.0, c10_dm),
    (11, "finite-cofinite and generated sublattice", 5.0, c11_subfamilies),
)


def run_criterion(number: int, scale: str = "default") -> CriterionResult:
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    num, name, bound, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        detail = fn(scale)
        passed = True
    except CriterionFailed as exc:
        detail, passed = str(exc), False
    except BudgetError:
        raise
    except Exception as exc:  # any other exception is a failed check, reported with its type
        detail, passed = f"{type(exc).__name__}: {exc}", False
    elapsed = time.perf_counter() - t0
    if passed and elapsed >= bound:
        passed = False
        detail += " (over time bound)"
    return CriterionResult(num, name, passed, elapsed, bound, detail)


def run_all(scale: str = "default") -> list[CriterionResult]:
    return [run_criterion(n, scale) for n in range(1, len(CRITERIA) + 1)]
