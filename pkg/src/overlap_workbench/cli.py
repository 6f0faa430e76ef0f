"""Command-line front end.

Exit codes: 0 every law passed, 1 some law failed, 2 the input could not be
parsed or is not a valid structure, 3 a search or size budget was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import acceptance
from .atoms import ft_atoms, is_discrete
from .constructions import dm_completion, dm_is_iso
from .errors import (
    BudgetError,
    InternalInconsistency,
    NotMonotone,
    NotOMorphism,
    ParseError,
    ValidationError,
    WorkbenchError,
)
from .io import LatticeDoc, load_document
from .lattice import bits, is_boolean, lattice_laws
from .morphism import (
    _adjunction_witness,
    _red_sides,
    check_o_morphism,
    join_preservation_witness,
    relation_operators,
    symmetric_candidate,
    symmetry_witness,
    three_way_equivalence,
)
from .overlap import (
    DEFAULT_SEARCH_BUDGET,
    OAlgebra,
    canonical_overlap,
    check_overlap_axioms,
    check_positivity_laws,
    derived_properties_suite,
    find_all_overlaps,
)
from .report import Verdict
from .topology import build_frame

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    verdicts: list[Verdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    sections: list[str] = field(default_factory=list)

    def add(self, *vs):
        self.verdicts.extend(vs)

    @property
    def failed(self) -> int:
        return sum(not v.passed for v in self.verdicts)


def _emit(report: Report, fmt: str, elapsed: float, exit_code: int, out):
    if fmt == "json-lines":
        for v in report.verdicts:
            out.write(json.dumps(v.as_dict(), ensure_ascii=False) + "\n")
        summary = {
            "command": report.command,
            "laws": len(report.verdicts),
            "failed": report.failed,
            "notes": report.notes,
            "elapsed": round(elapsed, 4),
            "exit": exit_code,
        }
        out.write(json.dumps({"summary": summary}, ensure_ascii=False) + "\n")
        return
    out.write(f"command: {report.command}\n")
    for s in report.sections:
        out.write(s + "\n")
    for v in report.verdicts:
        out.write("  " + v.describe() + "\n")
    for n in report.notes:
        out.write("  note: " + n + "\n")
    out.write(f"{len(report.verdicts)} laws, {report.failed} failed, {elapsed:.3f}s\n")


def _as_oalgebra(ld: LatticeDoc, role: str) -> OAlgebra:
    r = ld.overlap
    if r is None:
        if not is_boolean(ld.lattice) and not ld.lattice.is_trivial:
            raise ValidationError(f"{role} has no overlap and is not Boolean")
        r = canonical_overlap(ld.lattice)
    return OAlgebra(ld.lattice, ld.base, r)


def _check_lattice(ld: LatticeDoc, rep: Report):
    lr = lattice_laws(ld.lattice, ld.base)
    rep.add(*lr.verdicts)
    rep.notes.extend(lr.notes)


def _check_oalgebra(ld: LatticeDoc, rep: Report):
    L = ld.lattice
    ax = check_overlap_axioms(L, ld.base, ld.overlap)
    rep.add(*ax.verdicts)
    rep.notes.extend(ax.notes)
    if ax.ok:
        rep.add(*derived_properties_suite(OAlgebra(L, ld.base, ld.overlap)).verdicts)
    else:
        rep.notes.append("derived properties skipped: the overlap axioms fail")


def _check_map(payload, rep: Report):
    src, dst, f = payload
    A, B = _as_oalgebra(src, "source"), _as_oalgebra(dst, "target")
    S, T = A.lattice, B.lattice
    try:
        check_o_morphism(f, A, B)
        rep.add(Verdict.ok("o_morphism_quadruple"))
    except NotOMorphism as exc:
        rep.add(Verdict.fail("o_morphism_quadruple", condition=exc.condition, **_quadruple_roles(exc, S, T)))
    w = symmetry_witness(f, symmetric_candidate(f, A, B), A, B)
    rep.add(Verdict.fail("symmetrizable", p=(S, w[0]), q=(T, w[1])) if w else Verdict.ok("symmetrizable"))
    lhs, rhs = _red_sides(f, A, B)
    bad = np.argwhere(lhs != rhs)
    rep.add(
        Verdict.fail("red_condition", p=(S, int(bad[0][0])), q=(T, int(bad[0][1])))
        if len(bad)
        else Verdict.ok("red_condition")
    )
    jw = join_preservation_witness(f)
    rep.add(Verdict.fail("join_preserving", U=(S, jw)) if jw is not None else Verdict.ok("join_preserving"))
    three_way_equivalence(f, A, B)


def _quadruple_roles(exc: NotOMorphism, S, T):
    """Attach each witness role to the lattice it lives in."""
    w = exc.witness or {}
    forward = exc.condition != "f⁻ ⊣ f⁻*"
    first, second = (S, T) if forward else (T, S)
    if isinstance(exc.__cause__, NotMonotone):
        second = first
    return {k: ((first if k == "p" else second), v) for k, v in w.items()}


def _check_cover(P, rep: Report):
    try:
        F = build_frame(P)
    except InternalInconsistency as exc:
        rep.add(Verdict.fail("frame_valid", reason=str(exc)))
        return
    rep.add(Verdict.ok("frame_valid"))
    k = P.k
    subsets = range(1 << k) if k <= 12 else [0] + [1 << a for a in range(k)]
    ext = next((U for U in subsets if U & ~P.saturate(U)), None)
    rep.add(Verdict.fail("closure_extensive", U=bits(ext)) if ext is not None else Verdict.ok("closure_extensive"))
    idem = next((U for U in subsets if P.saturate(P.saturate(U)) != P.saturate(U)), None)
    rep.add(Verdict.fail("closure_idempotent", U=bits(idem)) if idem is not None else Verdict.ok("closure_idempotent"))
    mono = next(
        ((U, a) for U in subsets for a in range(k) if P.saturate(U) & ~P.saturate(U | 1 << a)), None
    )
    rep.add(
        Verdict.fail("closure_monotone", U=bits(mono[0]), added=mono[1]) if mono else Verdict.ok("closure_monotone")
    )
    rep.add(*check_positivity_laws(F.lattice, F.base, F.frame_pos).verdicts)
    rep.notes.append(f"frame has {F.n} elements")
    rep.notes.append("positive base: " + ", ".join(P.names[a] for a in range(k) if F.pos[a]))
    rep.notes.append("atoms: " + (", ".join(P.names[a] for a in ft_atoms(F).members) or "none"))
    rep.notes.append(f"discrete: {is_discrete(F)}")
    for a, b in F.order_mismatches:
        rep.notes.append(f"derived order has {P.names[a]} ≤ {P.names[b]} but the base meet does not")


def _check_poset(leq, rep: Report):
    D = dm_completion(leq)
    rep.add(Verdict.ok("dm_complete_lattice"))
    rep.notes.append(f"{len(D.cuts)} normal cuts; source already complete: {dm_is_iso(D)}")
    rep.notes.append(f"completion is Boolean: {is_boolean(D.lattice)}")


def cmd_check(doc, args, rep: Report):
    rep.command = f"check ({doc.kind})"
    if doc.kind == "lattice":
        _check_lattice(doc.payload, rep)
    elif doc.kind == "oalgebra":
        _check_oalgebra(doc.payload, rep)
    elif doc.kind == "map":
        _check_map(doc.payload, rep)
    elif doc.kind == "cover":
        _check_cover(doc.payload, rep)
    elif doc.kind == "relation":
        cmd_relation(doc, args, rep)
    else:
        _check_poset(doc.payload, rep)


def cmd_search_overlap(doc, args, rep: Report):
    if doc.kind not in ("lattice", "oalgebra"):
        raise ParseError("search-overlap needs a lattice document")
    L, base = doc.payload.lattice, doc.payload.base
    found = find_all_overlaps(L, base, args.budget or DEFAULT_SEARCH_BUDGET)
    boolean = is_boolean(L) or L.is_trivial
    for i, r in enumerate(found):
        pairs = ", ".join(f"{L.names[p]}⊲{L.names[q]}" for p, q in r.pairs() if p <= q)
        rep.sections.append(f"overlap {i + 1}: {pairs or '(empty relation)'}")
        if r == canonical_overlap(L):
            rep.sections.append("  equals the canonical overlap p ∧ q ≠ 0")
    expected = 1 if boolean else 0
    rep.add(
        Verdict.ok("overlap_count_matches_booleanness")
        if len(found) == expected
        else Verdict.fail("overlap_count_matches_booleanness", found=len(found), boolean=boolean)
    )
    rep.notes.append(f"{len(found)} overlap relation(s); lattice Boolean: {boolean}")
    if L.is_trivial:
        rep.notes.append("degenerate: the lattice has 0 = 1")


def _table(name, f, out):
    src_names = f.source.names
    dst_names = f.target.names
    out.append(f"{name}:")
    for p in f.source.elements:
        out.append(f"  {src_names[p]} ↦ {dst_names[f(p)]}")


def cmd_relation(doc, args, rep: Report):
    if doc.kind != "relation":
        raise ParseError("relation needs a relation document")
    R = doc.payload
    if args.direction == "inverse":
        R = R.inverse()
    rep.command = f"relation ({args.direction})"
    ops = relation_operators(R)
    for name, f in zip(("R", "R⁻", "R*", "R⁻*"), ops):
        _table(name, f, rep.sections)
    PX, PY = ops.image.source, ops.image.target
    for law, f, g in (
        ("image_restriction_adjunction", ops.image, ops.restriction),
        ("preimage_corestriction_adjunction", ops.preimage, ops.co_restriction),
    ):
        w = _adjunction_witness(f, g)
        rep.add(Verdict.fail(law, p=(f.source, w[0]), q=(f.target, w[1])) if w else Verdict.ok(law))
    im, pre = ops.image.array, ops.preimage.array
    a = np.arange(PX.n)[:, None]
    b = np.arange(PY.n)[None, :]
    bad = np.argwhere(((im[:, None] & b) != 0) != ((a & pre[None, :]) != 0))
    rep.add(
        Verdict.fail("image_preimage_symmetry", A=(PX, int(bad[0][0])), B=(PY, int(bad[0][1])))
        if len(bad)
        else Verdict.ok("image_preimage_symmetry")
    )


def cmd_corpus(args, rep: Report):
    rep.command = f"corpus ({args.scale})"
    for r in acceptance.run_all(args.scale):
        rep.sections.append(r.line())
        law = f"criterion_{r.number}"
        rep.add(Verdict.ok(law) if r.passed else Verdict.fail(law, detail=r.detail))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlap-workbench", description="Check overlap algebras, their morphisms and formal topologies."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--budget", type=int, default=None, help="search budget for exhaustive enumerations")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled map suites")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("check", "verify the laws for one structure document"),
        ("search-overlap", "list every overlap relation on a lattice"),
        ("relation", "print and verify the four operators of a relation"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--input", default=None, help="path to a JSON document (standard input if omitted)")
        if name == "relation":
            p.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    p = sub.add_parser("corpus", parents=[common], help="run the bundled acceptance corpus")
    p.add_argument("--scale", choices=acceptance.SCALES, default="default")
    return parser


def main(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    rep = Report(args.command)
    t0 = time.perf_counter()
    try:
        if args.command == "corpus":
            cmd_corpus(args, rep)
        else:
            if args.input:
                try:
                    with open(args.input, encoding="utf-8") as fh:
                        text = fh.read()
                except OSError as exc:
                    raise ParseError(f"cannot read {args.input}: {exc}") from exc
            else:
                text = sys.stdin.read()
            doc = load_document(text)
            {"check": cmd_check, "search-overlap": cmd_search_overlap, "relation": cmd_relation}[args.command](
                doc, args, rep
            )
        code = EXIT_FAIL if rep.failed else EXIT_PASS
    except BudgetError as exc:
        rep.notes.append(f"budget exceeded: {exc}")
        code = EXIT_BUDGET
    except (ParseError, ValidationError) as exc:
        rep.notes.append(f"invalid input: {exc}" + (f" witness={exc.witness}" if exc.witness else ""))
        code = EXIT_INPUT
    except WorkbenchError as exc:
        rep.add(Verdict.fail(type(exc).__name__, reason=str(exc)))
        code = EXIT_FAIL
    _emit(rep, args.format, time.perf_counter() - t0, code, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
