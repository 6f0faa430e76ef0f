"""JSON documents describing lattices, o-algebras, maps, relations, covers and posets.

Every document is an object with a ``kind`` field:

* ``lattice``: ``{"leq": [[...]], "names": [...]}``, or ``{"order": [[a, b], ...],
  "size": n}`` (reflexive-transitive closure of the listed pairs), or
  ``{"powerset": k}``. Optional ``"base": [indices]``.
* ``oalgebra``: a lattice plus ``"overlap"``, either a boolean matrix, a list
  of ``[p, q]`` pairs (symmetric closure taken), or the string ``"canonical"``.
* ``map``: ``{"source": doc, "target": doc, "table": [...]}``, where source and
  target are lattice or oalgebra documents (kind may be omitted).
* ``relation``: ``{"x_size": m, "y_size": n, "pairs": [[x, y], ...]}``.
* ``cover``: ``{"base_meet": [[...]], "top": i, "axioms": [[a, [u, ...]], ...],
  "names": [...]}``.
* ``poset``: ``{"leq": [[...]]}`` or ``{"order": ..., "size": n}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ParseError
from .lattice import BaseFamily, FiniteLattice, build_lattice, minimal_base, powerset_lattice
from .morphism import FiniteRelation, LatticeMap
from .overlap import OverlapRelation, canonical_overlap
from .topology import CoverPresentation, presentation

KINDS = ("lattice", "oalgebra", "map", "relation", "cover", "poset")


@dataclass(frozen=True)
class LatticeDoc:
    lattice: FiniteLattice
    base: BaseFamily
    overlap: OverlapRelation | None = None


@dataclass(frozen=True)
class WorkbenchDocument:
    kind: str
    payload: Any  # LatticeDoc, (LatticeDoc, LatticeDoc, LatticeMap), FiniteRelation, CoverPresentation, ndarray


def _bool_matrix(raw, what) -> np.ndarray:
    try:
        M = np.asarray(raw, dtype=bool)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what} is not a boolean matrix") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParseError(f"{what} must be a square matrix")
    return M


def _int(raw, what) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError(f"{what} must be an integer")
    return raw


def _order(doc) -> np.ndarray:
    if "leq" in doc:
        return _bool_matrix(doc["leq"], "leq")
    if "order" in doc:
        n = _int(doc.get("size"), "size")
        leq = np.eye(n, dtype=bool)
        for pair in doc["order"]:
            if len(pair) != 2:
                raise ParseError("order entries must be [a, b] pairs")
            a, b = (_int(v, "order index") for v in pair)
            if not (0 <= a < n and 0 <= b < n):
                raise ParseError(f"order pair {pair} out of range")
            leq[a, b] = True
        for k in range(n):
            leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
        return leq
    raise ParseError("expected 'leq' or 'order'")


def _lattice_doc(doc) -> LatticeDoc:
    if not isinstance(doc, dict):
        raise ParseError("lattice document must be an object")
    if "powerset" in doc:
        L, base = powerset_lattice(_int(doc["powerset"], "powerset"))
    else:
        names = doc.get("names")
        L = build_lattice(_order(doc), names)
        base = None
    if "base" in doc:
        base = BaseFamily(L, [_int(a, "base index") for a in doc["base"]])
    elif base is None:
        base = minimal_base(L)
    r = None
    if "overlap" in doc:
        raw = doc["overlap"]
        if raw == "canonical":
            r = canonical_overlap(L)
        elif isinstance(raw, list) and raw and all(
            isinstance(row, list) and all(isinstance(v, bool) for v in row) for row in raw
        ):
            M = _bool_matrix(raw, "overlap")
            if M.shape != (L.n, L.n):
                raise ParseError("overlap matrix does not match the lattice size")
            r = OverlapRelation(L, M)
        elif isinstance(raw, list):
            M = np.zeros((L.n, L.n), dtype=bool)
            for pair in raw:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ParseError("overlap pairs must be [p, q]")
                p, q = (_int(v, "overlap index") for v in pair)
                if not (0 <= p < L.n and 0 <= q < L.n):
                    raise ParseError(f"overlap pair {pair} out of range")
                M[p, q] = M[q, p] = True
            r = OverlapRelation(L, M)
        else:
            raise ParseError("overlap must be a matrix, a list of pairs or 'canonical'")
    return LatticeDoc(L, base, r)


def _cover_doc(doc) -> CoverPresentation:
    try:
        meet = np.asarray(doc["base_meet"], dtype=np.intp)
    except KeyError as exc:
        raise ParseError("cover document needs 'base_meet'") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError("base_meet must be an integer matrix") from exc
    top = doc.get("top")
    if top is not None:
        top = _int(top, "top")
    axioms = []
    for ax in doc.get("axioms", []):
        if not isinstance(ax, list) or len(ax) != 2 or not isinstance(ax[1], list):
            raise ParseError("axioms must be [a, [u, ...]] entries")
        axioms.append((_int(ax[0], "axiom index"), [_int(u, "axiom index") for u in ax[1]]))
    return presentation(meet, top, axioms, doc.get("names", ()))


def _relation_doc(doc) -> FiniteRelation:
    x, y = _int(doc.get("x_size"), "x_size"), _int(doc.get("y_size"), "y_size")
    pairs = []
    for pair in doc.get("pairs", []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("relation pairs must be [x, y]")
        pairs.append(tuple(_int(v, "relation index") for v in pair))
    return FiniteRelation(x, y, frozenset(pairs))


def parse_document(doc) -> WorkbenchDocument:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {', '.join(KINDS)}")
    if kind in ("lattice", "oalgebra"):
        ld = _lattice_doc(doc)
        if kind == "oalgebra" and ld.overlap is None:
            raise ParseError("oalgebra document needs 'overlap'")
        return WorkbenchDocument(kind, ld)
    if kind == "map":
        if "source" not in doc or "target" not in doc or "table" not in doc:
            raise ParseError("map document needs source, target and table")
        src, dst = _lattice_doc(doc["source"]), _lattice_doc(doc["target"])
        table = doc["table"]
        if not isinstance(table, list):
            raise ParseError("table must be a list")
        f = LatticeMap(src.lattice, dst.lattice, [_int(v, "table entry") for v in table])
        return WorkbenchDocument(kind, (src, dst, f))
    if kind == "relation":
        return WorkbenchDocument(kind, _relation_doc(doc))
    if kind == "cover":
        return WorkbenchDocument(kind, _cover_doc(doc))
    return WorkbenchDocument(kind, _order(doc))


def load_document(text: str) -> WorkbenchDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_document(raw)
