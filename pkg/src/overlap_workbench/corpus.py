"""Bundled test structures: every small lattice, named o-algebras, cover presentations."""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import NotLattice
from .lattice import FiniteLattice, build_lattice, chain_lattice, diamond_lattice, pentagon_lattice, powerset_lattice
from .overlap import OAlgebra, find_all_overlaps, powerset_oalgebra
from .lattice import minimal_base
from .topology import (
    CoverPresentation,
    chain_presentation,
    discrete_presentation,
    empty_presentation,
    point_presentation,
    product,
    sierpinski_presentation,
    trivial_presentation,
)

# number of lattices on n elements up to isomorphism, n = 1..8
KNOWN_LATTICE_COUNTS = (1, 1, 1, 2, 5, 15, 53, 222)


def _middle_orders(m: int):
    """Strict orders on 0..m-1 contained in the natural order, as boolean matrices."""
    slots = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for code in range(1 << len(slots)):
        R = np.zeros((m, m), dtype=bool)
        for b, (i, j) in enumerate(slots):
            if code >> b & 1:
                R[i, j] = True
        # transitivity
        if ((R.astype(np.int64) @ R.astype(np.int64) > 0) & ~R).any():
            continue
        yield R


def _canonical_key(R: np.ndarray) -> bytes:
    m = R.shape[0]
    best = None
    for perm in itertools.permutations(range(m)):
        p = np.asarray(perm, dtype=np.intp)
        key = R[p[:, None], p[None, :]].tobytes()
        if best is None or key < best:
            best = key
    return best or b""


@lru_cache(maxsize=None)
def lattices_of_size(n: int) -> tuple[FiniteLattice, ...]:
    """All lattices on n elements, one per isomorphism class.

    Bottom is element 0 and top is element n-1; the middle elements carry
    every naturally labelled strict order, deduplicated by a canonical form.
    Every finite poset has a linear extension, so natural labelling loses
    no isomorphism class.
    """
    if n == 1:
        return (build_lattice(np.ones((1, 1), dtype=bool), ["0"]),)
    m = n - 2
    seen = set()
    out = []
    for R in _middle_orders(m):
        key = _canonical_key(R)
        if key in seen:
            continue
        seen.add(key)
        leq = np.zeros((n, n), dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        leq[1:-1, 1:-1] = R | np.eye(m, dtype=bool)
        try:
            out.append(build_lattice(leq, ["0"] + [f"e{i}" for i in range(m)] + ["1"]))
        except NotLattice:
            continue
    return tuple(out)


def enumerate_lattices(max_n: int) -> list[FiniteLattice]:
    return [L for n in range(1, max_n + 1) for L in lattices_of_size(n)]


def permuted(L: FiniteLattice, perm) -> FiniteLattice:
    """The same lattice with elements renumbered: new index i is old perm[i]."""
    p = np.asarray(perm, dtype=np.intp)
    return build_lattice(L.leq[p[:, None], p[None, :]], [L.names[i] for i in p])


def named_lattices() -> dict[str, FiniteLattice]:
    out = {f"P({k})": powerset_lattice(k)[0] for k in range(4)}
    out.update({f"chain{n}": chain_lattice(n) for n in (2, 3, 4)})
    out["M3"] = diamond_lattice()
    out["N5"] = pentagon_lattice()
    rng = np.random.default_rng(7)
    out["P(3) shuffled"] = permuted(powerset_lattice(3)[0], rng.permutation(8))
    return out


def oalgebra_corpus(max_lattice_size: int = 6, max_ground: int = 4) -> list[tuple[str, OAlgebra]]:
    """Powerset algebras plus every o-algebra found on the small lattices."""
    out = [(f"P({k})", powerset_oalgebra(k)) for k in range(max_ground + 1)]
    for L in enumerate_lattices(max_lattice_size) + [named_lattices()["P(3) shuffled"]]:
        base = minimal_base(L)
        for r in find_all_overlaps(L, base):
            out.append((f"lattice[{L.n}] {L.names}", OAlgebra(L, base, r)))
    return out


def presentation_corpus(scale: str = "default") -> dict[str, CoverPresentation]:
    out = {
        "point": point_presentation(),
        "trivial": trivial_presentation(),
        "empty": empty_presentation(),
        "discrete1": discrete_presentation(1),
        "discrete2": discrete_presentation(2),
        "sierpinski": sierpinski_presentation(),
        "chain3": chain_presentation(3),
    }
    if scale != "small":
        out["discrete3"] = discrete_presentation(3)
        out["sierpinski×sierpinski"] = product(sierpinski_presentation(), sierpinski_presentation())
    if scale == "large":
        out["discrete4"] = discrete_presentation(4)
        out["discrete2×discrete2"] = product(discrete_presentation(2), discrete_presentation(2))
    return out
