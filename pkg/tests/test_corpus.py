import numpy as np
import pytest

from overlap_workbench.corpus import (
    KNOWN_LATTICE_COUNTS,
    enumerate_lattices,
    lattices_of_size,
    named_lattices,
    oalgebra_corpus,
    permuted,
    presentation_corpus,
)
from overlap_workbench.lattice import is_boolean, powerset_lattice
from overlap_workbench.topology import build_frame


@pytest.mark.parametrize("n", range(1, 7))
def test_lattice_counts(n):
    assert len(lattices_of_size(n)) == KNOWN_LATTICE_COUNTS[n - 1]


def test_corpus_lattices_are_pairwise_non_isomorphic():
    import itertools

    for n in range(1, 6):
        keys = set()
        for L in lattices_of_size(n):
            best = min(
                L.leq[np.asarray(p)[:, None], np.asarray(p)[None, :]].tobytes()
                for p in itertools.permutations(range(n))
            )
            keys.add(best)
        assert len(keys) == len(lattices_of_size(n))


def test_booleans_in_corpus():
    assert sum(is_boolean(L) for L in enumerate_lattices(6)) == 3  # trivial, P(1), P(2)


def test_permuted_keeps_structure():
    L = powerset_lattice(2)[0]
    M = permuted(L, [3, 1, 0, 2])
    assert is_boolean(M) and M.names[0] == L.names[3]


def test_named_and_oalgebra_corpus():
    names = named_lattices()
    assert {"M3", "N5", "P(3) shuffled"} <= set(names)
    algebras = oalgebra_corpus(6, 3)
    assert len(algebras) == 4 + 4  # P(0..3), then trivial, P(1), P(2) and the shuffled cube


@pytest.mark.parametrize("scale,n", [("small", 7), ("default", 9), ("large", 11)])
def test_presentation_corpus_sizes(scale, n):
    assert len(presentation_corpus(scale)) == n


def test_presentation_corpus_frames_fit_default_budget():
    for name, P in presentation_corpus("default").items():
        assert build_frame(P).n >= 1, name
