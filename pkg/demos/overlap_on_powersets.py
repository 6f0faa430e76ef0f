"""
Overlap on a powerset
=====================

The powerset of a finite set carries one overlap relation: two subsets
overlap when they share a point. Here we build it, check the four axioms and
confirm that the search finds nothing else.
"""

from overlap_workbench import OverlapRelation, check_overlap_axioms, find_all_overlaps, powerset_oalgebra

A = powerset_oalgebra(3)
L = A.lattice
print(L.n, "subsets of a 3-point set")

# the relation is a boolean matrix over element indices
print(A.overlap.matrix.astype(int))

report = check_overlap_axioms(L, A.base, A.overlap)
print(report.describe())

# exhaustive search over relations on the base
found = find_all_overlaps(L, A.base)
print(len(found), "overlap found, canonical:", found[0] == A.overlap)

# removing one pair breaks an axiom, and the report names a witness
M = A.overlap.matrix.copy()
M[1, 1] = False
broken = OverlapRelation(L, M)
for v in check_overlap_axioms(L, A.base, broken).failures:
    print(v.describe())
