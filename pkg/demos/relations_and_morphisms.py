"""
Relations as o-morphisms
========================

A relation between finite sets induces four maps between their powersets.
The image map is an o-morphism, and every o-morphism between powersets
comes from exactly one relation.
"""

from overlap_workbench import FiniteRelation, morphism_to_relation, relation_operators
from overlap_workbench.morphism import all_maps, preserves_joins, three_way_equivalence
from overlap_workbench.overlap import powerset_oalgebra

R = FiniteRelation(2, 2, frozenset({(0, 0), (0, 1)}))
ops = relation_operators(R)
for name, f in zip(("R", "R⁻", "R*", "R⁻*"), ops):
    print(name, [f.target.label(f(U)) for U in f.source.elements])

print("round trip:", morphism_to_relation(ops.image) == R)

# count o-morphisms P(2) -> P(2) among all 256 maps
A = powerset_oalgebra(2)
maps = list(all_maps(A.lattice, A.lattice))
omorph = [f for f in maps if three_way_equivalence(f, A, A)]
print(len(maps), "maps,", len(omorph), "o-morphisms, all join-preserving:", all(map(preserves_joins, omorph)))
