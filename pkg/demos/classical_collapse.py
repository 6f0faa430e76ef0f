"""
Which small lattices admit an overlap
=====================================

Run the overlap search over every lattice with at most six elements.
Only the Boolean ones (and the one-element lattice) get a relation.
"""

from overlap_workbench.corpus import enumerate_lattices
from overlap_workbench.lattice import is_boolean, minimal_base
from overlap_workbench.overlap import find_all_overlaps

rows = []
for L in enumerate_lattices(6):
    found = find_all_overlaps(L, minimal_base(L))
    rows.append((L.n, is_boolean(L), len(found)))

for n, boolean, k in rows:
    if k:
        print(f"{n} elements, Boolean={boolean}: {k} overlap")
print(len(rows), "lattices searched,", sum(k for _, _, k in rows), "overlaps in total")
