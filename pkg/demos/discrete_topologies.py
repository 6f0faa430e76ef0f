"""
Discrete formal topologies and the open diagonal
================================================

A formal topology is given here by a finite base with a meet table and a few
cover axioms. We saturate, build the frame of saturated sets, and compare
discreteness with openness of the diagonal.
"""

from overlap_workbench.atoms import ft_atoms, is_discrete
from overlap_workbench.topology import (
    build_frame,
    diagonal_open,
    discrete_presentation,
    presentation,
    sierpinski_presentation,
)

# two points with a top covered by them
P = discrete_presentation(2)
F = build_frame(P)
print("frame of", P.names, "has", F.n, "elements")
print("atoms:", [P.names[a] for a in ft_atoms(F).members])
print("discrete:", is_discrete(F), "open diagonal:", diagonal_open(P))

# the Sierpinski space has a point s below the top, with no cover between them
S = sierpinski_presentation()
FS = build_frame(S)
print("Sierpinski frame has", FS.n, "elements")
print("discrete:", is_discrete(FS), "open diagonal:", diagonal_open(S))

# a presentation written by hand: s is covered by nothing, so it is not positive
Q = presentation([[0, 0], [0, 1]], 1, [(0, [])], ["s", "top"])
FQ = build_frame(Q)
print("positive base elements:", [Q.names[a] for a in range(Q.k) if FQ.pos[a]])
