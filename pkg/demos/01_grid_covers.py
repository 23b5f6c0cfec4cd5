"""
Grid covers of the once-punctured torus
=======================================

A cover of degree ``4r`` is cut into four rows of ``r`` squares.  Crossing
the vertical cuts between rows applies ``sigma_1, ..., sigma_4``.  With
``sigma = (1 2 3 4)`` and its inverse, alternating, every puncture unwraps
twice, so the cover extends over the orbifold with one cone point of order 2.
"""

from bundlecover.cover import boundary_lifts, grid_cover, orbifold_fill, to_dot
from bundlecover.exact_algebra import Perm
from bundlecover.homology import H1Basis

s = Perm.from_cycles("(1 2 3 4)", 4)
c = grid_cover(4, [s, s.inverse(), s, s.inverse()])
print(f"degree {c.degree}, genus {c.genus}, punctures {c.punctures}, chi {c.euler_characteristic}")

# each puncture is a cycle of the commutator x y X Y on sheets
for p in boundary_lifts(c):
    print(f"  puncture: sheets {list(p.cycle)}, unwraps {p.degree}")

print("fill at cone order 2:", orbifold_fill(c, 2))

# homology: one loop per edge off a spanning tree, then kill the punctures
b = H1Basis(c)
print(f"H1 dimension {b.dim}, after killing punctures {b.quotient.dim} = 2 * genus")

# Schreier graph, sheets labelled by (row, column)
dot = to_dot(c)
print(dot.splitlines()[1])
print(f"{dot.count('->')} edges in the DOT output")
