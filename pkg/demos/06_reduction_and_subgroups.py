"""
Filling cone points and passing to subgroups
============================================

Filling every cone point but one gives a surjection of mapping-torus groups,
so ``b1`` can only drop.  Going the other way, a finite-index subgroup has
``b1`` at least that of the group, by transfer.  Both are checked on
presentations with Smith normal form.
"""

from bundlecover.exact_algebra import Perm
from bundlecover.fpgroup import FPGroup, FreeWord
from bundlecover.pipeline import run_reduction, transfer_check

r = run_reduction("Dx Dy^-1", keep=1, cones=[2, 3])
print(r.render_text())
print("filled monodromy:")
print(r.theta)

# the trefoil group <a, b | a^2 = b^3> and a point stabilizer of its action on 3 points
names = ("a", "b")
rel = FreeWord.parse("a a B B B", names)
G = FPGroup(names, (rel,))
rep = [Perm.from_cycles("(1 2)", 3), Perm.from_cycles("(1 2 3)", 3)]
print(transfer_check(G, rep))
