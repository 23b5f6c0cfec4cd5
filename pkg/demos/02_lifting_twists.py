"""
Lifting Dehn twists to a cover
==============================

``f`` lifts to a cover when some sheet map ``lam`` intertwines the
monodromy with its twist by ``f``.  The search is basepoint free, so ``lam``
is allowed to move the base sheet.  When ``f`` does not lift, a power does,
since ``Aut(F_2)`` permutes the finitely many index-``d`` subgroups.
"""

from bundlecover.cover import (
    canonical_twist_x_lift,
    check_lift_conditions,
    find_lifts,
    minimal_lifting_power,
    verify_lift,
)
from bundlecover.fpgroup import twist_word_aut, twist_x
from bundlecover.pipeline import case1_cover

c = case1_cover()
print("row conditions:", check_lift_conditions(c.meta["sigmas"]))

dx = twist_x()
lifts = find_lifts(c, dx)
print(f"Dx has {len(lifts)} lifts")
canon = canonical_twist_x_lift(c)
print("canonical lift of Dx:", canon, "verified:", verify_lift(c, dx, canon))

for word in ["Dy", "Dy^4", "Dx Dy^4", "Dx^-1 Dy Dx"]:
    f = twist_word_aut(word)
    m, lifts = minimal_lifting_power(c, f)
    print(f"{word:>12}: smallest lifting power {m}, {len(lifts)} lifts")
