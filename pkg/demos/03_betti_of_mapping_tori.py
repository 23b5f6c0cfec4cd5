"""
Betti numbers of mapping tori from the homology action
======================================================

For the mapping torus of ``g`` on a surface filled at its punctures,
``b1 = 1 + dim`` of the fixed space of ``g`` on the homology with the
boundary killed.  The same number comes out of the abelianized group
presentation of the mapping torus, which is computed independently here.
"""

from bundlecover.cover import minimal_lifting_power
from bundlecover.fpgroup import twist_word_aut
from bundlecover.homology import betti_mapping_torus, betti_oracle, fixed_pair_search, h1_action
from bundlecover.pipeline import case1_cover

c = case1_cover()
f = twist_word_aut("Dx Dy^4")
m, lifts = minimal_lifting_power(c, f)

for lam in lifts:
    a = h1_action(c, f, lam, power=m)
    print(f"lift {lam}: fixed dim {a.fixed_dim}, "
          f"b1 {betti_mapping_torus(a, 2)} (presentation {betti_oracle(c, f, lam, 2, power=m)}), "
          f"symplectic {a.is_symplectic()}")

# The base torus: Dx Dy^4 acts with trace -2, so only the circle direction survives
base = twist_word_aut("Dx Dy^4").abelianized()
print("action on H1 of the torus:", base)

# two classes built from rows 2 and 4 that every lift fixes, meeting twice
pair = fixed_pair_search(c)
print(f"fixed pair: {pair.dim} classes, I(delta, delta*) = {pair.intersection}, "
      f"certificate passes: {pair.passes()}")
