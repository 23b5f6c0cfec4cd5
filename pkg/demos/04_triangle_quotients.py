"""
Larger covers from triangle-group quotients
===========================================

A finite group with generators of order ``2n`` whose product has order
``n`` gives, through its left regular representation, a grid cover in which
every puncture unwraps a divisor of ``n`` times.  The number of classes
fixed by lifts then grows linearly in the group order ``N``.
"""

from bundlecover.cover import orbifold_fill
from bundlecover.pipeline import run_case2
from bundlecover.triangle import case2_certificates, case2_cover, find_triangle_quotient

cert = find_triangle_quotient(3, seed=0, min_order=7)
print(f"quotient of order {cert.order} from {cert.source} over F_{cert.prime}")
print("  a =", cert.a_label)
print("  b =", cert.b_label)
print("  orders of a, b, ab:", cert.verified_orders())

c = case2_cover(cert)
print(f"cover degree {c.degree}, genus {c.genus}, fill at order 3: {orbifold_fill(c, 3)}")

counts = case2_certificates(cert)
print("cycle counts", counts["cycle_counts"], "bound on fixed dimension", counts["dim_bound"])

report = run_case2(3, "Dx Dy^4")
print()
print(report.render_text())
