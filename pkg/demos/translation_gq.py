"""Translation generalised quadrangles from eggs.

Run: python3 demos/translation_gq.py
"""

from fingeo import caps
from fingeo import egg as eg
from fingeo import gq
from fingeo.galois import tower_for

for q in (2, 3):
    t = tower_for(q, 1)
    ovoid = eg.make_cap(t, 1, 2, caps.construct_elliptic_quadric(t.base))
    inc = gq.build_te(ovoid, eg.is_egg(ovoid))
    print(f"ovoid of PG(3,{q}): {inc.num_points} points, {inc.num_lines} lines, order {gq.verify_gq(inc)}")

cap = eg.classical_pseudo_ovoid(2, 2)
cert = eg.is_egg(cap)
inc = gq.build_te(cap, cert)
print(f"pseudo-ovoid of PG(7,2): {inc.num_points} points, {inc.num_lines} lines, order {gq.verify_gq(inc)}")

sub = gq.subquadrangle_through(cap, 0, 1, 2, certificate=cert)
print(f"subquadrangle through elements 0,1,2: {sub.num_points} points, order {sub.order}")
print(f"element 0 good via subquadrangles: {gq.goodness_via_subquadrangles(cap, 0)}")
