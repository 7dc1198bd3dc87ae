"""Field reduction from PG(2,4) to PG(5,2) and back.

Run: python3 demos/field_reduction.py
"""

from fingeo import caps
from fingeo import egg as eg
from fingeo import spread as sp
from fingeo.galois import tower_for

tower = tower_for(2, 2)                     # GF(2) inside GF(4)
conic = caps.construct_conic(tower.ext)
print(f"conic of PG(2,4): {len(conic)} points, cap: {caps.is_cap(conic)}")

cap = eg.field_reduce_cap(conic, tower)
print(f"field-reduced: {len(cap)} lines of PG({cap.ambient - 1},2)")
print(f"  pseudo-cap: {eg.is_pseudo_cap(cap)}  weak egg: {eg.is_weak_egg(cap)}")

# each element sees the others as a partial line spread of PG(3,2) with one hole line
for i in range(len(cap)):
    S = eg.induced_partial_spread(cap, i)
    hole = sp.extend_deficiency_one(S)
    print(f"  element {i}: {len(S)} lines, missing line {hole.rows}")

W = sp.canonical_witness(3, tower)
back = eg.collapse(cap, W)
print(f"collapsed back onto the conic: {set(back) == set(conic)}")
