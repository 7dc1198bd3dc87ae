"""Good elements and elementarity of the classical pseudo-ovoid of PG(7,2).

Run: python3 demos/goodness_and_elementarity.py
"""

import warnings

from fingeo import caps
from fingeo import egg as eg
from fingeo.errors import SizeBoundUnmet

cap = eg.classical_pseudo_ovoid(2, 2)
print(f"{len(cap)} lines in PG({cap.ambient - 1},{cap.q}); egg: {eg.is_egg(cap) is not None}")

rep = eg.is_good_at(cap, 0)
print(f"element 0: good={rep.good}, {len(rep.sections)} sections of 5 elements each")
print(f"induced partial spread extends: {eg.good_via_spread(cap, 0) is not None}")

res = eg.is_elementary(cap)
print(f"is_elementary: {res.status} ({res.reason}), using {res.evidence}")
print(f"collapsed to {len(res.collapsed)} points of PG(3,4), cap: {caps.is_cap(list(res.collapsed))}")

# dropping elements keeps the construction working down to the size bound
small = eg.subcap(cap, range(12))
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", SizeBoundUnmet)
    res = eg.is_elementary(small)
print(f"12-element subcap: {res.status}; warning: {caught[0].message if caught else None}")
