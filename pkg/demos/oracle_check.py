"""
Brute force against the constructions
======================================

The oracle never looks at automorphism subgroups: it lists every cycle,
covers each edge twice by two classes of equal-length cycles and keeps the
surfaces whose flag orbits come out as 2_{0,1}.
"""

import time

from rwmaps import build_rose_window
from rwmaps.classifier import all_cycles, exhaustive_oracle
from rwmaps.families import family_ii_maps
from rwmaps.maps import maps_isomorphic, map_type

graph = build_rose_window((6, 5, 4))
print(len(all_cycles(graph)), "cycles on", graph.params)

start = time.perf_counter()
found = exhaustive_oracle(graph)
print(len(found), "maps in", round(time.perf_counter() - start, 2), "s")

built = family_ii_maps(3)
for m in found:
    match = [cm.route for cm in built if maps_isomorphic(m, cm.map)]
    print(map_type(m), "chi", m.euler_characteristic(), "constructed via", match)
