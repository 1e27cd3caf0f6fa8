"""
Two arc-regular subgroups of index two
======================================

On R_24(8,19) the full group is too big to be arc-regular, but two of its
index-2 subgroups are, and each gives one map.
"""

from rwmaps import AutomorphismGroup, build_rose_window
from rwmaps.families import family_iv_maps, family_iv_subgroups, family_iv_witnesses, orbit_witness
from rwmaps.maps import map_automorphisms
from rwmaps.perm import index

graph = build_rose_window((24, 8, 19))
aut = AutomorphismGroup(graph)
print("|Aut| =", aut.order)

subs = family_iv_subgroups(2, 2)
for name, h in subs.items():
    print(name, "order", h.order, "index", index(aut, h))

for cm in family_iv_maps(2, 2):
    autm = map_automorphisms(cm.map)
    print(cm.route, "faces", cm.face_lengths, "|Aut(M)|", autm.order)

# cycle sets invariant under one subgroup but moved by the other
for w in family_iv_witnesses(2, 2):
    print("listed", w.name, "ok" if w.ok else "not invariant", w.lengths)
for name in subs:
    w = orbit_witness(2, 2, name)
    print("orbit", name, "ok" if w.ok else "failed", len(w.cycles), "cycles of length", w.lengths[0])
