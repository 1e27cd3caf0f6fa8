"""
Maps with two face orbits on R_6(2,1)
=====================================

R_n(2,1) carries twin vertices u_i, v_i.  Swapping twins block by block
gives the small Klein subgroups that pick out the face orbits.
"""

from rwmaps import build_rose_window, classify_params, emit_report
from rwmaps.families import compute_T, family_i_maps, t_subgroups_family_i

graph = build_rose_window((6, 2, 1))
print(graph.num_vertices, "vertices,", graph.num_edges, "edges")

# both block shapes exist because 6 is divisible by 2 and by 3
for t in t_subgroups_family_i(6):
    print(t.shape, sorted(str(x) for x in t.tuples))

# the four maps, with the block subgroup each one keeps
for cm in family_i_maps(6):
    print(cm.face_lengths, "euler", cm.map.euler_characteristic(), "T =", compute_T(cm).shape)

# the same thing as a report
print(emit_report(classify_params((6, 2, 1)), "text"))
