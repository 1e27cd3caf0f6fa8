import pytest

from rwmaps.automorphisms import AutomorphismGroup
from rwmaps.cycles import canonical_undirected, cycle_census
from rwmaps.families import (
    TTuple,
    compute_T,
    expected_family_i,
    expected_family_ii,
    expected_family_iii,
    expected_family_iv,
    face_orbit_from_seed,
    family_i_graph,
    family_i_maps,
    family_i_seeds,
    family_ii_graph,
    family_ii_identities,
    family_ii_maps,
    family_ii_seeds,
    family_iii_maps,
    family_iv_h1_orbit_checks,
    family_iv_identities,
    family_iv_maps,
    family_iv_subgroups,
    family_iv_witnesses,
    generic_maps,
    orbit_witness,
    t_subgroups_family_i,
    t_subgroups_family_ii,
)
from rwmaps.graphs import FamilyTag, GraphError, build_rose_window, named_generators
from rwmaps.maps import TWO_ZERO_ONE, MapError, MapOnGraph, classify, map_automorphisms, maps_isomorphic
from rwmaps.perm import index, is_klein_four

from oracles import face_preserving, vf2_automorphisms


def lengths(maps):
    return sorted(cm.face_lengths if len(cm.face_lengths) == 2 else cm.face_lengths * 2 for cm in maps)


# -- block subgroups ------------------------------------------------------------


def test_both_block_shapes_when_n_is_six():
    shapes = {t.shape: t for t in t_subgroups_family_i(6)}
    assert set(shapes) == {"T1", "T2"}
    for t in shapes.values():
        assert t.order == 4 and is_klein_four(t.group)


def test_no_block_subgroups_when_n_is_coprime_to_six():
    assert t_subgroups_family_i(5) == []
    assert t_subgroups_family_i(7) == []


def test_alternating_shape_at_four_contains_the_all_ones_tuple():
    (t,) = t_subgroups_family_i(4)
    assert t.shape == "T2"
    assert TTuple((1, 1, 1, 1)) in t.tuples


@pytest.mark.parametrize("n", [6, 9, 12])
def test_block_subgroups_are_normalized_by_rotation_and_reflection(n):
    rg = family_i_graph(n)
    gens = named_generators(rg.params, FamilyTag("i"))
    for t in t_subgroups_family_i(n, rg):
        elems = set(t.elements())
        for g in (gens["rho"], gens["mu"]):
            assert {e ** g for e in elems} == elems
        for tt in t.tuples:
            # no two adjacent identity blocks in a nonzero tuple
            e = tt.entries
            if any(e):
                assert all(e[i] or e[i - 1] for i in range(n))


def test_family_ii_shapes():
    assert {t.shape for t in t_subgroups_family_ii(12)} == {"T3", "T4"}
    (t4,) = t_subgroups_family_ii(4)
    assert t4.shape == "T4" and TTuple((2, 1, 2, 1)) in t4.tuples
    (t3,) = t_subgroups_family_ii(3)
    assert t3.shape == "T3" and TTuple((3, 3, 3)) in t3.tuples
    assert t_subgroups_family_ii(5) == []


@pytest.mark.parametrize("h", [6, 8, 12])
def test_family_ii_block_subgroups_are_normalized(h):
    rg = family_ii_graph(h)
    gens = named_generators(rg.params, FamilyTag("ii", m=h))
    for t in t_subgroups_family_ii(h, rg):
        assert t.order == 8
        elems = set(t.elements())
        for g in (gens["alpha"], gens["beta"]):
            assert {e ** g for e in elems} == elems


def test_face_orbit_from_seed():
    rg = family_i_graph(6)
    seeds = family_i_seeds(rg)
    t1, t2 = sorted(t_subgroups_family_i(6, rg), key=lambda t: t.shape)
    assert len(face_orbit_from_seed(seeds["n"], t1)) == 4
    assert len(face_orbit_from_seed(seeds["n"], t2)) == 4
    ident = [t1.elements()[0]] if t1.elements()[0].is_identity() else []
    assert face_orbit_from_seed(seeds["n"], ident) == {canonical_undirected(seeds["n"])}
    rg2 = family_ii_graph(6)
    (t3,) = t_subgroups_family_ii(6, rg2)
    assert len(face_orbit_from_seed(family_ii_seeds(rg2)["n"], t3)) == 8


# -- family (i) ------------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 5, 6, 8, 9, 10, 12])
def test_family_i_counts(n):
    assert lengths(family_i_maps(n, check=False)) == expected_family_i(n)


def test_four_maps_at_six():
    maps = family_i_maps(6)
    assert lengths(maps) == [(4, 6), (4, 6), (4, 12), (6, 12)]
    a, b = [cm for cm in maps if cm.face_lengths == (4, 6)]
    assert not maps_isomorphic(a.map, b.map)


@pytest.mark.parametrize("n", [4, 6])
def test_family_i_block_route_agrees_with_search(n):
    block = family_i_maps(n)
    search = generic_maps(build_rose_window((n, 2, 1)))
    assert lengths(block) == lengths(search)
    for cm in block:
        assert any(maps_isomorphic(cm.map, other.map) for other in search)


@pytest.mark.parametrize("n", [4, 6])
def test_family_i_maps_against_vf2(n):
    autos = vf2_automorphisms(n, 2, 1)
    for cm in family_i_maps(n):
        # 2_{0,1}: |Aut(M)| is half the flags, i.e. the number of arcs
        assert len(face_preserving(autos, cm.map.faces)) == 8 * n == cm.aut_order


def test_block_subgroup_recovered_from_maps():
    shapes = {}
    for cm in family_i_maps(6):
        shapes.setdefault(cm.face_lengths, []).append(compute_T(cm).shape)
    assert shapes[(6, 12)] == ["T2"]
    assert sorted(shapes[(4, 6)]) == ["T1", "T2"]
    for cm in family_i_maps(9):
        assert compute_T(cm).shape == "T1"


# -- family (ii) -----------------------------------------------------------------


@pytest.mark.parametrize("h", [3, 4, 5, 6, 8, 9])
def test_family_ii_counts(h):
    assert lengths(family_ii_maps(h, check=False)) == expected_family_ii(h)


def test_family_ii_at_three_has_three_maps():
    assert lengths(family_ii_maps(3)) == [(3, 4), (3, 6), (4, 6)]


@pytest.mark.parametrize("h", [5, 6])
def test_family_ii_block_route_agrees_with_search(h):
    block = family_ii_maps(h)
    search = generic_maps(build_rose_window((2 * h, h + 2, h + 1)))
    assert lengths(block) == lengths(search)


def test_family_ii_block_subgroup_of_the_eight_block_map():
    (cm,) = family_ii_maps(4)
    assert compute_T(cm).shape == "T4"


@pytest.mark.parametrize("h", [4, 5, 6, 9])
def test_family_ii_identities(h):
    assert all(family_ii_identities(h).values())


# -- family (iii) ----------------------------------------------------------------


@pytest.mark.parametrize("m,b,r", [(8, 3, 1), (12, 5, 1), (16, 7, 1)])
def test_family_iii_three_maps_when_b_squared_is_one(m, b, r):
    maps = family_iii_maps(m, b, r)
    assert len(maps) == expected_family_iii(m, b) == 3
    for cm in maps:
        assert cm.map_class == TWO_ZERO_ONE
        assert cm.aut_order == 16 * m


@pytest.mark.parametrize("m,b,r", [(5, 2, 1), (10, 3, 1), (13, 5, 1)])
def test_family_iii_no_maps_when_b_squared_is_minus_one(m, b, r):
    assert family_iii_maps(m, b, r) == []
    assert expected_family_iii(m, b) == 0


def test_family_iii_rejects_a_non_matching_pattern():
    # b = 2 squares to 4, not +-1 mod 6
    with pytest.raises(GraphError):
        family_iii_maps(6, 2, 1)


def test_family_iii_search_agrees():
    block = family_iii_maps(8, 3, 1)
    search = generic_maps(build_rose_window((16, 6, 1)))
    assert lengths(block) == lengths(search)


# -- family (iv) -----------------------------------------------------------------


@pytest.mark.parametrize("m,d", [(1, 1), (1, -1), (2, 2), (2, -2), (3, 3)])
def test_family_iv_counts(m, d):
    maps = family_iv_maps(m, d)
    assert len(maps) == expected_family_iv(m)
    for cm in maps:
        assert classify(cm.map) == TWO_ZERO_ONE


def test_family_iv_index_two_subgroups():
    g = build_rose_window((24, 8, 19))
    aut = AutomorphismGroup(g)
    subs = family_iv_subgroups(2, 2)
    for h in subs.values():
        assert index(aut, h) == 2
    assert subs["H1"].order == subs["H2"].order == 192
    assert set(subs["H1"].elements()) != set(subs["H2"].elements())


def test_family_iv_maps_come_from_both_subgroups():
    routes = sorted(cm.route for cm in family_iv_maps(2, 2))
    assert routes == ["H1", "H2"]


@pytest.mark.parametrize("m,d", [(2, 2), (2, -2), (6, 6)])
def test_family_iv_identities(m, d):
    assert all(family_iv_identities(m, d).values())


def test_family_iv_identities_without_tau():
    assert family_iv_identities(1, 1) == {"sigma commutes with mu": True}


@pytest.mark.parametrize("m,d", [(2, 2), (2, -2)])
def test_h1_orbit_structure(m, d):
    checks = family_iv_h1_orbit_checks(m, d)
    assert len(checks) == 6 and all(checks.values()), checks


@pytest.mark.parametrize("m,d", [(2, 2), (2, -2), (6, 6)])
def test_literal_h1_witness(m, d):
    h1 = family_iv_witnesses(m, d)[0]
    assert h1.name == "H1" and h1.ok


@pytest.mark.xfail(
    strict=True,
    reason="the stated H2 witness set is not preserved by mu and tau.rho when m = 2 mod 4; "
    "the hub step 2r has gcd 4 with n rather than 2",
)
@pytest.mark.parametrize("m,d", [(2, 2), (6, 6)])
def test_literal_h2_witness(m, d):
    h2 = family_iv_witnesses(m, d)[1]
    assert h2.ok


@pytest.mark.parametrize("name", ["H1", "H2"])
@pytest.mark.parametrize("m,d", [(2, 2), (2, -2), (6, 6)])
def test_orbit_witnesses(name, m, d):
    w = orbit_witness(m, d, name)
    assert w.ok


def test_swapped_orbits_give_tau_invariant_faces():
    g = build_rose_window((24, 8, 19))
    gens = named_generators((24, 8, 19))
    h1 = family_iv_subgroups(2, 2)["H1"]
    census = cycle_census(h1, g, allow_sampling=False)
    tau = gens["tau"]
    for o1 in census.orbits:
        for o2 in census.orbits:
            if o1 is o2 or o1.length != o2.length:
                continue
            f1, f2 = o1.faces(), o2.faces()
            if {canonical_undirected(tuple(tau(v) for v in f)) for f in f1} != f2:
                continue
            try:
                m = MapOnGraph(g, tuple(sorted(f1 | f2)))
            except MapError:
                continue
            assert tau in map_automorphisms(m).group
            return
    pytest.fail("no pair of H1-orbits swapped by tau forms a map")


def test_bad_family_iv_parameter():
    with pytest.raises(GraphError):
        family_iv_maps(2, 3)
