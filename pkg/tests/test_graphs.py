import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rwmaps.automorphisms import AutomorphismGroup, VertexCapExceeded, find_isomorphism, verify_arc_transitivity
from rwmaps.graphs import (
    EDGE_KINDS,
    FamilyTag,
    GraphError,
    LabeledGraph,
    RoseWindowParams,
    build_rose_window,
    family_matches,
    named_generators,
    recognize_family,
    reflection,
    relabel_family,
    x,
    y,
)
from rwmaps.perm import Permutation, closure

from oracles import nx_from_labeled, rose_window_nx, vf2_automorphisms


@st.composite
def valid_params(draw, max_n=14):
    n = draw(st.integers(3, max_n))
    r = draw(st.integers(1, n - 1).filter(lambda r: 2 * r != n))
    a = draw(st.integers(1, n - 1))
    try:
        return RoseWindowParams(n, a, r)
    except GraphError:
        from hypothesis import reject

        reject()


@settings(max_examples=80, deadline=None)
@given(valid_params())
def test_shape_of_every_rose_window_graph(p):
    g = build_rose_window(p)
    assert g.num_vertices == 2 * p.n
    assert g.num_edges == 4 * p.n
    assert all(g.degree(v) == 4 for v in range(g.num_vertices))
    kinds = [k for _, _, k in g.edges]
    assert all(kinds.count(k) == p.n for k in EDGE_KINDS)
    assert len(g.edge_set()) == g.num_edges


@settings(max_examples=60, deadline=None)
@given(valid_params())
def test_matches_networkx_reference_construction(p):
    ours = nx_from_labeled(build_rose_window(p))
    ref = rose_window_nx(p.n, p.a, p.r)
    assert set(map(frozenset, ours.edges)) == set(map(frozenset, ref.edges))


@settings(max_examples=60, deadline=None)
@given(valid_params())
def test_sign_changes_give_isomorphic_graphs(p):
    n = p.n
    g = build_rose_window(p)
    same = build_rose_window(RoseWindowParams(n, p.a, n - p.r))
    assert g.edge_set() == same.edge_set()
    mirrored = build_rose_window(RoseWindowParams(n, n - p.a, p.r))
    f = reflection(n)
    assert {frozenset((f(u), f(v))) for u, v in map(tuple, g.edge_set())} == mirrored.edge_set()


@settings(max_examples=80, deadline=None)
@given(valid_params())
def test_family_recognition_ignores_signs(p):
    n = p.n
    tags = {recognize_family(RoseWindowParams(n, sa % n, sr % n)) for sa in (p.a, -p.a) for sr in (p.r, -p.r)}
    assert len(tags) == 1


@pytest.mark.parametrize("bad", [(6, 1, 3), (6, 1, 0), (5, 0, 1), (2, 1, 1)])
def test_invalid_parameters_raise(bad):
    with pytest.raises(GraphError):
        build_rose_window(RoseWindowParams(*bad))


def test_smallest_member_sizes():
    g = build_rose_window((3, 2, 1))
    assert (g.num_vertices, g.num_edges) == (6, 12)


def test_four_two_one_is_complete_bipartite():
    g = nx_from_labeled(build_rose_window((4, 2, 1)))
    assert nx.is_isomorphic(g, nx.complete_bipartite_graph(4, 4))


def test_six_five_four_is_family_ii():
    assert recognize_family((6, 5, 4)).kind == "ii"


@pytest.mark.parametrize(
    "params,kind,extra",
    [
        ((4, 2, 1), "i", {}),
        ((10, 4, 1), "iii", {"b": 2}),
        ((12, 5, 10), "iv", {"m": 1, "d": 1}),
        ((7, 3, 1), None, {}),
        ((16, 6, 7), "ii", {"m": 8}),
        ((16, 6, 5), None, {}),
    ],
)
def test_recognize_family(params, kind, extra):
    tag = recognize_family(params)
    assert tag.kind == kind
    for k, v in extra.items():
        assert getattr(tag, k) == v


def test_overlaps_report_every_pattern():
    assert [t.kind for t in family_matches(RoseWindowParams(6, 2, 1))] == ["i", "iii"]
    assert [t.kind for t in family_matches(RoseWindowParams(8, 6, 5))] == ["ii", "iii"]


@pytest.mark.parametrize("n", [5, 7, 10])
def test_family_i_relabeled_pairs_are_twins(n):
    rg = relabel_family(build_rose_window((n, 2, 1)), FamilyTag("i"))
    for i in range(n):
        u, v = rg.point(f"u{i}"), rg.point(f"v{i}")
        assert set(rg.neighbors(u)) == set(rg.neighbors(v))
        want = {rg.point(f"{c}{(i + s) % n}") for c in "uv" for s in (1, -1)}
        assert set(rg.neighbors(u)) == want


def test_family_ii_relabeling_at_three():
    n = 6
    rg = relabel_family(build_rose_window((6, 5, 4)), recognize_family((6, 5, 4)))
    assert rg.point("u0") == x(0, n)
    assert rg.point("v0") == y(5, n)
    assert rg.point("w0") == y(2, n)
    assert rg.point("z0") == x(3, n)


@pytest.mark.parametrize("h", [5, 6, 8, 9])
def test_family_ii_labels_give_the_expected_cycles(h):
    p = RoseWindowParams(2 * h, h - 2, h - 1)
    rg = relabel_family(build_rose_window(p), recognize_family(p))
    for c in "uz":
        assert rg.is_cycle([rg.point(f"{c}{i}") for i in range(h)])
    for i in range(h):
        j = (i + 1) % h
        # every block joins the next one by a perfect matching of four edges
        block = [rg.point(f"{c}{i}") for c in "uvwz"]
        nxt = {rg.point(f"{c}{j}") for c in "uvwz"}
        assert sum(1 for b in block for w in rg.neighbors(b) if w in nxt) == 8


@pytest.mark.parametrize(
    "params",
    [(5, 2, 1), (9, 2, 1), (4, 2, 1), (6, 5, 4), (10, 3, 4), (16, 6, 7), (12, 5, 10), (24, 8, 19), (24, 20, 7), (12, 11, 4), (36, 11, 28)],
)
def test_named_generators_are_automorphisms_of_the_full_group(params):
    p = RoseWindowParams(*params)
    g = build_rose_window(p)
    aut = AutomorphismGroup(g)
    for name, perm in named_generators(p).items():
        assert g.is_automorphism(perm), name
        assert perm in aut, name


def test_family_i_reflection_fixes_u_labels():
    n = 7
    p = RoseWindowParams(n, 2, 1)
    rg = relabel_family(build_rose_window(p), FamilyTag("i"))
    m = named_generators(p)["mu"]
    for i in range(n):
        assert m(rg.point(f"u{i}")) == rg.point(f"u{-i % n}")
        assert m(rg.point(f"v{i}")) == rg.point(f"v{-i % n}")


@pytest.mark.parametrize("h", [5, 6, 7])
def test_family_ii_alpha_is_four_parallel_cycles(h):
    p = RoseWindowParams(2 * h, h - 2, h - 1)
    rg = relabel_family(build_rose_window(p), recognize_family(p))
    alpha = named_generators(p)["alpha"]
    for c in "uvwz":
        for i in range(h):
            assert alpha(rg.point(f"{c}{i}")) == rg.point(f"{c}{(i + 1) % h}")


def test_family_iv_tau_identities():
    p = RoseWindowParams(24, 8, 19)
    gens = named_generators(p)
    tau, rho_, sigma, mu_ = gens["tau"], gens["rho"], gens["sigma"], gens["mu"]
    assert tau * rho_ * tau == rho_ * sigma
    assert tau * mu_ * tau == mu_ * sigma
    assert sigma * mu_ == mu_ * sigma and sigma * tau == tau * sigma


# -- automorphism groups -------------------------------------------------------

VF2_CASES = [(3, 2, 1), (4, 2, 1), (5, 2, 1), (6, 5, 4), (7, 3, 1), (6, 2, 1), (10, 4, 1), (12, 5, 10), (8, 3, 3), (9, 2, 4)]


@pytest.mark.parametrize("params", VF2_CASES)
def test_automorphism_group_agrees_with_vf2(params):
    g = build_rose_window(params)
    aut = AutomorphismGroup(g)
    ref = vf2_automorphisms(*params)
    assert aut.order == len(ref)
    if aut.order <= 5000:
        assert [tuple(r) for r in aut.element_array().tolist()] == list(ref)


@pytest.mark.parametrize("n", range(5, 13))
def test_family_i_order(n):
    assert AutomorphismGroup(build_rose_window((n, 2, 1))).order == n * 2 ** (n + 1)


def test_sizes_of_known_groups():
    assert AutomorphismGroup(build_rose_window((5, 2, 1))).order == 320
    assert AutomorphismGroup(build_rose_window((12, 5, 10))).order == 96
    assert AutomorphismGroup(build_rose_window((6, 5, 4))).order == 48


def test_named_generators_generate_the_family_i_group():
    p = RoseWindowParams(5, 2, 1)
    gens = named_generators(p)
    assert closure([gens["rho"], gens["mu"], gens["sigma0"]]).order == 320


def test_vertex_stabilizer_in_a_one_regular_group():
    aut = AutomorphismGroup(build_rose_window((12, 5, 10)))
    assert aut.stabilizer(x(0, 12)).order == 4


@pytest.mark.parametrize("params", [(10, 4, 1), (16, 6, 1), (12, 5, 10), (36, 11, 28)])
def test_one_regular_groups_fix_arcs(params):
    g = build_rose_window(params)
    aut = AutomorphismGroup(g)
    u, v = g.arcs()[0]
    assert len(aut.arc_mappers((u, v), (u, v))) == 1


def test_arc_transitivity():
    g = build_rose_window((7, 2, 1))
    assert verify_arc_transitivity(g, AutomorphismGroup(g))
    g = build_rose_window((7, 3, 1))
    assert not verify_arc_transitivity(g, AutomorphismGroup(g))
    assert not verify_arc_transitivity(g, closure([Permutation.identity(14)]))


def test_find_isomorphism_respects_prescribed_points():
    g = build_rose_window((6, 5, 4))
    p = find_isomorphism(g, [0, 1], [1, 2])
    assert p is not None and g.is_automorphism(p) and p(0) == 1 and p(1) == 2
    assert find_isomorphism(g, [0], [0]) is not None


def test_vertex_cap():
    with pytest.raises(VertexCapExceeded):
        AutomorphismGroup(build_rose_window((20, 2, 1)), vertex_cap=30)


# -- serialization -------------------------------------------------------------


def test_edge_list_and_dot_exports():
    g = build_rose_window((4, 2, 1))
    lines = g.to_edge_list().strip().splitlines()
    assert len(lines) == 16 and all(line.split()[2] in EDGE_KINDS for line in lines)
    dot = g.to_dot()
    assert dot.startswith("graph") and "color=red" in dot and "color=blue" in dot


def test_json_roundtrip():
    g = build_rose_window((10, 4, 1))
    data = json.loads(g.to_json())
    assert data["schema"] == "rwmaps/1"
    assert (data["n"], data["a"], data["r"]) == (10, 4, 1)
    back = LabeledGraph.from_dict(data)
    assert back.edges == g.edges and back.names == g.names
    with pytest.raises(ValueError):
        LabeledGraph.from_dict({**data, "schema": "other/9"})
