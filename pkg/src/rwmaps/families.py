"""
Constructions of 2_{0,1} maps on the arc-transitive Rose Window families.

All routes end in the same place: a group H acting regularly on arcs, whose
three consistent-cycle orbits are paired up to form candidate maps.  What
differs is where H comes from:

* families (i) and (ii): H is generated by a block subgroup T together with
  the rotation/reflection generators of the family;
* families (iii) and (iv) with one orbit of maps per pair: H is Aut(graph);
* family (iv) with m = 2 (mod 4): H is one of two index-2 subgroups;
* small exceptional cases: H is found by searching Aut(graph).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .automorphisms import AutomorphismGroup
from .cycles import DirectedCycle, canonical_undirected, cycle_census
from .graphs import (
    FamilyTag,
    GraphError,
    LabeledGraph,
    RoseWindowParams,
    build_rose_window,
    family_i_block_perm,
    family_ii_block_perm,
    family_ii_sigma,
    family_matches,
    named_generators,
    recognize_family,
    relabel_family,
    x,
    y,
)
from .maps import (
    MapError,
    MapOnGraph,
    build_map,
    classify,
    map_automorphisms,
    maps_isomorphic,
    TWO_ZERO_ONE,
)
from .perm import GroupTooLarge, Permutation, PermGroup, closure, index, is_klein_four


class CountMismatch(AssertionError):
    pass


# -- block tuples -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class TTuple:
    """Action on the blocks: entry i says what happens inside block i."""

    entries: tuple

    def __len__(self):
        return len(self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def shifted(self, k: int = 1) -> "TTuple":
        e = self.entries
        k %= len(e)
        return TTuple(e[-k:] + e[:-k]) if k else self

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.entries) + ")"


def _periodic(pattern: Sequence[int], n: int) -> TTuple:
    return TTuple(tuple(pattern[i % len(pattern)] for i in range(n)))


SHAPES_I = {
    "T1": [(0,), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
    "T2": [(0,), (0, 1), (1, 0), (1,)],
}
SHAPES_II = {
    "T3": [(0,), (0, 1, 2), (2, 0, 1), (1, 2, 0), (2, 1, 3), (3, 2, 1), (1, 3, 2), (3,)],
    "T4": [(0,), (0, 1, 3, 2), (2, 0, 1, 3), (3, 2, 0, 1), (1, 3, 2, 0), (2, 1), (1, 2), (3,)],
}
_PERIOD = {"T1": 3, "T2": 2, "T3": 3, "T4": 4}


@dataclass
class TSubgroup:
    shape: str
    tuples: frozenset
    group: PermGroup

    @property
    def order(self) -> int:
        return len(self.tuples)

    def elements(self) -> list[Permutation]:
        return self.group.elements()


def shape_tuples(shape: str, n: int) -> frozenset:
    table = SHAPES_I if shape in SHAPES_I else SHAPES_II
    return frozenset(_periodic(p, n) for p in table[shape])


def decode(rg: LabeledGraph, t: TTuple) -> Permutation:
    if rg.family == "i":
        return family_i_block_perm(rg, t.entries)
    return family_ii_block_perm(rg, t.entries)


def in_block_group_ii(t: TTuple) -> bool:
    """Block codes that give automorphisms of the family (ii) graph."""
    e = t.entries
    return all((e[i] >> 1) & 1 == e[i - 1] & 1 for i in range(len(e)))


def _make_t(rg: LabeledGraph, shape: str) -> TSubgroup:
    n = len([k for k in rg.aliases if k.startswith("u")])
    tuples = shape_tuples(shape, n)
    perms = [decode(rg, t) for t in sorted(tuples)]
    for t, p in zip(sorted(tuples), perms):
        if not rg.is_automorphism(p):
            raise AssertionError(f"block tuple {t} is not an automorphism")
    group = closure(perms, name=shape)
    if group.order != len(tuples):
        raise AssertionError(f"{shape} is not closed: order {group.order}")
    return TSubgroup(shape, tuples, group)


def family_i_graph(n: int) -> LabeledGraph:
    p = RoseWindowParams(n, 2, 1)
    return relabel_family(build_rose_window(p), FamilyTag("i"))


def family_ii_graph(h: int) -> LabeledGraph:
    p = RoseWindowParams(2 * h, h + 2, h + 1)
    return relabel_family(build_rose_window(p), FamilyTag("ii", m=h))


def t_subgroups_family_i(n: int, rg: LabeledGraph | None = None) -> list[TSubgroup]:
    rg = family_i_graph(n) if rg is None else rg
    out = []
    if n % 3 == 0:
        out.append(_make_t(rg, "T1"))
    if n % 2 == 0:
        out.append(_make_t(rg, "T2"))
    for t in out:
        if not is_klein_four(t.group):
            raise AssertionError(f"{t.shape} is not a Klein four-group")
    return out


def t_subgroups_family_ii(h: int, rg: LabeledGraph | None = None) -> list[TSubgroup]:
    rg = family_ii_graph(h) if rg is None else rg
    out = []
    if h % 3 == 0:
        out.append(_make_t(rg, "T3"))
    if h % 4 == 0:
        out.append(_make_t(rg, "T4"))
    for t in out:
        if not all(in_block_group_ii(tt) for tt in t.tuples):
            raise AssertionError(f"{t.shape} leaves the block group")
    return out


def face_orbit_from_seed(seed: Sequence[int] | DirectedCycle, t: TSubgroup | Iterable[Permutation]) -> set[tuple]:
    """Undirected images of ``seed`` under every element of ``t``."""
    verts = seed.vertices if isinstance(seed, DirectedCycle) else tuple(seed)
    elems = t.elements() if isinstance(t, TSubgroup) else list(t)
    out = set()
    for g in elems:
        img = tuple(g(v) for v in verts)
        if len(set(img)) != len(img):
            raise AssertionError("image of a cycle is not a cycle")
        out.add(canonical_undirected(img))
    return out


# -- maps from arc-regular groups ---------------------------------------------


@dataclass
class ConstructedMap:
    map: MapOnGraph
    group: PermGroup  # the arc-regular group the faces came from
    route: str
    aut_order: int = 0
    map_class: object = None

    @property
    def face_lengths(self) -> tuple:
        return self.map.distinct_face_lengths()


def is_arc_regular(graph: LabeledGraph, group: PermGroup) -> bool:
    arcs = graph.arcs()
    if group.order != len(arcs):
        return False
    u, v = arcs[0]
    return group.count_mappings([(u, u), (v, v)]) == 1 and len(group.orbit(u)) == graph.num_vertices


def one_regular_maps(graph: LabeledGraph, group: PermGroup, route: str = "arc-regular") -> list[ConstructedMap]:
    """2_{0,1} maps whose faces are two of the three cycle orbits of an arc-regular group."""
    census = cycle_census(group, graph, allow_sampling=False)
    face_sets = []
    for orbit in census.orbits:
        faces = frozenset(orbit.faces())
        if faces not in face_sets:
            face_sets.append(faces)
    out = []
    for f1, f2 in itertools.combinations(face_sets, 2):
        try:
            m = build_map(graph, [f1, f2])
        except MapError:
            continue
        autm = map_automorphisms(m)
        cls = classify(m, autm)
        if cls == TWO_ZERO_ONE:
            out.append(ConstructedMap(m, group, route, autm.order, cls))
    return out


def dedupe_maps(maps: Iterable[ConstructedMap]) -> list[ConstructedMap]:
    out: list[ConstructedMap] = []
    for cm in maps:
        if not any(maps_isomorphic(cm.map, other.map) for other in out):
            out.append(cm)
    return sorted(out, key=lambda c: (c.face_lengths, c.map.faces))


def arc_regular_klein_subgroups(graph: LabeledGraph, aut: PermGroup) -> list[PermGroup]:
    """Every arc-regular subgroup of ``aut`` with Klein four vertex stabilizers.

    Such a group is generated by its stabilizer K of a vertex v together with
    any of its elements taking v to a fixed neighbour w, so it suffices to
    try each Klein K inside Aut_v and each automorphism with v -> w.
    """
    v = 0
    w = graph.neighbors(v)[0]
    narcs = len(graph.arcs())
    stab = aut.stabilizer(v)
    elems = stab.elements()
    nbrs = graph.neighbors(v)
    kleins = set()
    for a, b in itertools.combinations(elems, 2):
        if a.order() != 2 or b.order() != 2 or a * b != b * a:
            continue
        k = frozenset({Permutation.identity(graph.num_vertices), a, b, a * b})
        if len(k) == 4 and len({g(nbrs[0]) for g in k}) == 4:
            kleins.add(k)
    movers = [Permutation(tuple(r)) for r in aut.mappers([(v, w)]).tolist()]
    found: list[PermGroup] = []
    keys = set()
    for k in sorted(kleins, key=sorted):
        for g in movers:
            if any(g in h for h in found if set(k) <= set(h.elements())):
                continue
            try:
                h = closure(list(k) + [g], cap=narcs)
            except GroupTooLarge:
                continue
            if h.order != narcs:
                continue
            key = h.element_array().tobytes()
            if key not in keys:
                keys.add(key)
                found.append(h)
    return found


def generic_maps(graph: LabeledGraph, aut: PermGroup | None = None) -> list[ConstructedMap]:
    """All 2_{0,1} maps by searching for their arc-regular groups inside Aut(graph)."""
    aut = AutomorphismGroup(graph) if aut is None else aut
    out = []
    for h in arc_regular_klein_subgroups(graph, aut):
        out.extend(one_regular_maps(graph, h, route="search"))
    return dedupe_maps(out)


# -- expected counts ------------------------------------------------------------


def expected_family_i(n: int) -> list[tuple]:
    if n == 4:
        return [(4, 8)]
    if gcd(n, 6) == 1:
        return []
    n0 = n % 12
    table = {
        3: [(4, n)],
        9: [(4, n)],
        4: [(4, n), (4, 2 * n)],
        8: [(4, n), (4, 2 * n)],
        2: [(4, n), (4, 2 * n), (n, 2 * n)],
        10: [(4, n), (4, 2 * n), (n, 2 * n)],
        0: [(4, n), (4, n), (4, 2 * n)],
        6: [(4, n), (4, n), (4, 2 * n), (n, 2 * n)],
    }
    return sorted(tuple(sorted(p)) for p in table[n0])


def expected_family_ii(h: int) -> list[tuple]:
    if h == 4:
        return [(4, 8)]
    if gcd(h, 12) <= 2:
        return []
    n0 = h % 12
    if h == 3 or n0 in (3, 9):
        pairs = [(4, h), (4, 2 * h), (h, 2 * h)]
    elif n0 in (4, 6, 8):
        pairs = [(4, h), (4, 2 * h)]
    else:
        pairs = [(4, h), (4, h), (4, 2 * h), (4, 2 * h)]
    return sorted(tuple(sorted(p)) for p in pairs)


def expected_family_iii(m: int, b: int) -> int:
    return 3 if (b * b) % m == 1 % m else 0


def expected_family_iv(m: int) -> int:
    return 2 if m % 4 == 2 else 3


def _check_pairs(found: list[ConstructedMap], expected: list[tuple], what: str):
    got = sorted(c.face_lengths if len(c.face_lengths) == 2 else c.face_lengths * 2 for c in found)
    if got != expected:
        raise CountMismatch(f"{what}: expected face lengths {expected}, constructed {got}")


# -- family (i) ------------------------------------------------------------------


def family_i_seeds(rg: LabeledGraph) -> dict[str, tuple]:
    n = rg.params.n
    return {
        "square": rg.points(["u0", "u1", "v0", "v1"]),
        "n": rg.points([f"u{i}" for i in range(n)]),
        "2n": rg.points([f"u{i}" for i in range(n)] + [f"v{i}" for i in range(n)]),
    }


def family_i_groups(n: int, rg: LabeledGraph | None = None) -> list[tuple[str, PermGroup, tuple]]:
    """(label, arc-regular group, seed face) for every block subgroup of R_n(2,1)."""
    rg = family_i_graph(n) if rg is None else rg
    gens = named_generators(rg.params, FamilyTag("i"))
    rho, mu, sigma0 = gens["rho"], gens["mu"], gens["sigma0"]
    seeds = family_i_seeds(rg)
    out = []
    for t in t_subgroups_family_i(n, rg):
        ts = t.group.generators
        out.append((f"{t.shape}/n", closure(ts + [rho, mu], name=f"<{t.shape},rho,mu>"), seeds["n"]))
        if t.shape == "T2":
            t3 = decode(rg, _periodic((1,), n))
            h = closure(ts + [rho * sigma0, mu * t3 * sigma0], name=f"<{t.shape},rho.sigma0,..>")
            out.append((f"{t.shape}/2n", h, seeds["2n"]))
    return out


def family_i_maps(n: int, check: bool = True) -> list[ConstructedMap]:
    """Every 2_{0,1} map on R_n(2,1), up to isomorphism."""
    if n == 4:
        found = generic_maps(build_rose_window((4, 2, 1)))
    else:
        rg = family_i_graph(n)
        found = []
        for label, h, seed in family_i_groups(n, rg):
            if not is_arc_regular(rg, h):
                raise AssertionError(f"{label}: group of order {h.order} is not arc-regular")
            maps = one_regular_maps(rg, h, route=f"block subgroup {label}")
            if not any(canonical_undirected(seed) in cm.map.faces for cm in maps):
                raise AssertionError(f"{label}: seed face not used by any constructed map")
            found.extend(maps)
        found = dedupe_maps(found)
    if check:
        _check_pairs(found, expected_family_i(n), f"R_{n}(2,1)")
    return found


# -- family (ii) -----------------------------------------------------------------


def family_ii_seeds(rg: LabeledGraph) -> dict[str, tuple]:
    h = rg.params.n // 2
    return {
        "square": rg.points(["u0", "u1", "w0", "v1"]),
        "n": rg.points([f"u{i}" for i in range(h)]),
        "2n": rg.points(
            [f"u{i}" for i in range(h - 1)] + [f"v{h - 1}"] + [f"z{i}" for i in range(h - 1)] + [f"w{h - 1}"]
        ),
    }


def family_ii_groups(h: int, rg: LabeledGraph | None = None) -> list[tuple[str, PermGroup, tuple]]:
    rg = family_ii_graph(h) if rg is None else rg
    gens = named_generators(rg.params, FamilyTag("ii", m=h))
    seeds = family_ii_seeds(rg)
    out = []
    for t in t_subgroups_family_ii(h, rg):
        ts = t.group.generators
        out.append((f"{t.shape}/n", closure(ts + [gens["alpha"], gens["beta"]]), seeds["n"]))
        out.append((f"{t.shape}/2n", closure(ts + [gens["rho"], gens["mu"]]), seeds["2n"]))
    return out


def family_ii_maps(h: int, check: bool = True) -> list[ConstructedMap]:
    """Every 2_{0,1} map on R_2h(h+2, h+1), up to isomorphism."""
    if h in (3, 4):
        found = generic_maps(build_rose_window((2 * h, h + 2, h + 1)))
    else:
        rg = family_ii_graph(h)
        found = []
        for label, grp, seed in family_ii_groups(h, rg):
            if not is_arc_regular(rg, grp):
                raise AssertionError(f"{label}: group of order {grp.order} is not arc-regular")
            maps = one_regular_maps(rg, grp, route=f"block subgroup {label}")
            if not any(canonical_undirected(seed) in cm.map.faces for cm in maps):
                raise AssertionError(f"{label}: seed face not used by any constructed map")
            found.extend(maps)
        found = dedupe_maps(found)
    if check:
        _check_pairs(found, expected_family_ii(h), f"R_{2 * h}({h + 2},{h + 1})")
    return found


def family_ii_identities(h: int) -> dict[str, bool]:
    """Permutation identities among the family (ii) generators."""
    rg = family_ii_graph(h)
    gens = named_generators(rg.params, FamilyTag("ii", m=h))
    alpha = gens["alpha"]
    sig = [family_ii_sigma(rg, i) for i in range(h)]
    return {
        "sigma_i commutes with sigma_i+1": all(sig[i] * sig[(i + 1) % h] == sig[(i + 1) % h] * sig[i] for i in range(h)),
        "alpha = rho sigma_n-1": alpha == gens["rho"] * sig[h - 1],
        "sigma_i = sigma_0 conjugated by alpha^i": all(sig[i] == sig[0] ** (alpha**i) for i in range(h)),
        "alpha is four n-cycles": sorted(len(c) for c in alpha.cycles()) == [h] * 4,
    }


# -- family (iii) ----------------------------------------------------------------


def family_iii_maps(m: int, b: int, r: int) -> list[ConstructedMap]:
    p = RoseWindowParams(2 * m, 2 * b, r)
    tags = family_matches(p)
    if not any(t.kind == "iii" for t in tags):
        raise GraphError(f"{p} does not match the family (iii) pattern")
    if any(t.kind in ("i", "ii") for t in tags):
        raise GraphError(f"{p} also lies in family (i) or (ii)")
    graph = build_rose_window(p)
    aut = AutomorphismGroup(graph)
    if not is_arc_regular(graph, aut):
        raise AssertionError(f"Aut({p}) is not arc-regular")
    return dedupe_maps(one_regular_maps(graph, aut, route="Aut is arc-regular"))


# -- family (iv) -----------------------------------------------------------------


def family_iv_params(m: int, d: int) -> RoseWindowParams:
    n = 12 * m
    if d % n not in (m % n, (-m) % n):
        raise GraphError(f"d must be +-m, got d={d}, m={m}")
    return RoseWindowParams(n, 3 * d + 2, 9 * d + 1)


def family_iv_subgroups(m: int, d: int) -> dict[str, PermGroup]:
    p = family_iv_params(m, d)
    gens = named_generators(p, FamilyTag("iv", m=m, d=d % p.n))
    if "tau" not in gens:
        raise GraphError("the index-two subgroups only exist for m = 2 (mod 4)")
    mu, sigma, rho, tau = gens["mu"], gens["sigma"], gens["rho"], gens["tau"]
    return {"H1": closure([mu, sigma, rho], name="H1"), "H2": closure([mu, sigma, tau * rho], name="H2")}


def family_iv_maps(m: int, d: int) -> list[ConstructedMap]:
    p = family_iv_params(m, d)
    graph = build_rose_window(p)
    aut = AutomorphismGroup(graph)
    if m % 4 != 2:
        if not is_arc_regular(graph, aut):
            raise AssertionError(f"Aut({p}) is not arc-regular")
        return dedupe_maps(one_regular_maps(graph, aut, route="Aut is arc-regular"))
    found = []
    for name, h in family_iv_subgroups(m, d).items():
        if index(aut, h) != 2:
            raise AssertionError(f"{name} does not have index 2")
        if not is_arc_regular(graph, h):
            raise AssertionError(f"{name} is not arc-regular")
        found.extend(one_regular_maps(graph, h, route=name))
    return dedupe_maps(found)


def _walk_by_steps(n: int, start: tuple, steps: Sequence[tuple]) -> tuple:
    """Repeat a pattern of (kind, offset) moves until the start comes back.

    ``start`` is ("x", i); each step moves to ``kind_{j + offset}`` where j is
    the current index.
    """
    kind, j = start
    out = []
    while True:
        for k, off in steps:
            out.append(x(j, n) if kind == "x" else y(j, n))
            kind, j = k, (j + off) % n
        if (kind, j) == start:
            return tuple(out)
        if len(out) > 2 * n:
            raise AssertionError("witness walk does not close")


@dataclass
class WitnessCheck:
    name: str
    cycles: list  # undirected canonical forms C1..C4
    lengths: list
    shunt_ok: bool
    preserved_by: dict = field(default_factory=dict)
    moved_by: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.shunt_ok and all(self.preserved_by.values()) and all(self.moved_by.values())


def family_iv_witnesses(m: int, d: int) -> list[WitnessCheck]:
    """The four-cycle witness sets separating Aut(graph) from H1 and from H2."""
    p = family_iv_params(m, d)
    n, a, r = p.n, p.a, p.r
    gens = named_generators(p, FamilyTag("iv", m=m, d=d % n))
    mu, sigma, rho, tau = gens["mu"], gens["sigma"], gens["rho"], gens["tau"]

    def image(c, g):
        return canonical_undirected(tuple(g(v) for v in c))

    def check(name, c1, shunt, others, keep, excluded):
        cycles = [c1] + others
        faces = {canonical_undirected(c) for c in cycles}
        return WitnessCheck(
            name,
            sorted(faces),
            [len(c) for c in cycles],
            DirectedCycle(c1).is_shunt(shunt),
            {k: {image(c, g) for c in faces} == faces for k, g in keep.items()},
            {k: {image(c, g) for c in faces} != faces for k, g in excluded.items()},
        )

    # H1: x_j x_{j+1} y_{j+1} then on to x_{j+1+a}
    c1 = _walk_by_steps(n, ("x", 0), [("x", 1), ("y", 0), ("x", a)])
    hub = _walk_by_steps(n, ("y", 0), [("y", r)])
    h1 = check(
        "H1",
        c1,
        sigma * rho,
        [tuple(rho(v) for v in c1), tuple((rho * rho)(v) for v in c1), hub],
        {"mu": mu, "sigma": sigma, "rho": rho},
        {"tau": tau},
    )
    # H2: x_j x_{j+1} x_{j+2} y_{j+2} y_{j+2+r} y_{j+2+2r} then x_{j+2+2r+a}
    c1 = _walk_by_steps(n, ("x", 0), [("x", 1), ("x", 1), ("y", 0), ("y", r), ("y", r), ("x", a)])
    tr = tau * rho
    h2 = check(
        "H2",
        c1,
        sigma * tau * rho,
        [tuple(mu(v) for v in c1), tuple(tr(v) for v in c1), tuple((tr * sigma)(v) for v in c1)],
        {"mu": mu, "sigma": sigma, "tau.rho": tr},
        {"rho": rho},
    )
    return [h1, h2]


def family_iv_identities(m: int, d: int) -> dict[str, bool]:
    p = family_iv_params(m, d)
    gens = named_generators(p, FamilyTag("iv", m=m, d=d % p.n))
    mu, sigma, rho = gens["mu"], gens["sigma"], gens["rho"]
    out = {"sigma commutes with mu": sigma * mu == mu * sigma}
    if "tau" in gens:
        tau = gens["tau"]
        out.update(
            {
                "sigma commutes with tau": sigma * tau == tau * sigma,
                "tau mu tau = mu sigma": tau * mu * tau == mu * sigma,
                "tau rho tau = rho sigma": tau * rho * tau == rho * sigma,
            }
        )
    return out


# -- T = N ∩ Aut(M) ------------------------------------------------------------


def block_tuple_of(rg: LabeledGraph, g: Permutation) -> TTuple | None:
    """Block tuple of ``g`` if it fixes every block setwise and acts by a listed code."""
    letters = "uv" if rg.family == "i" else "uvwz"
    nblocks = sum(1 for k in rg.aliases if k.startswith("u"))
    entries = []
    for i in range(nblocks):
        pts = {c: rg.point(f"{c}{i}") for c in letters}
        img = {c: g(pts[c]) for c in letters}
        if set(img.values()) != set(pts.values()):
            return None
        where = {pts[c]: c for c in letters}
        partner = where[img["u"]]
        code = letters.index(partner)
        expected = decode(rg, TTuple(tuple(code if j == i else 0 for j in range(nblocks))))
        if any(expected(pts[c]) != img[c] for c in letters):
            return None
        entries.append(code)
    return TTuple(tuple(entries))


def compute_T(cm: MapOnGraph | ConstructedMap, rg: LabeledGraph | None = None) -> TSubgroup:
    """T = N ∩ Aut(M) as a block-tuple set, matched against the known shapes."""
    m = cm.map if isinstance(cm, ConstructedMap) else cm
    if rg is None:
        tag = recognize_family(m.graph.params)
        rg = relabel_family(m.graph, tag)
    autm = map_automorphisms(m)
    tuples, perms = set(), []
    for g in autm.group.elements():
        t = block_tuple_of(rg, g)
        if t is not None:
            tuples.add(t)
            perms.append(g)
    n = len(next(iter(tuples)))
    shapes = SHAPES_I if rg.family == "i" else SHAPES_II
    for shape in shapes:
        if n % _PERIOD[shape] == 0 and shape_tuples(shape, n) == tuples:
            return TSubgroup(shape, frozenset(tuples), PermGroup.from_elements(perms, name=shape))
    raise AssertionError(f"T = {sorted(map(str, tuples))} matches no known shape")


def family_iv_h1_orbit_checks(m: int, d: int) -> dict[str, bool]:
    """Cycles of H1 through the arc (x_-1, x_0), their shunts, and how tau moves them."""
    p = family_iv_params(m, d)
    n = p.n
    graph = build_rose_window(p)
    gens = named_generators(p, FamilyTag("iv", m=m, d=d % n))
    mu, sigma, rho, tau = gens["mu"], gens["sigma"], gens["rho"], gens["tau"]
    h1 = family_iv_subgroups(m, d)["H1"]
    census = cycle_census(h1, graph, arc=(x(-1, n), x(0, n)), allow_sampling=False)
    by_next = {}
    for orbit in census.orbits:
        walk = orbit.representative.starting_at(x(-1, n))
        by_next[walk[2]] = orbit
    c1, c2, c3 = (by_next.get(v) for v in (x(1, n), y(0, n), y(9 * d - 2, n)))
    found = all(c is not None for c in (c1, c2, c3))
    out = {"three orbits through the arc": found and census.directed_orbits == 3}
    if not found:
        return out
    out["rho shunts C1"] = c1.representative.is_shunt(rho)
    out["rho.sigma shunts C2"] = c2.representative.is_shunt(rho * sigma)
    out["rho.sigma.mu shunts C3"] = c3.representative.is_shunt(rho * sigma * mu)
    out["tau swaps O1 and O2"] = (
        c1.representative.image(tau) in c2.members and c2.representative.image(tau) in c1.members
    )
    out["tau fixes C3"] = c3.representative.image(tau) == c3.representative
    return out


def orbit_witness(m: int, d: int, name: str) -> WitnessCheck:
    """An Hi-invariant cycle set moved by the excluded generator: the Hi-orbit of a cycle."""
    p = family_iv_params(m, d)
    n = p.n
    graph = build_rose_window(p)
    gens = named_generators(p, FamilyTag("iv", m=m, d=d % n))
    h = family_iv_subgroups(m, d)[name]
    excluded = {"H1": ("tau", gens["tau"]), "H2": ("rho", gens["rho"])}[name]
    census = cycle_census(h, graph, allow_sampling=False)
    for orbit in census.orbits:
        faces = orbit.faces()
        moved = {canonical_undirected(tuple(excluded[1](v) for v in f)) for f in faces} != faces
        if moved:
            kept = {
                f"gen{i}": {canonical_undirected(tuple(g(v) for v in f)) for f in faces} == faces
                for i, g in enumerate(h.generators)
            }
            return WitnessCheck(
                f"{name} orbit", sorted(faces), [orbit.length] * len(faces),
                orbit.representative.is_shunt(orbit.shunt), kept, {excluded[0]: True},
            )
    raise AssertionError(f"every {name}-orbit of cycles is preserved by {excluded[0]}")
