"""
Maps given by their face cycles, and their flag systems.

A map is a set of cycles of a graph such that every edge lies on exactly two
of them and, at every vertex, the faces glue into a single disc.  Flags are
triples (vertex, edge, face); ``s0``, ``s1`` and ``s2`` change respectively
the vertex, the edge and the face of a flag while keeping the other two.
Map automorphisms are the flag permutations commuting with all three.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .cycles import CycleOrbit, DirectedCycle, canonical_undirected, find_aligned_mapping, find_shunt
from .graphs import SCHEMA, LabeledGraph
from .perm import Permutation, PermGroup, is_klein_four


class MapError(ValueError):
    pass


class NotAMap(MapError):
    pass


class NotASurface(MapError):
    pass


class NonPolytopal(MapError):
    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class NonFreeAction(RuntimeError):
    pass


def _face_edges(face: Sequence[int]) -> list[frozenset]:
    return [frozenset((face[i], face[(i + 1) % len(face)])) for i in range(len(face))]


def _as_faces(items) -> list[tuple]:
    out = []
    for item in items:
        if isinstance(item, CycleOrbit):
            out.extend(item.faces())
        elif isinstance(item, DirectedCycle):
            out.append(item.undirected())
        elif isinstance(item, (set, frozenset, list)) and item and not isinstance(next(iter(item)), int):
            out.extend(_as_faces(item))
        else:
            out.append(canonical_undirected(tuple(item)))
    return out


@dataclass(frozen=True)
class MapOnGraph:
    graph: LabeledGraph = field(compare=False, hash=False, repr=False)
    faces: tuple  # sorted canonical undirected cycles

    def __post_init__(self):
        faces = tuple(sorted({canonical_undirected(f) for f in self.faces}))
        if len(faces) != len(self.faces):
            raise NotAMap("a face is listed twice")
        object.__setattr__(self, "faces", faces)
        self._validate()

    def _validate(self):
        g = self.graph
        cover: dict[frozenset, int] = {}
        for f in self.faces:
            if not g.is_cycle(f):
                raise NotAMap(f"{f} is not a cycle of the graph")
            for e in _face_edges(f):
                cover[e] = cover.get(e, 0) + 1
        for i, j, _ in g.edges:
            k = cover.get(frozenset((i, j)), 0)
            if k != 2:
                raise NotAMap(f"not a map: edge {g.names[i]}{g.names[j]} lies on {k} faces")
        # each vertex: its edges, linked by the corners of the faces, must form one cycle
        corners: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.num_vertices)}
        for f in self.faces:
            L = len(f)
            for i, v in enumerate(f):
                corners[v].append((f[i - 1], f[(i + 1) % L]))
        for v, pairs in corners.items():
            nbrs = g.neighbors(v)
            link = {w: [] for w in nbrs}
            for a, b in pairs:
                link[a].append(b)
                link[b].append(a)
            # every neighbour has two corners, so the link is 2-regular: one cycle iff connected
            seen = {nbrs[0]}
            stack = [nbrs[0]]
            while stack:
                for w in link[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(nbrs):
                raise NotASurface(f"not a surface embedding: faces split at vertex {g.names[v]}")

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    @property
    def num_edges(self) -> int:
        return self.graph.num_edges

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def face_lengths(self) -> list[int]:
        return sorted(len(f) for f in self.faces)

    def distinct_face_lengths(self) -> tuple:
        return tuple(sorted(set(self.face_lengths())))

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @cached_property
    def flags(self) -> "FlagSystem":
        return flag_system(self)

    def image(self, p: Permutation) -> "MapOnGraph":
        return MapOnGraph(self.graph, tuple(tuple(p(v) for v in f) for f in self.faces))

    def to_dict(self) -> dict:
        g = self.graph
        out = {"schema": SCHEMA}
        if g.params is not None:
            out["graph"] = {"n": g.params.n, "a": g.params.a, "r": g.params.r}
        out["faces"] = [list(f) for f in self.faces]
        return out


def build_map(graph: LabeledGraph, face_orbits: Iterable) -> MapOnGraph:
    """Map whose faces are the union of ``face_orbits``.

    Each item may be a :class:`CycleOrbit` with listed members, a set of
    cycles, or a single cycle.
    """
    faces = _as_faces(face_orbits)
    if len(set(faces)) != len(faces):
        raise NotAMap("not a map: some face is taken twice")
    return MapOnGraph(graph, tuple(faces))


@dataclass
class FlagSystem:
    flags: list  # (vertex, edge index, face index)
    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    edge_list: list  # edge index -> (i, j)

    def __len__(self):
        return len(self.flags)

    def involutions(self) -> tuple:
        return self.s0, self.s1, self.s2

    def vertex_of(self) -> np.ndarray:
        return np.array([f[0] for f in self.flags])

    def face_of(self) -> np.ndarray:
        return np.array([f[2] for f in self.flags])

    def is_connected(self) -> bool:
        return len(self.orbit(0, (0, 1, 2))) == len(self.flags)

    def orbit(self, start: int, which: Sequence[int]) -> list[int]:
        gens = [self.involutions()[i] for i in which]
        seen = {start}
        queue = [start]
        for x in queue:
            for s in gens:
                y = int(s[x])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return queue

    def is_orientable(self) -> bool:
        side = np.full(len(self.flags), -1)
        side[0] = 0
        queue = [0]
        for x in queue:
            for s in self.involutions():
                y = int(s[x])
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    queue.append(y)
                elif side[y] == side[x]:
                    return False
        return True

    def spanning_steps(self) -> list[tuple[int, int, int]]:
        """(parent, i, child) steps reaching every flag from flag 0."""
        steps = []
        seen = {0}
        queue = [0]
        for x in queue:
            for i, s in enumerate(self.involutions()):
                y = int(s[x])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
                    steps.append((x, i, y))
        return steps

    def dump(self) -> dict:
        return {"s0": self.s0.tolist(), "s1": self.s1.tolist(), "s2": self.s2.tolist()}


def flag_system(m: MapOnGraph) -> FlagSystem:
    g = m.graph
    edge_list = [(i, j) for i, j, _ in g.edges]
    edge_index = {frozenset(e): k for k, e in enumerate(edge_list)}
    flags = []
    for fi, f in enumerate(m.faces):
        for e in _face_edges(f):
            k = edge_index[e]
            for v in sorted(e):
                flags.append((v, k, fi))
    if len(set(flags)) != len(flags):
        dup = next(t for t in flags if flags.count(t) > 1)
        raise NonPolytopal("flag triple occurs twice", dup)
    index = {t: i for i, t in enumerate(flags)}
    faces_of_edge: dict[int, list[int]] = {}
    for fi, f in enumerate(m.faces):
        for e in _face_edges(f):
            faces_of_edge.setdefault(edge_index[e], []).append(fi)
    n = len(flags)
    s0 = np.empty(n, dtype=np.int64)
    s1 = np.empty(n, dtype=np.int64)
    s2 = np.empty(n, dtype=np.int64)
    for idx, (v, k, fi) in enumerate(flags):
        a, b = edge_list[k]
        w = b if v == a else a
        s0[idx] = index[(w, k, fi)]
        f = m.faces[fi]
        L = len(f)
        pos = f.index(v)
        nb = {f[pos - 1], f[(pos + 1) % L]}
        other = (nb - {w}).pop()
        s1[idx] = index[(v, edge_index[frozenset((v, other))], fi)]
        f1, f2 = faces_of_edge[k]
        s2[idx] = index[(v, k, f2 if fi == f1 else f1)]
    return FlagSystem(flags, s0, s1, s2, edge_list)


def check_flag_axioms(fs: FlagSystem) -> list[str]:
    """Violations of the flag-system axioms (empty when all hold)."""
    problems = []
    ids = np.arange(len(fs))
    for name, s in zip(("s0", "s1", "s2"), fs.involutions()):
        if not (s[s] == ids).all():
            problems.append(f"{name} is not an involution")
        if (s == ids).any():
            problems.append(f"{name} has a fixed point")
    if not (fs.s0[fs.s2] == fs.s2[fs.s0]).all():
        problems.append("s0 and s2 do not commute")
    if not fs.is_connected():
        problems.append("flags are not connected")
    if len(fs) != 4 * len(fs.edge_list):
        problems.append(f"{len(fs)} flags for {len(fs.edge_list)} edges")
    return problems


# -- automorphisms -----------------------------------------------------------


def _flag_morphisms(src: FlagSystem, dst: FlagSystem, candidates: Sequence[int]) -> np.ndarray:
    """Rows: flag maps src -> dst commuting with s0, s1, s2 and sending flag 0 to a candidate."""
    if len(src) != len(dst):
        return np.zeros((0, len(src)), dtype=np.int64)
    cand = np.asarray(candidates, dtype=np.int64)
    img = np.full((len(cand), len(src)), -1, dtype=np.int64)
    img[:, 0] = cand
    d_inv = dst.involutions()
    for parent, i, child in src.spanning_steps():
        img[:, child] = d_inv[i][img[:, parent]]
    ok = np.ones(len(cand), dtype=bool)
    for s_src, s_dst in zip(src.involutions(), d_inv):
        ok &= (img[:, s_src] == s_dst[img]).all(axis=1)
    return img[ok]


@dataclass
class MapAutomorphisms:
    """Aut(M) as a vertex permutation group together with its action on flags."""

    group: PermGroup
    flag_action: np.ndarray  # row k: images of all flags under element k
    vertex_rows: np.ndarray  # row k: the same element on vertices

    @property
    def order(self) -> int:
        return len(self.flag_action)

    def flag_orbit(self, flag: int) -> np.ndarray:
        return np.unique(self.flag_action[:, flag])

    def element_for(self, flag_from: int, flag_to: int) -> Permutation | None:
        hit = np.nonzero(self.flag_action[:, flag_from] == flag_to)[0]
        if len(hit) == 0:
            return None
        return Permutation(tuple(self.vertex_rows[hit[0]].tolist()))


def _vertex_rows(fs: FlagSystem, flag_rows: np.ndarray, num_vertices: int) -> np.ndarray:
    verts = fs.vertex_of()
    rows = np.empty((len(flag_rows), num_vertices), dtype=np.int64)
    # every vertex carries a flag; read the vertex of its image
    first = {}
    for idx, (v, _, _) in enumerate(fs.flags):
        first.setdefault(v, idx)
    cols = np.array([first[v] for v in range(num_vertices)])
    rows[:] = verts[flag_rows[:, cols]]
    return rows


def map_automorphisms(m: MapOnGraph, aut_graph: PermGroup | None = None) -> MapAutomorphisms:
    """Automorphism group of ``m``.

    Without ``aut_graph`` the group is found from the flag system (every
    automorphism is fixed by where it sends one flag).  With ``aut_graph`` it
    is the subgroup of graph automorphisms preserving the face set, which
    needs ``aut_graph`` to be small enough to list.
    """
    fs = m.flags
    nv = m.num_vertices
    if aut_graph is None:
        flag_rows = _flag_morphisms(fs, fs, range(len(fs)))
        vrows = _vertex_rows(fs, flag_rows, nv)
        if len({r.tobytes() for r in vrows}) != len(vrows):
            raise NonFreeAction("distinct flag automorphisms act alike on vertices")
    else:
        arr = aut_graph.element_array().astype(np.int64)
        face_set = set(m.faces)
        keep = [k for k, row in enumerate(arr) if all(canonical_undirected(tuple(row[list(f)])) in face_set for f in m.faces)]
        vrows = arr[keep]
        flag_rows = _induced_flag_action(m, vrows)
    order = np.lexsort(vrows.T[::-1])
    vrows, flag_rows = vrows[order], flag_rows[order]
    group = PermGroup.from_elements(vrows.astype(np.uint16 if nv > 256 else np.uint8), name="Aut(M)")
    return MapAutomorphisms(group, flag_rows, vrows)


def _induced_flag_action(m: MapOnGraph, vrows: np.ndarray) -> np.ndarray:
    fs = m.flags
    edge_index = {frozenset(e): k for k, e in enumerate(fs.edge_list)}
    face_index = {f: i for i, f in enumerate(m.faces)}
    flag_index = {t: i for i, t in enumerate(fs.flags)}
    out = np.empty((len(vrows), len(fs)), dtype=np.int64)
    for r, row in enumerate(vrows.tolist()):
        for idx, (v, k, fi) in enumerate(fs.flags):
            a, b = fs.edge_list[k]
            e2 = edge_index[frozenset((row[a], row[b]))]
            f2 = face_index[canonical_undirected(tuple(row[x] for x in m.faces[fi]))]
            out[r, idx] = flag_index[(row[v], e2, f2)]
    return out


def check_free(autm: MapAutomorphisms) -> bool:
    """No non-identity automorphism fixes a flag."""
    ids = np.arange(autm.flag_action.shape[1])
    nontrivial = ~(autm.flag_action == ids).all(axis=1)
    return not (autm.flag_action[nontrivial] == ids).any()


def check_equivariance(m: MapOnGraph, autm: MapAutomorphisms) -> bool:
    """(flag·a)^i == (flag^i)·a for every automorphism, flag and i."""
    rows = autm.flag_action
    return all((rows[:, s] == s[rows]).all() for s in m.flags.involutions())


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class MapClass:
    orbits: int
    adjacency: frozenset | None = None  # the set I for two-orbit maps

    @property
    def kind(self) -> str:
        if self.orbits == 1:
            return "reflexible"
        if self.orbits == 2:
            return "two-orbit"
        return "k-orbit"

    def is_two_orbit(self, indices: Iterable[int] | None = None) -> bool:
        if self.orbits != 2:
            return False
        return indices is None or self.adjacency == frozenset(indices)

    @property
    def label(self) -> str:
        if self.orbits == 1:
            return "reflexible"
        if self.orbits == 2:
            if not self.adjacency:
                return "2"
            return "2_{" + ",".join(str(i) for i in sorted(self.adjacency)) + "}"
        return f"{self.orbits}-orbit"

    def __str__(self):
        return self.label


TWO_ZERO_ONE = MapClass(2, frozenset({0, 1}))


def classify(m: MapOnGraph, autm: MapAutomorphisms | None = None) -> MapClass:
    autm = map_automorphisms(m) if autm is None else autm
    if not check_free(autm):
        raise NonFreeAction("Aut(M) does not act freely on flags")
    nflags = len(m.flags)
    k, rem = divmod(nflags, autm.order)
    if rem:
        raise NonFreeAction(f"|Aut(M)| = {autm.order} does not divide {nflags}")
    if k != 2:
        return MapClass(k)
    orbit = set(autm.flag_orbit(0).tolist())
    adj = frozenset(i for i, s in enumerate(m.flags.involutions()) if int(s[0]) in orbit)
    return MapClass(2, adj)


def map_type(m: MapOnGraph) -> str:
    lengths = m.distinct_face_lengths()
    valency = max(m.graph.degree(v) for v in range(m.num_vertices))
    if len(lengths) == 1:
        return f"{{{lengths[0]}, {valency}}}"
    return "{" + " over ".join(str(x) for x in lengths) + f", {valency}}}"


@dataclass(frozen=True)
class MapInvariants:
    V: int
    E: int
    F: int
    euler: int
    type: str
    face_lengths: tuple
    orientable: bool


def map_invariants(m: MapOnGraph) -> MapInvariants:
    return MapInvariants(
        m.num_vertices,
        m.num_edges,
        m.num_faces,
        m.euler_characteristic(),
        map_type(m),
        m.distinct_face_lengths(),
        m.flags.is_orientable(),
    )


def face_orbits(m: MapOnGraph, autm: MapAutomorphisms) -> list[list[int]]:
    """Face indices grouped by Aut(M)-orbit."""
    fs = m.flags
    face_of = fs.face_of()
    first = {}
    for idx, (_, _, fi) in enumerate(fs.flags):
        first.setdefault(fi, idx)
    label = {}
    groups = []
    for fi in range(m.num_faces):
        if fi in label:
            continue
        imgs = sorted(set(face_of[autm.flag_action[:, first[fi]]].tolist()))
        for x in imgs:
            label[x] = len(groups)
        groups.append(imgs)
    return groups


def umbrella(m: MapOnGraph, v: int) -> list[int]:
    """Faces around ``v`` in rotational order."""
    fs = m.flags
    start = next(i for i, t in enumerate(fs.flags) if t[0] == v)
    out = []
    x = start
    while True:
        out.append(fs.flags[x][2])
        x = int(fs.s1[fs.s2[x]])
        if x == start:
            break
    return out


def check_alternation(m: MapOnGraph, autm: MapAutomorphisms) -> bool:
    """Faces from the two Aut(M)-orbits alternate around every vertex."""
    groups = face_orbits(m, autm)
    if len(groups) != 2:
        return False
    which = {f: k for k, grp in enumerate(groups) for f in grp}
    for v in range(m.num_vertices):
        ring = [which[f] for f in umbrella(m, v)]
        if any(ring[i] == ring[(i + 1) % len(ring)] for i in range(len(ring))):
            return False
    return True


def check_no_shared_corners(m: MapOnGraph) -> bool:
    """No two faces share two consecutive edges."""
    seen = set()
    for f in m.faces:
        L = len(f)
        for i in range(L):
            corner = (f[i], frozenset((f[i - 1], f[(i + 1) % L])))
            if corner in seen:
                return False
            seen.add(corner)
    return True


def check_one_step_rotations(m: MapOnGraph, autm: MapAutomorphisms) -> bool:
    """Every face is rotated one step by some automorphism."""
    fs = m.flags
    first = {}
    for idx, (_, _, fi) in enumerate(fs.flags):
        first.setdefault(fi, idx)
    for fi, x in first.items():
        target = int(fs.s1[fs.s0[x]])
        if not (autm.flag_action[:, x] == target).any():
            return False
    return True


def check_symmetric_consistent_faces(m: MapOnGraph, autm: MapAutomorphisms) -> bool:
    """Each face boundary is a consistent cycle of Aut(M) that Aut(M) can also reverse."""
    group = autm.group
    for f in m.faces:
        cycle = DirectedCycle(f)
        shunt = find_shunt(group, cycle)
        if shunt is None or not cycle.is_shunt(shunt):
            return False
        rev = (f[0],) + f[:0:-1]
        if find_aligned_mapping(group, f, rev) is None:
            return False
    return True


def check_klein_stabilizers(m: MapOnGraph, autm: MapAutomorphisms) -> bool:
    return all(is_klein_four(autm.group.stabilizer(v)) for v in range(m.num_vertices))


# -- isomorphism and Petrie duality -----------------------------------------


def flag_systems_isomorphic(a: FlagSystem, b: FlagSystem) -> bool:
    return len(_flag_morphisms(a, b, range(len(b)))) > 0


def maps_isomorphic(m1: MapOnGraph, m2: MapOnGraph) -> bool:
    """True iff some flag bijection intertwines the two flag systems."""
    if m1.num_faces != m2.num_faces or m1.face_lengths() != m2.face_lengths():
        return False
    return flag_systems_isomorphic(m1.flags, m2.flags)


def maps_isomorphic_by_graph(m1: MapOnGraph, m2: MapOnGraph, aut_graph: PermGroup) -> bool:
    """True iff some graph automorphism carries the faces of ``m1`` onto those of ``m2``."""
    target = set(m2.faces)
    if len(target) != m1.num_faces:
        return False
    for row in aut_graph.element_array().tolist():
        if all(canonical_undirected(tuple(row[v] for v in f)) in target for f in m1.faces):
            return True
    return False


@dataclass
class PetrieWalks:
    walks: list  # closed walks, as vertex sequences
    simple: bool


def petrie_walks(m: MapOnGraph) -> PetrieWalks:
    """Petrie polygons of ``m``: orbits of <s0·s2, s1> on flags."""
    fs = m.flags
    s02 = fs.s0[fs.s2]
    seen = np.zeros(len(fs), dtype=bool)
    walks = []
    for start in range(len(fs)):
        if seen[start]:
            continue
        walk = []
        x = start
        while True:
            seen[x] = True
            seen[fs.s1[x]] = True
            walk.append(fs.flags[x][0])
            y = int(s02[x])
            seen[y] = True
            x = int(fs.s1[y])
            if x == start:
                break
        walks.append(tuple(walk))
    simple = all(len(set(w)) == len(w) and len(w) >= 3 for w in walks)
    return PetrieWalks(walks, simple)


class NonPolytopalPetrial(NonPolytopal):
    pass


def petrie_dual(m: MapOnGraph) -> MapOnGraph:
    """The Petrial; raises :class:`NonPolytopalPetrial` (carrying the walks) if a walk is not a cycle."""
    pw = petrie_walks(m)
    if not pw.simple:
        raise NonPolytopalPetrial("Petrial not polytopal: a Petrie polygon revisits a vertex", pw)
    faces = [canonical_undirected(w) for w in pw.walks]
    if len(set(faces)) != len(faces):
        raise NonPolytopalPetrial("Petrial not polytopal: two Petrie polygons coincide", pw)
    return MapOnGraph(m.graph, tuple(faces))


def petrie_flag_system(fs: FlagSystem) -> FlagSystem:
    """The Petrial at flag level: (s0·s2, s1, s2), always defined."""
    return FlagSystem(fs.flags, fs.s0[fs.s2], fs.s1.copy(), fs.s2.copy(), fs.edge_list)


# -- serialization -----------------------------------------------------------


def map_to_dict(m: MapOnGraph, cls: MapClass | None = None) -> dict:
    inv = map_invariants(m)
    out = m.to_dict()
    out.update(
        {
            "class": cls.label if cls else None,
            "type": inv.type,
            "V": inv.V,
            "E": inv.E,
            "F": inv.F,
            "euler": inv.euler,
            "orientable": inv.orientable,
        }
    )
    return out


def map_to_json(m: MapOnGraph, cls: MapClass | None = None) -> str:
    return json.dumps(map_to_dict(m, cls), sort_keys=True)
