"""
Consistent cycles of an arc-transitive group action.

A directed cycle is consistent for a group G if some element of G (a shunt)
moves every vertex one step forward along it.  For an arc ``(u, v)`` every
``h`` with ``u·h = v`` traces such a cycle (the ``<h>``-orbit of ``u``), so
enumerating that coset finds every consistent cycle through the arc.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .perm import Permutation, PermGroup, cap_from_env

ENUMERATION_CAP = 2**21
MEMBER_LIMIT = 5000


class EnumerationTooLarge(RuntimeError):
    pass


class InconsistentCycle(ValueError):
    pass


def _min_rotation(seq: Sequence[int]) -> tuple:
    # entries are distinct, so the least rotation starts at the least entry
    seq = tuple(seq)
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def canonical_undirected(seq: Sequence[int]) -> tuple:
    """Lexicographically least rotation over both directions of a cycle."""
    fwd = _min_rotation(seq)
    if len(fwd) > 2 and fwd[-1] < fwd[1]:
        return (fwd[0],) + fwd[:0:-1]
    return fwd


@dataclass(frozen=True, order=True)
class DirectedCycle:
    vertices: tuple

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vertices)
        if len(vs) < 3:
            raise ValueError(f"a cycle needs at least 3 vertices, got {vs}")
        if len(set(vs)) != len(vs):
            raise ValueError(f"repeated vertex in {vs}")
        object.__setattr__(self, "vertices", _min_rotation(vs))

    def __len__(self):
        return len(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices)

    def reverse(self) -> "DirectedCycle":
        return DirectedCycle(self.vertices[::-1])

    def undirected(self) -> tuple:
        return canonical_undirected(self.vertices)

    def image(self, p: Permutation) -> "DirectedCycle":
        return DirectedCycle(tuple(p(v) for v in self.vertices))

    def starting_at(self, v: int) -> tuple:
        i = self.vertices.index(v)
        return self.vertices[i:] + self.vertices[:i]

    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def edges(self) -> set[frozenset]:
        return {frozenset(a) for a in self.arcs()}

    def is_shunt(self, p: Permutation) -> bool:
        vs = self.vertices
        return all(p(vs[i]) == vs[(i + 1) % len(vs)] for i in range(len(vs)))

    def label(self, names: Sequence[str]) -> str:
        return "(" + ",".join(names[v] for v in self.vertices) + ")"


class Chirality(enum.Enum):
    SYMMETRIC = "symmetric"
    CHIRAL = "chiral"


@dataclass
class CycleOrbit:
    representative: DirectedCycle
    shunt: Permutation
    size: int
    chirality: Chirality | None = None
    reversal_witness: Permutation | None = None
    members: frozenset | None = None

    @property
    def length(self) -> int:
        return self.representative.length

    def faces(self) -> set[tuple]:
        """Undirected canonical forms of the members (needs listed members)."""
        if self.members is None:
            raise EnumerationTooLarge(f"orbit of size {self.size} was not listed")
        return {c.undirected() for c in self.members}

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        rep = self.representative
        return {
            "length": rep.length,
            "size": self.size,
            "chirality": self.chirality.value if self.chirality else None,
            "representative": rep.label(names) if names else list(rep.vertices),
            "shunt": self.shunt.cycle_string(names),
        }


def trace(h: Permutation, start: int) -> tuple:
    """The cycle of ``h`` through ``start``, beginning at ``start``."""
    walk = [start]
    x = h(start)
    while x != start:
        walk.append(x)
        x = h(x)
    return tuple(walk)


def find_shunt(group: PermGroup, cycle: DirectedCycle) -> Permutation | None:
    vs = cycle.vertices
    return group.find_mapping([(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))])


def find_aligned_mapping(group: PermGroup, c1: Sequence[int], c2: Sequence[int]) -> Permutation | None:
    """An element sending ``c1[i]`` to ``c2[i]`` for every i."""
    if len(c1) != len(c2):
        return None
    return group.find_mapping(list(zip(c1, c2)))


def _trace_rows(rows: np.ndarray, start: int) -> tuple[np.ndarray, np.ndarray]:
    """Walk each row's cycle through ``start``; return the walks and their lengths."""
    k, n = rows.shape
    idx = np.arange(k)
    walk = np.empty((k, n + 1), dtype=rows.dtype)
    walk[:, 0] = start
    cur = np.full(k, start, dtype=np.intp)
    length = np.zeros(k, dtype=np.int64)
    for step in range(1, n + 1):
        cur = rows[idx, cur].astype(np.intp)
        walk[:, step] = cur
        back = (cur == start) & (length == 0)
        length[back] = step
        if (length > 0).all():
            break
    return walk, length


def _cycle_arrays(group: PermGroup, arc: tuple[int, int], cap: int | None):
    """Distinct cycles through ``arc`` as arrays, keyed by length.

    Returns ``{L: (walks, shunt_rows)}`` where each walk row starts ``u, v``.
    """
    u, v = arc
    cap = cap_from_env(ENUMERATION_CAP) if cap is None else cap
    size = group.count_mappings([(u, v)])
    if size > cap:
        raise EnumerationTooLarge(
            f"enumeration too large; raise cap or reduce n (coset has {size} elements, cap {cap})"
        )
    rows = group.mappers([(u, v)])
    walk, length = _trace_rows(rows, u)
    out = {}
    for L in sorted(set(length.tolist())):
        if L < 3:
            continue
        sel = np.nonzero(length == L)[0]
        walks, first = np.unique(walk[sel, :L], axis=0, return_index=True)
        out[L] = (walks, rows[sel[first]])
    return out


def consistent_cycles_through_arc(
    group: PermGroup, graph, arc: tuple[int, int], cap: int | None = None
) -> list[tuple[DirectedCycle, Permutation]]:
    """Every G-consistent directed cycle traversing ``arc`` forwards, with a shunt.

    Work is proportional to the vertex stabilizer; a coset larger than
    ``cap`` raises :class:`EnumerationTooLarge`.
    """
    if not graph.has_edge(*arc):
        raise ValueError(f"{arc} is not an arc")
    out = []
    for walks, shunts in _cycle_arrays(group, arc, cap).values():
        for seq, h in zip(walks.tolist(), shunts.tolist()):
            out.append((DirectedCycle(tuple(seq)), Permutation(tuple(h))))
    return out


def _row_keys(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    return arr.view(np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))).ravel()


def _components(n: int, src: np.ndarray, dst: np.ndarray) -> list[np.ndarray]:
    adj = coo_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="weak")
    order = np.argsort(labels, kind="stable")
    splits = np.nonzero(np.diff(labels[order]))[0] + 1
    return sorted(np.split(order, splits), key=lambda cl: cl[0])


def _arc_stabilizer_classes(gens: Sequence[Permutation], walks: np.ndarray) -> list[np.ndarray]:
    """Classes of aligned walks under elements fixing their first two points.

    Such elements keep the walks aligned, so images are looked up directly.
    """
    keys = _row_keys(walks)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    src, dst = [], []
    idx = np.arange(len(walks))
    for g in gens:
        img = _row_keys(np.asarray(g.images, dtype=walks.dtype)[walks])
        pos = np.searchsorted(sorted_keys, img)
        pos = np.minimum(pos, len(walks) - 1)
        if not (sorted_keys[pos] == img).all():
            raise ValueError("cycle set not closed under the arc stabilizer")
        src.append(idx)
        dst.append(order[pos])
    if not src:
        return [np.array([i]) for i in idx]
    return _components(len(walks), np.concatenate(src), np.concatenate(dst))


def orbit_members(group: PermGroup, cycle: DirectedCycle, limit: int = MEMBER_LIMIT) -> frozenset | None:
    """All images of ``cycle`` under ``group``; ``None`` if there are more than ``limit``."""
    seen = {cycle}
    queue = [cycle]
    for c in queue:
        for g in group.generators:
            d = c.image(g)
            if d not in seen:
                seen.add(d)
                if len(seen) > limit:
                    return None
                queue.append(d)
    return frozenset(seen)


def orbit_size(group: PermGroup, cycle: DirectedCycle) -> int:
    """|G| / |G_C| where the directed stabilizer acts on C as its rotations."""
    kernel = group.pointwise_stabilizer(cycle.vertices).order
    q, rem = divmod(group.order, cycle.length * kernel)
    if rem:
        raise InconsistentCycle(f"{cycle} is not consistent: rotations do not divide the order")
    return q


def classify_chirality(group: PermGroup, orbit: CycleOrbit) -> Chirality:
    """Fill in ``orbit.chirality`` (and the witness when symmetric)."""
    rep = orbit.representative.vertices
    reverse = (rep[0],) + rep[:0:-1]
    witness = find_aligned_mapping(group, rep, reverse)
    if witness is not None:
        orbit.chirality = Chirality.SYMMETRIC
        orbit.reversal_witness = witness
    else:
        if orbit.members is not None and orbit.representative.reverse() in orbit.members:
            raise AssertionError("reverse listed as a member but no reversing element found")
        orbit.chirality = Chirality.CHIRAL
        orbit.reversal_witness = None
    return orbit.chirality


def _make_orbit(group, cycle, shunt, members_limit) -> CycleOrbit:
    if not cycle.is_shunt(shunt):
        raise InconsistentCycle(f"{cycle} is not rotated by its shunt")
    orbit = CycleOrbit(cycle, shunt, orbit_size(group, cycle))
    if orbit.size <= members_limit:
        orbit.members = orbit_members(group, cycle, members_limit)
        if len(orbit.members) != orbit.size:
            raise AssertionError(f"orbit size {orbit.size} but {len(orbit.members)} members found")
    classify_chirality(group, orbit)
    return orbit


def orbit_partition(
    group: PermGroup, cycles: Iterable[DirectedCycle], members_limit: int = MEMBER_LIMIT
) -> list[CycleOrbit]:
    """Group consistent cycles into G-orbits, each with a verified shunt."""
    orbits: list[CycleOrbit] = []
    for c in sorted(set(cycles)):
        if any(_same_orbit(group, o, c) for o in orbits):
            continue
        shunt = find_shunt(group, c)
        if shunt is None:
            raise InconsistentCycle(f"no shunt for {c}: not a consistent cycle of this group")
        orbits.append(_make_orbit(group, c, shunt, members_limit))
    return orbits


def _same_orbit(group, orbit: CycleOrbit, cycle: DirectedCycle) -> bool:
    if orbit.length != cycle.length:
        return False
    if orbit.members is not None:
        return cycle in orbit.members
    return find_aligned_mapping(group, orbit.representative.vertices, cycle.vertices) is not None


@dataclass
class CycleCensus:
    """The directed consistent-cycle orbits of an arc-transitive group."""

    orbits: list[CycleOrbit]
    arc: tuple[int, int]
    mode: str  # "exhaustive" or "sampled"
    cycles_through_arc: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def symmetric(self) -> int:
        return sum(o.chirality is Chirality.SYMMETRIC for o in self.orbits)

    @property
    def chiral(self) -> int:
        """Undirected chiral orbits: each appears here as two directed orbits."""
        return sum(o.chirality is Chirality.CHIRAL for o in self.orbits) // 2

    @property
    def directed_orbits(self) -> int:
        return len(self.orbits)

    def lengths(self) -> list[int]:
        return sorted(o.length for o in self.orbits)

    def to_dict(self, names=None) -> dict:
        return {
            "mode": self.mode,
            "directed_orbits": self.directed_orbits,
            "s": self.symmetric,
            "c": self.chiral,
            "lengths": self.lengths(),
            "orbits": [o.to_dict(names) for o in self.orbits],
        }


def _sampled_cycles(group, arc, degree_minus_one, rng, max_samples=4000):
    """Random shunts for ``arc`` until every directed orbit has been hit.

    Each directed orbit owns the same share of the coset {h : u·h = v}, and
    there are ``valency - 1`` of them, so sampling stops once that many
    pairwise inequivalent cycles are known.
    """
    u, v = arc
    g0 = group.find_mapping([(u, v)])
    stab = group.stabilizer(u)
    reps: list[tuple[DirectedCycle, Permutation]] = []
    for _ in range(max_samples):
        h = stab.random_element(rng) * g0
        walk = trace(h, u)
        if len(walk) < 3:
            continue
        if any(len(r) == len(walk) and find_aligned_mapping(group, r.starting_at(u), walk) for r, _ in reps):
            continue
        reps.append((DirectedCycle(walk), h))
        if len(reps) == degree_minus_one:
            return reps
    raise RuntimeError(f"sampling found only {len(reps)} cycle orbits after {max_samples} draws")


def cycle_census(
    group: PermGroup,
    graph,
    arc: tuple[int, int] | None = None,
    *,
    cap: int | None = None,
    members_limit: int = MEMBER_LIMIT,
    rng: np.random.Generator | None = None,
    allow_sampling: bool = True,
) -> CycleCensus:
    """Directed consistent-cycle orbits of ``group`` via the cycles through one arc.

    Every orbit of an arc-transitive group meets every arc, so the cycles
    through a single arc contain a representative of each orbit.  When the
    coset is too large to list, shunts are sampled instead.
    """
    if arc is None:
        arc = (0, graph.neighbors(0)[0])
    orbits: list[CycleOrbit] = []
    try:
        arrays = _cycle_arrays(group, arc, cap)
    except EnumerationTooLarge:
        if not allow_sampling:
            raise
        rng = np.random.default_rng(0) if rng is None else rng
        k = graph.degree(arc[0])
        found = _sampled_cycles(group, arc, k - 1, rng)
        for c, h in sorted(found):
            orbits.append(_make_orbit(group, c, h, members_limit))
        orbits.sort(key=lambda o: (o.length, o.representative))
        return CycleCensus(orbits, arc, "sampled", None)
    arc_gens = group.pointwise_stabilizer(arc).generators
    total = 0
    for walks, shunts in arrays.values():
        total += len(walks)
        for cl in _arc_stabilizer_classes(arc_gens, walks):
            i = int(cl[0])
            cycle = DirectedCycle(tuple(walks[i].tolist()))
            orbits.append(_make_orbit(group, cycle, Permutation(tuple(shunts[i].tolist())), members_limit))
    orbits.sort(key=lambda o: (o.length, o.representative))
    return CycleCensus(orbits, arc, "exhaustive", total)


def verify_count_identity(group: PermGroup, graph, **kwargs) -> tuple[int, int, bool]:
    """(s, c, s + 2c == valency - 1) for an arc-transitive ``group``."""
    census = cycle_census(group, graph, **kwargs)
    s, c = census.symmetric, census.chiral
    k = graph.degree(census.arc[0])
    return s, c, s + 2 * c == k - 1
