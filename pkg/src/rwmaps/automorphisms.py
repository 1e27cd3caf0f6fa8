"""
Graph automorphisms by individualization and refinement.

The full group is stored as a stabilizer chain: a base ``b_0, b_1, ...`` and
for each level a transversal of the orbit of ``b_i`` under the pointwise
stabilizer of the earlier base points.  Transversal elements are found with a
backtracking search over equitable colorings.  The group order is the product
of the transversal sizes, and elements are only materialized on request.
"""

from __future__ import annotations

import os
from collections import Counter
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .graphs import LabeledGraph
from .perm import GroupTooLarge, Permutation, PermGroup, _dtype

DEFAULT_VERTEX_CAP = 96


class VertexCapExceeded(RuntimeError):
    pass


def vertex_cap_from_env(default: int = DEFAULT_VERTEX_CAP) -> int:
    raw = os.environ.get("RWMAPS_VERTEX_CAP")
    return int(raw) if raw else default


def _refine(adj, left, right=None):
    """Jointly refine two colorings to equitable ones.

    Returns ``None`` if the two sides stop looking alike, which proves no
    color-preserving isomorphism exists between them.
    """
    n = len(adj)
    ncolors = len(set(left))
    while True:
        sl = [(left[v], tuple(sorted(left[w] for w in adj[v]))) for v in range(n)]
        if right is not None:
            sr = [(right[v], tuple(sorted(right[w] for w in adj[v]))) for v in range(n)]
            if Counter(sl) != Counter(sr):
                return None
        table = {s: i for i, s in enumerate(sorted(set(sl)))}
        left = [table[s] for s in sl]
        if right is not None:
            right = [table[s] for s in sr]
        if len(table) == ncolors:
            return left, right
        ncolors = len(table)


def _target_cell(colors):
    counts = Counter(colors)
    best = None
    for c, k in counts.items():
        if k > 1 and (best is None or (k, c) < best):
            best = (k, c)
    return None if best is None else best[1]


def _individualize(colors, v):
    out = list(colors)
    out[v] = max(colors) + 1
    return out


def _initial_colors(graph: LabeledGraph, points: Sequence[int]):
    colors = [graph.degree(v) for v in range(graph.num_vertices)]
    for i, p in enumerate(points):
        colors[p] = 1000 + i
    return colors


def find_isomorphism(graph: LabeledGraph, sources: Sequence[int], targets: Sequence[int]) -> Permutation | None:
    """An automorphism sending ``sources[i]`` to ``targets[i]`` for every i, or None."""
    if len(sources) != len(targets):
        raise ValueError("sources and targets differ in length")
    adj = graph.adjacency
    left = _initial_colors(graph, sources)
    right = _initial_colors(graph, targets)
    res = _refine(adj, left, right)
    if res is None:
        return None
    return _extend(graph, *res)


def _extend(graph, left, right):
    adj = graph.adjacency
    cell = _target_cell(left)
    if cell is None:
        where = {c: v for v, c in enumerate(right)}
        images = tuple(where[c] for c in left)
        return Permutation(images) if graph.is_automorphism(images) else None
    xv = left.index(cell)
    for yv in [v for v, c in enumerate(right) if c == cell]:
        res = _refine(adj, _individualize(left, xv), _individualize(right, yv))
        if res is None:
            continue
        found = _extend(graph, *res)
        if found is not None:
            return found
    return None


class AutomorphismGroup(PermGroup):
    """Automorphisms of ``graph`` fixing each point of ``fixed``."""

    def __init__(self, graph: LabeledGraph, fixed: Iterable[int] = (), *, cap=None, vertex_cap=None, name=None):
        vertex_cap = vertex_cap_from_env() if vertex_cap is None else vertex_cap
        if graph.num_vertices > vertex_cap:
            raise VertexCapExceeded(
                f"graph has {graph.num_vertices} vertices, cap is {vertex_cap}; raise RWMAPS_VERTEX_CAP"
            )
        if not graph.is_connected():
            raise ValueError("graph is not connected")
        self.graph = graph
        self.fixed = tuple(fixed)
        self.vertex_cap = vertex_cap
        self._chain = None
        self._strong = None
        super().__init__(
            [],
            graph.num_vertices,
            membership=self._is_member,
            cap=cap,
            name=name or "Aut",
        )

    def _is_member(self, p: Permutation) -> bool:
        return self.graph.is_automorphism(p) and all(p(f) == f for f in self.fixed)

    # -- stabilizer chain ---------------------------------------------------

    def _build_chain(self):
        graph = self.graph
        adj = graph.adjacency
        colors, _ = _refine(adj, _initial_colors(graph, self.fixed))
        base, cells = [], []
        while True:
            cell = _target_cell(colors)
            if cell is None:
                break
            b = colors.index(cell)
            base.append(b)
            cells.append([v for v, c in enumerate(colors) if c == cell])
            colors, _ = _refine(adj, _individualize(colors, b))
        strong: list[Permutation] = []
        levels = [None] * len(base)
        for i in reversed(range(len(base))):
            prefix = self.fixed + tuple(base[:i])
            trans = self._transversal(base[i], strong)
            for w in cells[i]:
                if w in trans:
                    continue
                g = find_isomorphism(graph, prefix + (base[i],), prefix + (w,))
                if g is not None:
                    strong.append(g)
                    trans = self._transversal(base[i], strong)
            levels[i] = (base[i], trans)
        self._chain = levels
        self._strong = strong

    def _transversal(self, point, gens):
        trans = {point: Permutation.identity(self.degree)}
        queue = [point]
        for p in queue:
            tp = trans[p]
            for g in gens:
                q = g(p)
                if q not in trans:
                    trans[q] = tp * g
                    queue.append(q)
        return trans

    @property
    def chain(self):
        if self._chain is None:
            self._build_chain()
        return self._chain

    @property
    def base(self) -> tuple:
        return tuple(b for b, _ in self.chain)

    @property
    def generators(self) -> tuple:
        self.chain
        return tuple(self._strong) if self._strong else (Permutation.identity(self.degree),)

    @property
    def order(self) -> int:
        return prod(len(t) for _, t in self.chain)

    def __len__(self):
        return self.order

    def element_array(self) -> np.ndarray:
        if self._elements is None:
            cap = self.cap
            if self.order > cap:
                raise GroupTooLarge(f"group of order {self.order} exceeds cap {cap}; raise RWMAPS_CAP")
            n = self.degree
            elems = np.arange(n, dtype=_dtype(n))[None, :]
            for _, trans in reversed(self.chain):
                reps = list(trans.values())
                blocks = [np.asarray(t.images, dtype=elems.dtype)[elems] for t in reps]
                elems = np.concatenate(blocks)
            order = np.lexsort(elems.T[::-1])
            self._elements = elems[order]
        return self._elements

    def __contains__(self, p) -> bool:
        return self._is_member(p)

    # -- derived groups and searches ---------------------------------------

    def stabilizer(self, point: int) -> "AutomorphismGroup":
        return self.pointwise_stabilizer((point,))

    def pointwise_stabilizer(self, points: Iterable[int]) -> "AutomorphismGroup":
        pts = self.fixed + tuple(p for p in points if p not in self.fixed)
        return AutomorphismGroup(self.graph, pts, cap=self.cap, vertex_cap=self.vertex_cap)

    def find_mapping(self, pairs) -> Permutation | None:
        pairs = list(pairs)
        sources = self.fixed + tuple(s for s, _ in pairs)
        targets = self.fixed + tuple(t for _, t in pairs)
        return find_isomorphism(self.graph, sources, targets)

    def mappers(self, pairs) -> np.ndarray:
        pairs = list(pairs)
        g0 = self.find_mapping(pairs)
        n = self.degree
        if g0 is None:
            return np.zeros((0, n), dtype=_dtype(n))
        k = self.pointwise_stabilizer(s for s, _ in pairs)
        return np.asarray(g0.images, dtype=_dtype(n))[k.element_array()]

    def count_mappings(self, pairs) -> int:
        pairs = list(pairs)
        if self.find_mapping(pairs) is None:
            return 0
        return self.pointwise_stabilizer(s for s, _ in pairs).order

    def random_element(self, rng) -> Permutation:
        out = Permutation.identity(self.degree)
        for _, trans in reversed(self.chain):
            reps = list(trans.values())
            out = out * reps[int(rng.integers(len(reps)))]
        return out


def automorphism_group(graph: LabeledGraph, **kwargs) -> AutomorphismGroup:
    return AutomorphismGroup(graph, **kwargs)


def verify_arc_transitivity(graph: LabeledGraph, group: PermGroup) -> bool:
    """True iff ``group`` has a single orbit on the arcs of ``graph``."""
    arcs = graph.arcs()
    start = arcs[0]
    seen = {start}
    queue = [start]
    gens = group.generators
    for u, v in queue:
        for g in gens:
            arc = (g(u), g(v))
            if arc not in seen:
                seen.add(arc)
                queue.append(arc)
    return len(seen) == len(arcs)

