"""
Permutations and explicitly enumerated permutation groups.

Points are the integers ``0..N-1``.  All actions are *right* actions: the
image of ``x`` under ``p`` is ``p(x)`` and the product ``p * q`` means
"first ``p``, then ``q``", so ``(p * q)(x) == q(p(x))``.  Conjugation
follows the same convention, ``t ** s == s**-1 * t * s``.

Groups are small enough here (at most a few million elements) that they are
materialized as a sorted ``numpy`` array of image rows.  There is no
Schreier-Sims machinery; automorphism groups of graphs, which can be much
larger, live in :mod:`rwmaps.graphs` and use a search-built stabilizer chain.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

DEFAULT_CAP = 2**24


class GroupTooLarge(RuntimeError):
    pass


def cap_from_env(default: int) -> int:
    """Return ``RWMAPS_CAP`` if set, else ``default``."""
    value = os.environ.get("RWMAPS_CAP")
    if value:
        return int(value)
    return default


def _dtype(degree: int):
    return np.uint8 if degree <= 256 else np.uint16


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{0, ..., N-1}`` stored as its image tuple."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        images = list(range(degree))
        for cyc in cycles:
            cyc = list(cyc)
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    @classmethod
    def from_mapping(cls, mapping: dict, degree: int) -> "Permutation":
        """Permutation that agrees with ``mapping`` and fixes every other point."""
        images = list(range(degree))
        for x, y in mapping.items():
            images[x] = y
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        q = other.images
        return Permutation(tuple(q[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    __invert__ = inverse

    def __pow__(self, k):
        if isinstance(k, Permutation):
            return conjugate(self, k)
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        result = 1
        for cyc in self.cycles():
            result = lcm(result, len(cyc))
        return result

    def cycles(self, include_fixed: bool = False) -> list[tuple]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self, labels: Sequence[str] | None = None) -> str:
        """Cycle notation, e.g. ``(0,1,2)(3,4)``; ``()`` for the identity."""
        name = (lambda x: labels[x]) if labels is not None else str
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(name(x) for x in c) + ")" for c in cycs)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Permutation":
        return cls(tuple(data))

    def __repr__(self):
        return f"Permutation({self.cycle_string()}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` followed by ``q``."""
    return p * q


def conjugate(t: Permutation, by: Permutation) -> Permutation:
    """``by**-1 * t * by``; maps ``x*by`` to ``(x*t)*by``."""
    return by.inverse() * t * by


def parse_cycles(text: str, degree: int) -> Permutation:
    """Inverse of :meth:`Permutation.cycle_string` for integer labels."""
    text = text.strip()
    cycles = []
    for chunk in text.replace(" ", "").split(")"):
        chunk = chunk.lstrip("(")
        if chunk:
            cycles.append([int(x) for x in chunk.split(",")])
    return Permutation.from_cycles(cycles, degree)


def _sorted_rows(arr: np.ndarray) -> np.ndarray:
    if len(arr) <= 1:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


class PermGroup:
    """
    A finite permutation group.

    The group is either given by generators (elements are enumerated on
    demand by breadth-first closure) or directly by its element array.  A
    group may also be *implicit*: an ``order`` and a ``membership`` predicate
    are supplied and elements are never listed unless asked for.
    """

    def __init__(
        self,
        generators: Sequence[Permutation],
        degree: int | None = None,
        *,
        order: int | None = None,
        membership: Callable[[Permutation], bool] | None = None,
        cap: int | None = None,
        name: str | None = None,
    ):
        generators = list(generators)
        if degree is None:
            if not generators:
                raise ValueError("need a degree or at least one generator")
            degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"generator of degree {g.degree} in group of degree {degree}")
        self.degree = degree
        self._generators = generators or [Permutation.identity(degree)]
        self._order = order
        self._membership = membership
        self._elements: np.ndarray | None = None
        self._keys: dict | None = None
        self.cap = cap_from_env(DEFAULT_CAP) if cap is None else cap
        self.name = name

    @classmethod
    def from_elements(cls, elements: np.ndarray | Sequence[Permutation], name: str | None = None) -> "PermGroup":
        """Group whose full element list is already known (closure is checked)."""
        if not isinstance(elements, np.ndarray):
            elements = np.array([p.images for p in elements])
        degree = elements.shape[1]
        arr = _sorted_rows(np.unique(elements.astype(_dtype(degree)), axis=0))
        group = cls([], degree, order=len(arr), name=name)
        group._elements = arr
        group._generators = None
        return group

    # -- elements -----------------------------------------------------------

    @property
    def generators(self) -> list[Permutation]:
        if self._generators is None:
            self._generators = _greedy_generators(self.element_array())
        return self._generators

    def element_array(self) -> np.ndarray:
        if self._elements is None:
            self._elements = _closure_array(self._generators, self.degree, self.cap)
            if self._order is not None and self._order != len(self._elements):
                raise RuntimeError(
                    f"declared order {self._order} but closure has {len(self._elements)} elements"
                )
            self._order = len(self._elements)
        return self._elements

    def elements(self) -> list[Permutation]:
        return [Permutation(tuple(row)) for row in self.element_array().tolist()]

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements())

    @property
    def order(self) -> int:
        if self._order is None:
            self.element_array()
        return self._order

    def __len__(self):
        return self.order

    def _key_index(self) -> dict:
        if self._keys is None:
            arr = self.element_array()
            self._keys = {row.tobytes(): i for i, row in enumerate(arr)}
        return self._keys

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        if self._membership is not None and self._elements is None:
            return self._membership(p)
        row = np.array(p.images, dtype=_dtype(self.degree))
        return row.tobytes() in self._key_index()

    def is_materialized(self) -> bool:
        return self._elements is not None

    # -- actions ------------------------------------------------------------

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = g(x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for x in range(self.degree):
            if x not in seen:
                orb = self.orbit(x)
                seen.update(orb)
                out.append(orb)
        return out

    def stabilizer(self, point: int) -> "PermGroup":
        arr = self.element_array()
        sub = arr[arr[:, point] == point]
        return PermGroup.from_elements(sub, name=f"stab({point})")

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        arr = self.element_array()
        mask = np.ones(len(arr), dtype=bool)
        for x in points:
            mask &= arr[:, x] == x
        return PermGroup.from_elements(arr[mask])

    def mappers(self, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
        """Rows of every element sending ``x`` to ``y`` for all ``(x, y)`` in ``pairs``."""
        arr = self.element_array()
        mask = np.ones(len(arr), dtype=bool)
        for x, y in pairs:
            mask &= arr[:, x] == y
        return arr[mask]

    def arc_mappers(self, source: tuple[int, int], target: tuple[int, int]) -> list[Permutation]:
        """Every element mapping the pair ``source`` onto ``target``."""
        rows = self.mappers([(source[0], target[0]), (source[1], target[1])])
        return [Permutation(tuple(r)) for r in rows.tolist()]

    def find_mapping(self, pairs: Sequence[tuple[int, int]]) -> Permutation | None:
        """Some element with ``x -> y`` for all given pairs, or ``None``."""
        rows = self.mappers(pairs)
        if len(rows) == 0:
            return None
        return Permutation(tuple(rows[0].tolist()))

    def count_mappings(self, pairs: Sequence[tuple[int, int]]) -> int:
        return len(self.mappers(pairs))

    def random_element(self, rng: np.random.Generator) -> Permutation:
        arr = self.element_array()
        return Permutation(tuple(arr[rng.integers(len(arr))].tolist()))

    def check_closed(self) -> bool:
        """Every product and inverse of listed elements is listed."""
        arr = self.element_array()
        keys = self._key_index()
        for g in self.generators:
            prod = np.asarray(g.images, dtype=arr.dtype)[arr]
            if any(row.tobytes() not in keys for row in prod):
                return False
        inv = np.empty_like(arr)
        rows = np.arange(len(arr))[:, None]
        inv[rows, arr] = np.arange(self.degree, dtype=arr.dtype)[None, :]
        return all(row.tobytes() in keys for row in inv)

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        order = self._order if self._order is not None else "?"
        return f"<PermGroup{tag} degree={self.degree} order={order}>"


def _closure_array(generators: Sequence[Permutation], degree: int, cap: int) -> np.ndarray:
    dtype = _dtype(degree)
    gens = [np.asarray(g.images, dtype=dtype) for g in generators]
    ident = np.arange(degree, dtype=dtype)
    seen = {ident.tobytes()}
    rows = [ident]
    frontier = ident[None, :]
    while len(frontier):
        found = []
        for g in gens:
            prod = g[frontier]  # frontier element followed by g
            for row in prod:
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    found.append(row)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"group too large: more than {cap} elements")
        rows.extend(found)
        frontier = np.array(found, dtype=dtype) if found else np.empty((0, degree), dtype=dtype)
    return _sorted_rows(np.array(rows, dtype=dtype))


def _greedy_generators(arr: np.ndarray) -> list[Permutation]:
    if len(arr) == 0:
        raise ValueError("empty group")
    degree = arr.shape[1]
    gens: list[Permutation] = []
    span = {np.arange(degree, dtype=arr.dtype).tobytes()}
    for row in arr:
        if row.tobytes() in span:
            continue
        gens.append(Permutation(tuple(row.tolist())))
        span = {r.tobytes() for r in _closure_array(gens, degree, len(arr))}
        if len(span) == len(arr):
            break
    return gens or [Permutation.identity(degree)]


def closure(generators: Sequence[Permutation], cap: int | None = None, name: str | None = None) -> PermGroup:
    """The group generated by ``generators``, fully enumerated.

    Raises :class:`GroupTooLarge` once more than ``cap`` elements appear.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("closure needs at least one generator")
    group = PermGroup(generators, cap=cap, name=name)
    group.element_array()
    return group


def is_subgroup(h: PermGroup, g: PermGroup) -> bool:
    if h.degree != g.degree:
        return False
    return all(x in g for x in h.generators)


def index(g: PermGroup, h: PermGroup) -> int:
    if not is_subgroup(h, g):
        raise ValueError("index: not a subgroup")
    q, rem = divmod(g.order, h.order)
    if rem:
        raise ValueError(f"index: |H| = {h.order} does not divide |G| = {g.order}")
    return q


def is_klein_four(group: PermGroup) -> bool:
    if group.order != 4:
        return False
    return all(p.order() <= 2 for p in group.elements())
