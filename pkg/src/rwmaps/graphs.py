"""
Rose Window graphs R_n(a, r).

Vertex ``x_i`` is point ``i`` and ``y_i`` is point ``n + i``.  Alternative
labelings used for particular families (``u_i, v_i`` for R_n(2,1) and
``u_i, v_i, w_i, z_i`` for R_2n(n+2, n+1)) are stored as aliases on top of
these points; points are never renumbered, so permutations stay comparable
across labelings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .perm import Permutation

EDGE_KINDS = ("rim", "hub", "in_spoke", "out_spoke")
DOT_COLORS = {"rim": "red", "hub": "gold", "in_spoke": "green", "out_spoke": "blue"}
SCHEMA = "rwmaps/1"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class RoseWindowParams:
    n: int
    a: int
    r: int

    def __post_init__(self):
        n = self.n
        if n < 3:
            raise GraphError(f"n must be at least 3, got {n}")
        object.__setattr__(self, "a", self.a % n)
        object.__setattr__(self, "r", self.r % n)
        if self.r == 0:
            raise GraphError("r must be nonzero mod n")
        if 2 * self.r == n:
            raise GraphError("r = n/2 is not allowed")

    def normalized(self) -> "RoseWindowParams":
        """Representative with a <= n/2 and r < n/2 (same graph up to isomorphism)."""
        n = self.n
        return RoseWindowParams(n, min(self.a, n - self.a) if self.a else 0, min(self.r, n - self.r))

    def sign_variants(self) -> list[tuple[int, int]]:
        n = self.n
        return sorted({(sa * self.a % n, sr * self.r % n) for sa in (1, -1) for sr in (1, -1)})

    def __str__(self):
        return f"R_{self.n}({self.a},{self.r})"


@dataclass
class LabeledGraph:
    """A simple graph on points ``0..N-1`` with named vertices and tagged edges."""

    names: tuple
    edges: tuple  # (i, j, kind)
    params: RoseWindowParams | None = None
    aliases: dict = field(default_factory=dict)
    family: str | None = None

    def __post_init__(self):
        nv = len(self.names)
        adj = [set() for _ in range(nv)]
        for i, j, _ in self.edges:
            if i == j:
                raise GraphError(f"loop at {self.names[i]}")
            if j in adj[i]:
                raise GraphError(f"not simple: repeated edge {self.names[i]}{self.names[j]}")
            adj[i].add(j)
            adj[j].add(i)
        self.adjacency = tuple(tuple(sorted(s)) for s in adj)
        self._edge_kind = {}
        for i, j, kind in self.edges:
            self._edge_kind[(i, j)] = kind
            self._edge_kind[(j, i)] = kind
        self._index = {name: i for i, name in enumerate(self.names)}

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]], names=None) -> "LabeledGraph":
        names = tuple(names) if names is not None else tuple(str(i) for i in range(num_vertices))
        return cls(names, tuple((i, j, "edge") for i, j in edges))

    @property
    def num_vertices(self) -> int:
        return len(self.names)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_kind

    def edge_kind(self, u: int, v: int) -> str:
        return self._edge_kind[(u, v)]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_vertices) for v in self.adjacency[u]]

    def edge_set(self) -> set[frozenset]:
        return {frozenset((i, j)) for i, j, _ in self.edges}

    def point(self, label: str) -> int:
        """Point for a vertex name (``x3``) or an alias (``u3``)."""
        if label in self.aliases:
            return self.aliases[label]
        return self._index[label]

    def points(self, labels: Iterable[str]) -> tuple:
        return tuple(self.point(s) for s in labels)

    def label(self, v: int, prefer_alias: bool = False) -> str:
        if prefer_alias and self.aliases:
            for name, p in self.aliases.items():
                if p == v:
                    return name
        return self.names[v]

    def is_automorphism(self, p: Permutation | Sequence[int]) -> bool:
        images = p.images if isinstance(p, Permutation) else tuple(p)
        if len(images) != self.num_vertices:
            return False
        return all((images[i], images[j]) in self._edge_kind for i, j, _ in self.edges)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices

    def is_cycle(self, seq: Sequence[int]) -> bool:
        """``seq`` is a closed walk through distinct vertices of length >= 3."""
        if len(seq) < 3 or len(set(seq)) != len(seq):
            return False
        return all(self.has_edge(seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq)))

    # -- export -------------------------------------------------------------

    def to_edge_list(self) -> str:
        return "".join(f"{self.names[i]} {self.names[j]} {kind}\n" for i, j, kind in self.edges)

    def to_dot(self) -> str:
        name = str(self.params) if self.params else "G"
        lines = [f'graph "{name}" {{']
        for v in self.names:
            lines.append(f"  {v};")
        for i, j, kind in self.edges:
            color = DOT_COLORS.get(kind, "black")
            lines.append(f'  {self.names[i]} -- {self.names[j]} [color={color}, label="{kind}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA}
        if self.params is not None:
            out.update(n=self.params.n, a=self.params.a, r=self.params.r)
        out["vertices"] = list(self.names)
        out["edges"] = [[i, j, kind] for i, j, kind in self.edges]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledGraph":
        if data.get("schema") != SCHEMA:
            raise GraphError(f"unknown schema {data.get('schema')!r}")
        params = None
        if "n" in data:
            params = RoseWindowParams(data["n"], data["a"], data["r"])
        edges = tuple((int(i), int(j), str(k)) for i, j, k in data["edges"])
        return cls(tuple(data["vertices"]), edges, params)


def x(i: int, n: int) -> int:
    return i % n


def y(i: int, n: int) -> int:
    return n + i % n


def build_rose_window(p: RoseWindowParams | tuple) -> LabeledGraph:
    if not isinstance(p, RoseWindowParams):
        p = RoseWindowParams(*p)
    n, a, r = p.n, p.a, p.r
    if a == 0:
        raise GraphError(f"{p} is not simple: in-spokes and out-spokes coincide")
    names = tuple(f"x{i}" for i in range(n)) + tuple(f"y{i}" for i in range(n))
    edges = []
    for i in range(n):
        edges.append((x(i, n), x(i + 1, n), "rim"))
    for i in range(n):
        edges.append((y(i, n), y(i + r, n), "hub"))
    for i in range(n):
        edges.append((x(i, n), y(i, n), "in_spoke"))
    for i in range(n):
        edges.append((x(i, n), y(i - a, n), "out_spoke"))
    return LabeledGraph(names, tuple(edges), p)


# -- families ---------------------------------------------------------------


@dataclass(frozen=True)
class FamilyTag:
    """One of the four arc-transitive families, or ``kind=None``.

    ``m``, ``b`` and ``d`` carry the family parameters: ``m`` is the half
    order for families (ii)/(iii) and ``n/12`` for family (iv).
    """

    kind: str | None
    m: int | None = None
    b: int | None = None
    d: int | None = None

    @property
    def name(self) -> str:
        return {
            "i": "FamilyI",
            "ii": "FamilyII",
            "iii": "FamilyIII",
            "iv": "FamilyIV",
            None: "NotArcTransitive",
        }[self.kind]

    @property
    def arc_transitive(self) -> bool:
        return self.kind is not None

    def __str__(self):
        extra = ", ".join(f"{k}={v}" for k, v in (("m", self.m), ("b", self.b), ("d", self.d)) if v is not None)
        return f"{self.name}({extra})" if extra else self.name


NOT_ARC_TRANSITIVE = FamilyTag(None)
_PRIORITY = {"i": 0, "ii": 1, "iii": 2, "iv": 3}


def family_matches(p: RoseWindowParams) -> list[FamilyTag]:
    """Every family pattern that (n, +-a, +-r) satisfies."""
    n = p.n
    variants = p.sign_variants()
    found = []
    if (2 % n, 1) in variants:
        found.append(FamilyTag("i"))
    if n % 2 == 0:
        m = n // 2
        if ((m - 2) % n, (m - 1) % n) in variants:
            found.append(FamilyTag("ii", m=m))
        for a, r in variants:
            if a % 2:
                continue
            b = (a // 2) % m
            if (b * b) % m not in (1 % m, (m - 1) % m):
                continue
            if r == 1 or (r == m - 1 and m % 2 == 0):
                tag = FamilyTag("iii", m=m, b=min(b, m - b) if b else 0)
                if tag not in found:
                    found.append(tag)
    if n % 12 == 0:
        m = n // 12
        if ((3 * m + 2) % n, (3 * m - 1) % n) in variants:
            found.append(FamilyTag("iv", m=m, d=m))
        if ((3 * m - 2) % n, (3 * m + 1) % n) in variants:
            found.append(FamilyTag("iv", m=m, d=(11 * m) % n))
    return sorted(found, key=lambda t: (_PRIORITY[t.kind], t.m or 0, t.b or 0, t.d or 0))


def recognize_family(p: RoseWindowParams | tuple) -> FamilyTag:
    """Canonical family (priority i > ii > iii > iv), or the not-arc-transitive tag."""
    if not isinstance(p, RoseWindowParams):
        p = RoseWindowParams(*p)
    found = family_matches(p)
    return found[0] if found else NOT_ARC_TRANSITIVE


def reflection(n: int) -> Permutation:
    """The isomorphism R_n(a, r) -> R_n(-a, r), x_i -> x_-i, y_i -> y_-i."""
    return Permutation(tuple(x(-i, n) for i in range(n)) + tuple(y(-i, n) for i in range(n)))


def _standard_a(p: RoseWindowParams, tag: FamilyTag) -> int:
    n = p.n
    if tag.kind == "i":
        return 2 % n
    if tag.kind == "ii":
        return (tag.m + 2) % n
    if tag.kind == "iv":
        return (3 * tag.d + 2) % n
    return p.a


def _orientation(p: RoseWindowParams, tag: FamilyTag) -> Permutation | None:
    """Isomorphism from the family's standard graph onto ``p``'s graph (None = identity)."""
    a0 = _standard_a(p, tag)
    if p.a == a0:
        return None
    if p.a == (-a0) % p.n:
        return reflection(p.n)
    raise GraphError(f"{p} does not have the {tag.name} shape")


def relabel_family(g: LabeledGraph, tag: FamilyTag) -> LabeledGraph:
    """Attach the u/v (family i) or u/v/w/z (family ii) labels to ``g``."""
    p = g.params
    if p is None or tag.kind not in ("i", "ii"):
        raise GraphError(f"no relabeling defined for {tag.name}")
    n = p.n
    phi = _orientation(p, tag)
    aliases = {}
    if tag.kind == "i":
        for i in range(n):
            aliases[f"u{i}"] = x(i, n)
            aliases[f"v{i}"] = y(i - 1, n)
    else:
        h = tag.m
        for i in range(h):
            aliases[f"u{i}"] = x(i, n) if i <= h - 2 else y(h - 2, n)
            if i == 0:
                aliases[f"v{i}"] = y(2 * h - 1, n)
            elif i == h - 1:
                aliases[f"v{i}"] = x(h - 1, n)
            else:
                aliases[f"v{i}"] = y(i - 1, n)
            aliases[f"w{i}"] = y(h + i - 1, n) if i <= h - 2 else x(2 * h - 1, n)
            aliases[f"z{i}"] = x(h + i, n) if i <= h - 2 else y(2 * h - 2, n)
    if phi is not None:
        aliases = {k: phi(v) for k, v in aliases.items()}
    if sorted(aliases.values()) != list(range(g.num_vertices)):
        raise GraphError("relabeling is not a bijection")
    return LabeledGraph(g.names, g.edges, p, aliases, tag.kind)


def rho(n: int) -> Permutation:
    return Permutation(tuple(x(i + 1, n) for i in range(n)) + tuple(y(i + 1, n) for i in range(n)))


def mu(n: int, a: int) -> Permutation:
    return Permutation(tuple(x(-i, n) for i in range(n)) + tuple(y(-i - a, n) for i in range(n)))


def family_iv_sigma(m: int, d: int) -> Permutation:
    n = 12 * m
    a = 3 * d + 2
    images = [0] * (2 * n)
    for i in range(n):
        if i % 3 == 0:
            images[x(i, n)] = x(i, n)
            images[y(i, n)] = x(i + 1, n)
        elif i % 3 == 1:
            images[x(i, n)] = y(i - 1, n)
            images[y(i, n)] = x(i - 1 + a, n)
        else:
            images[x(i, n)] = y(i + 1 - a, n)
            images[y(i, n)] = y(i + 6 * d, n)
    return Permutation(tuple(images))


def family_iv_tau(m: int, d: int) -> Permutation:
    n = 12 * m
    b = d + 1
    images = [0] * (2 * n)
    for i in range(n):
        if i % 3 == 0:
            images[x(i, n)] = x(b * i, n)
            images[y(i, n)] = x(b * i + 1, n)
        elif i % 3 == 1:
            images[x(i, n)] = y(b * i - b, n)
            images[y(i, n)] = y(4 + b * i - 4 * b, n)
        else:
            images[x(i, n)] = x(b * i + b - 1, n)
            images[y(i, n)] = y(b * i + b - 1, n)
    return Permutation(tuple(images))


def family_ii_block_perm(g: LabeledGraph, codes: Sequence[int]) -> Permutation:
    """Element of N acting on block B_i = {u_i, v_i, w_i, z_i} by ``codes[i]``.

    Code 0 is trivial, 1 is (u v)(w z), 2 is (u w)(v z), 3 is (u z)(v w).
    """
    pairs = {1: (("u", "v"), ("w", "z")), 2: (("u", "w"), ("v", "z")), 3: (("u", "z"), ("v", "w"))}
    cycles = []
    for i, c in enumerate(codes):
        if c:
            for s, t in pairs[c]:
                cycles.append((g.point(f"{s}{i}"), g.point(f"{t}{i}")))
    return Permutation.from_cycles(cycles, g.num_vertices)


def family_i_block_perm(g: LabeledGraph, bits: Sequence[int]) -> Permutation:
    """Product of the swaps (u_i v_i) with ``bits[i] == 1``."""
    cycles = [(g.point(f"u{i}"), g.point(f"v{i}")) for i, b in enumerate(bits) if b]
    return Permutation.from_cycles(cycles, g.num_vertices)


def family_ii_sigma(g: LabeledGraph, i: int) -> Permutation:
    h = g.params.n // 2
    codes = [0] * h
    codes[i % h] ^= 1
    codes[(i + 1) % h] ^= 2
    return family_ii_block_perm(g, codes)


def family_ii_beta(g: LabeledGraph) -> Permutation:
    h = g.params.n // 2
    mapping = {}
    for i in range(h):
        j = (-i) % h
        mapping[g.point(f"u{i}")] = g.point(f"u{j}")
        mapping[g.point(f"z{i}")] = g.point(f"z{j}")
        mapping[g.point(f"v{i}")] = g.point(f"w{j}")
        mapping[g.point(f"w{i}")] = g.point(f"v{j}")
    return Permutation.from_mapping(mapping, g.num_vertices)


def named_generators(p: RoseWindowParams | tuple, tag: FamilyTag | None = None) -> dict[str, Permutation]:
    """Named automorphisms of the graph of ``p`` taken from the family descriptions.

    Every returned permutation is checked to be an automorphism; a failure is
    an internal error, not a user error.
    """
    if not isinstance(p, RoseWindowParams):
        p = RoseWindowParams(*p)
    if tag is None:
        tag = recognize_family(p)
    if not tag.arc_transitive:
        raise GraphError(f"{p} is not arc-transitive")
    n = p.n
    g = build_rose_window(p)
    gens: dict[str, Permutation] = {}
    if tag.kind in ("i", "ii", "iv"):
        phi = _orientation(p, tag)
        a0 = _standard_a(p, tag)
        std = {"rho": rho(n), "mu": mu(n, a0)}
        if tag.kind == "iv":
            std["sigma"] = family_iv_sigma(tag.m, tag.d)
            if tag.m % 4 == 2:
                std["tau"] = family_iv_tau(tag.m, tag.d)
        if phi is not None:
            std = {k: phi * v * phi for k, v in std.items()}
        gens.update(std)
        if tag.kind == "i":
            rg = relabel_family(g, tag)
            gens["sigma0"] = family_i_block_perm(rg, [1] + [0] * (n - 1))
        elif tag.kind == "ii":
            rg = relabel_family(g, tag)
            h = tag.m
            gens["sigma0"] = family_ii_sigma(rg, 0)
            gens["alpha"] = gens["rho"] * family_ii_sigma(rg, h - 1)
            gens["beta"] = family_ii_beta(rg)
    else:
        gens = {"rho": rho(n), "mu": mu(n, p.a)}
    for name, perm in gens.items():
        if not g.is_automorphism(perm):
            raise AssertionError(f"internal error: {name} is not an automorphism of {p}")
    return gens
