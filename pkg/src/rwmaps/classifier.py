"""
Per-graph classification reports, family table checks and a brute-force oracle.

``classify_params`` routes a Rose Window graph to the construction for its
family, verifies every map it gets back and compares against the closed-form
expectations.  ``exhaustive_oracle`` ignores the constructions entirely and
searches double covers of the edge set by cycles.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from math import gcd

from .automorphisms import AutomorphismGroup, VertexCapExceeded
from .cycles import EnumerationTooLarge, canonical_undirected, cycle_census
from .families import (
    ConstructedMap,
    expected_family_i,
    expected_family_ii,
    expected_family_iii,
    expected_family_iv,
    family_i_maps,
    family_ii_maps,
    family_iii_maps,
    family_iv_maps,
)
from .graphs import SCHEMA, FamilyTag, LabeledGraph, RoseWindowParams, build_rose_window, family_matches
from .perm import GroupTooLarge
from .maps import (
    MapError,
    MapOnGraph,
    TWO_ZERO_ONE,
    check_alternation,
    check_equivariance,
    check_flag_axioms,
    check_free,
    check_klein_stabilizers,
    check_no_shared_corners,
    check_one_step_rotations,
    check_symmetric_consistent_faces,
    classify,
    flag_system,
    map_automorphisms,
    map_invariants,
    map_type,
    maps_isomorphic,
)

ORACLE_VERTEX_CAP = 12
PER_CONSTRUCTION = "verified per construction"
ORACLE_COMPLETE = "verified complete (oracle)"
CONSTRUCT_ONLY = "construct-and-verify only"


@dataclass
class MapSummary:
    face_lengths: list
    map_class: str
    map_type: str
    euler: int
    aut_order: int
    orientable: bool
    vertices: int
    edges: int
    faces: int
    route: str
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.map_class == TWO_ZERO_ONE.label and all(self.checks.values())


@dataclass
class ClassificationReport:
    n: int
    a: int
    r: int
    family: str
    matches: list
    aut_order: int
    census: dict | None
    maps: list
    expected: list | int | None
    verdict: str
    completeness: str
    notes: list = field(default_factory=list)

    @property
    def params(self) -> RoseWindowParams:
        return RoseWindowParams(self.n, self.a, self.r)

    @property
    def overlap(self) -> bool:
        return len(self.matches) > 1

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ClassificationReport":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unknown schema {d.get('schema')!r}")
        d = {k: v for k, v in d.items() if k != "schema"}
        d["maps"] = [MapSummary(**m) for m in d["maps"]]
        return cls(**d)


def verify_map(m: MapOnGraph) -> dict[str, bool]:
    """Every structural check the 2_{0,1} maps are expected to pass."""
    autm = map_automorphisms(m)
    fs = flag_system(m)
    return {
        "flag axioms": not check_flag_axioms(fs),
        "free action": check_free(autm),
        "vertex map equivariant": check_equivariance(m, autm),
        "face orbits alternate": check_alternation(m, autm),
        "no shared corners": check_no_shared_corners(m),
        "one-step rotations": check_one_step_rotations(m, autm),
        "faces symmetric consistent": check_symmetric_consistent_faces(m, autm),
        "Klein vertex stabilizers": check_klein_stabilizers(m, autm),
    }


def summarize(cm: ConstructedMap | MapOnGraph, route: str = "", checks: bool = True) -> MapSummary:
    m = cm.map if isinstance(cm, ConstructedMap) else cm
    route = cm.route if isinstance(cm, ConstructedMap) else route
    autm = map_automorphisms(m)
    inv = map_invariants(m)
    return MapSummary(
        face_lengths=list(m.distinct_face_lengths()),
        map_class=classify(m, autm).label,
        map_type=map_type(m),
        euler=inv.euler,
        aut_order=autm.order,
        orientable=inv.orientable,
        vertices=inv.V,
        edges=inv.E,
        faces=inv.F,
        route=route,
        checks=verify_map(m) if checks else {},
    )


def _family_iii_r(p: RoseWindowParams) -> int:
    m = p.n // 2
    return 1 if p.r in (1, p.n - 1) else m - 1


def construct_maps(p: RoseWindowParams, tag: FamilyTag) -> tuple[list[ConstructedMap], list | int]:
    """Constructed maps and the expected outcome for the canonical family of ``p``."""
    if tag.kind == "i":
        return family_i_maps(p.n, check=False), expected_family_i(p.n)
    if tag.kind == "ii":
        h = p.n // 2
        return family_ii_maps(h, check=False), expected_family_ii(h)
    if tag.kind == "iii":
        m = p.n // 2
        return family_iii_maps(m, tag.b, _family_iii_r(p)), expected_family_iii(m, tag.b)
    if tag.kind == "iv":
        return family_iv_maps(tag.m, tag.d), expected_family_iv(tag.m)
    return [], 0


def _matches_expected(found: list[ConstructedMap], expected) -> bool:
    if isinstance(expected, int):
        return len(found) == expected
    return sorted(cm.face_lengths for cm in found) == sorted(tuple(sorted(e)) for e in expected)


def classify_params(p: RoseWindowParams | tuple, *, census: bool = True, oracle: bool = False) -> ClassificationReport:
    p = p if isinstance(p, RoseWindowParams) else RoseWindowParams(*p)
    matches = family_matches(p)
    tag = matches[0] if matches else FamilyTag(None)
    graph = build_rose_window(p)
    aut = AutomorphismGroup(graph)
    report = ClassificationReport(
        p.n, p.a, p.r, tag.name, [t.name for t in matches], aut.order,
        None, [], None, "pass", PER_CONSTRUCTION,
    )
    if len(matches) > 1:
        report.notes.append("overlap: " + ", ".join(t.name for t in matches) + f"; routed as {tag.name}")
    if not tag.arc_transitive:
        report.expected = 0
        report.notes.append("not arc-transitive, so no 2_{0,1} maps")
        return report
    if census:
        try:
            report.census = cycle_census(aut, graph).to_dict(graph.names)
        except (GroupTooLarge, EnumerationTooLarge) as exc:
            report.completeness = CONSTRUCT_ONLY
            report.notes.append(f"cycle census skipped: {exc}")
    found, expected = construct_maps(p, tag)
    report.expected = expected if isinstance(expected, int) else [list(e) for e in expected]
    report.maps = [summarize(cm) for cm in found]
    ok = _matches_expected(found, expected) and all(s.ok for s in report.maps)
    if oracle:
        oracle_maps = exhaustive_oracle(build_rose_window(_standard_form(p, tag)))
        same = len(oracle_maps) == len(found) and all(
            any(maps_isomorphic(om, cm.map) for cm in found) for om in oracle_maps
        )
        ok = ok and same
        report.completeness = ORACLE_COMPLETE if same else "oracle disagrees"
    report.verdict = "pass" if ok else "mismatch"
    return report


def _standard_form(p: RoseWindowParams, tag: FamilyTag) -> RoseWindowParams:
    # the constructions build their own graph; the oracle must use the same one
    if tag.kind == "i":
        return RoseWindowParams(p.n, 2, 1)
    if tag.kind == "ii":
        h = p.n // 2
        return RoseWindowParams(p.n, h - 2, h - 1)
    if tag.kind == "iii":
        return RoseWindowParams(p.n, 2 * tag.b, _family_iii_r(p))
    if tag.kind == "iv":
        return RoseWindowParams(p.n, 3 * tag.d + 2, 9 * tag.d + 1)
    return p


# -- output ---------------------------------------------------------------------

CSV_HEADER = ["n", "a", "r", "family", "len1", "len2", "class", "euler"]


def emit_report(report: ClassificationReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for s in report.maps:
            lens = s.face_lengths + s.face_lengths[-1:]
            w.writerow([report.n, report.a, report.r, report.family, lens[0], lens[1], s.map_class, s.euler])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"{report.params}  {report.family}", f"|Aut| = {report.aut_order}"]
    lines += [f"note: {n}" for n in report.notes]
    if report.census:
        c = report.census
        lines.append(
            f"consistent cycles: {c['directed_orbits']} directed orbits "
            f"(s={c['s']}, c={c['c']}), lengths {', '.join(map(str, c['lengths']))}"
            f" [{c['mode']}]"
        )
    if isinstance(report.expected, int):
        lines.append(f"expected: {report.expected} map(s)")
    elif report.expected is not None:
        pairs = "; ".join("{" + ",".join(map(str, e)) + "}" for e in report.expected) or "none"
        lines.append(f"expected: {len(report.expected)} map(s): {pairs}")
    for i, s in enumerate(report.maps, 1):
        orient = "orientable" if s.orientable else "non-orientable"
        failed = [k for k, v in s.checks.items() if not v]
        lines.append(
            f"map {i}: class {s.map_class}, faces {', '.join(map(str, s.face_lengths))}, "
            f"type {s.map_type}, chi {s.euler}, |Aut(M)| {s.aut_order}, {orient}, via {s.route}"
            + (f", FAILED {', '.join(failed)}" if failed else "")
        )
    lines.append(f"verdict: {report.verdict} ({report.completeness})")
    return "\n".join(lines) + "\n"


# -- family tables ----------------------------------------------------------------


@dataclass
class TableRow:
    label: str
    expected: object
    found: object
    ok: bool


def family_iii_params(m: int) -> list[RoseWindowParams]:
    """Canonical family (iii) parameters with n = 2m, one per (b, r) up to b -> -b."""
    out = []
    for b in range(1, m // 2 + 1):
        if (b * b) % m not in (1, m - 1) or gcd(b, m) != 1:
            continue
        for r in (1, m - 1) if m % 2 == 0 else (1,):
            p = RoseWindowParams(2 * m, 2 * b, r)
            tags = family_matches(p)
            if tags and tags[0].kind == "iii" and p not in out:
                out.append(p)
    return out


def verify_count_tables(family: str, maximum: int, minimum: int | None = None) -> list[TableRow]:
    """Compare constructions with the closed-form counts.

    ``maximum`` bounds the family's own index: n for (i), half of n for (ii)
    and m for (iii) and (iv).
    """
    rows = []
    if family == "i":
        for n in range(minimum or 3, maximum + 1):
            found = sorted(cm.face_lengths for cm in family_i_maps(n, check=False))
            exp = sorted(tuple(sorted(e)) for e in expected_family_i(n))
            rows.append(TableRow(f"R_{n}(2,1)", exp, found, found == exp))
    elif family == "ii":
        for h in range(minimum or 3, maximum + 1):
            found = sorted(cm.face_lengths for cm in family_ii_maps(h, check=False))
            exp = sorted(tuple(sorted(e)) for e in expected_family_ii(h))
            rows.append(TableRow(f"R_{2 * h}({h - 2},{h - 1})", exp, found, found == exp))
    elif family == "iii":
        for m in range(minimum or 3, maximum + 1):
            for p in family_iii_params(m):
                tag = family_matches(p)[0]
                found = family_iii_maps(m, tag.b, _family_iii_r(p))
                exp = expected_family_iii(m, tag.b)
                ok = len(found) == exp and all(cm.map_class == TWO_ZERO_ONE for cm in found)
                rows.append(TableRow(str(p), exp, len(found), ok))
    elif family == "iv":
        for m in range(minimum or 1, maximum + 1):
            for d in (m, -m):
                found = family_iv_maps(m, d)
                exp = expected_family_iv(m)
                p = RoseWindowParams(12 * m, 3 * d + 2, 9 * d + 1)
                rows.append(TableRow(str(p), exp, len(found), len(found) == exp))
    else:
        raise ValueError(f"unknown family {family!r}")
    return rows


# -- brute-force oracle -------------------------------------------------------------


def all_cycles(graph: LabeledGraph) -> list[tuple]:
    """Every simple cycle of length >= 3, in canonical undirected form."""
    adj = graph.adjacency
    out = []
    for start in range(graph.num_vertices):
        # cycles whose smallest vertex is ``start``
        path = [start]
        on_path = {start}
        stack = [iter(sorted(w for w in adj[start] if w > start))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            if len(path) >= 3 and start in adj[nxt] and path[1] < nxt:
                out.append(tuple(path))
            stack.append(iter(sorted(w for w in adj[nxt] if w > start)))
    return [canonical_undirected(c) for c in out]


def consistent_cycle_pool(graph: LabeledGraph, aut=None) -> list[tuple]:
    """Undirected cycles with a one-step rotation in Aut(graph).

    Faces of a 2_{0,1} map have one, since rotating a face by one step is an
    automorphism of the map and so of the graph.
    """
    aut = AutomorphismGroup(graph) if aut is None else aut
    pool = set()
    for orbit in cycle_census(aut, graph, allow_sampling=False).orbits:
        pool |= orbit.faces()
    return sorted(pool)


def _masks(graph: LabeledGraph, pool: list[tuple]):
    """Edge and corner bitsets for each cycle of ``pool``."""
    eid = {e: i for i, e in enumerate(sorted(graph.edge_set(), key=sorted))}
    cid: dict = {}
    edge_masks, corner_masks = [], []
    for f in pool:
        k = len(f)
        em = cm = 0
        for i in range(k):
            em |= 1 << eid[frozenset((f[i], f[(i + 1) % k]))]
            cm |= 1 << cid.setdefault((f[i], frozenset((f[i - 1], f[(i + 1) % k]))), len(cid))
        edge_masks.append(em)
        corner_masks.append(cm)
    return len(eid), edge_masks, corner_masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def edge_partitions(num_edges: int, edge_masks: list[int], members: list[int]):
    """Yield every subset of ``members`` whose cycles use each edge exactly once."""
    on_edge = [0] * num_edges
    for j in members:
        for e in _bits(edge_masks[j]):
            on_edge[e] |= 1 << j
    everything = (1 << num_edges) - 1

    def search(covered, alive, chosen):
        if covered == everything:
            yield chosen
            return
        best, best_opts = None, None
        for e in _bits(everything & ~covered):
            opts = alive & on_edge[e]
            if not opts:
                return
            if best is None or opts.bit_count() < best_opts.bit_count():
                best, best_opts = e, opts
                if best_opts.bit_count() == 1:
                    break
        for j in _bits(best_opts):
            em = edge_masks[j]
            dead = 0
            for e in _bits(em):
                dead |= on_edge[e]
            yield from search(covered | em, alive & ~dead, chosen + [j])

    yield from search(0, sum(1 << j for j in members), [])


def two_class_covers(graph: LabeledGraph, pool: list[tuple]):
    """Yield face sets made of two edge partitions with no corner in common.

    In a 2_{0,1} map the faces fall into two orbits of equal-length cycles,
    and the two faces on any edge lie in different orbits, so every such map
    arises this way.  Disjoint corners make each vertex link a single cycle
    at 4-valent vertices.
    """
    num_edges, edge_masks, corner_masks = _masks(graph, pool)
    by_length: dict[int, list[int]] = {}
    for j, f in enumerate(pool):
        by_length.setdefault(len(f), []).append(j)
    parts = []
    for members in by_length.values():
        for chosen in edge_partitions(num_edges, edge_masks, members):
            cm = 0
            for j in chosen:
                cm |= corner_masks[j]
            parts.append((cm, chosen))
    for i, (cm1, p1) in enumerate(parts):
        for cm2, p2 in parts[i + 1:]:
            if not cm1 & cm2:
                yield [pool[j] for j in p1 + p2]


def exhaustive_oracle(graph: LabeledGraph, pool: str | None = None, vertex_cap: int = ORACLE_VERTEX_CAP) -> list[MapOnGraph]:
    """Every 2_{0,1} map on ``graph`` up to isomorphism, by exact-cover search.

    ``pool`` is "all" (every simple cycle) or "consistent" (cycles with a
    one-step rotation in Aut(graph)).  The default is "all" up to the vertex
    cap; graphs above the cap need ``pool="consistent"`` and a raised cap.
    """
    if graph.num_vertices > vertex_cap:
        raise VertexCapExceeded(f"oracle is limited to {vertex_cap} vertices, graph has {graph.num_vertices}")
    pool = pool or "all"
    if pool == "all":
        cycles = all_cycles(graph)
    elif pool == "consistent":
        cycles = consistent_cycle_pool(graph)
    else:
        raise ValueError(f"unknown pool {pool!r}")
    found: list[MapOnGraph] = []
    for faces in two_class_covers(graph, cycles):
        try:
            m = MapOnGraph(graph, tuple(sorted(faces)))
        except MapError:
            continue
        if classify(m) != TWO_ZERO_ONE:
            continue
        if not any(maps_isomorphic(m, other) for other in found):
            found.append(m)
    return sorted(found, key=lambda m: (m.distinct_face_lengths(), m.faces))
