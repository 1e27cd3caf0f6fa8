"""Command line entry point: ``rwmaps <command> --n N --a A --r R``."""

from __future__ import annotations

import argparse
import json
import sys

from .automorphisms import AutomorphismGroup, VertexCapExceeded, verify_arc_transitivity
from .classifier import _standard_form, classify_params, construct_maps, emit_report, exhaustive_oracle, verify_count_tables
from .cycles import EnumerationTooLarge, cycle_census
from .families import family_iv_subgroups
from .graphs import SCHEMA, GraphError, RoseWindowParams, build_rose_window, family_matches, recognize_family
from .maps import maps_isomorphic
from .perm import GroupTooLarge

PASS, MISMATCH, CAP, INVALID = 0, 1, 2, 3


def _params(args) -> RoseWindowParams:
    return RoseWindowParams(args.n, args.a, args.r)


def cmd_graph(args) -> int:
    g = build_rose_window(_params(args))
    if args.emit == "dot":
        print(g.to_dot())
    elif args.emit == "json":
        print(g.to_json())
    else:
        print(g.to_edge_list())
    return PASS


def cmd_aut(args) -> int:
    p = _params(args)
    g = build_rose_window(p)
    aut = AutomorphismGroup(g)
    out = {
        "schema": SCHEMA,
        "graph": str(p),
        "order": aut.order,
        "arc_transitive": verify_arc_transitivity(g, aut),
        "family": recognize_family(p).name,
        "matches": [t.name for t in family_matches(p)],
        "generators": [g_.cycle_string(g.names) for g_ in aut.generators],
    }
    print(json.dumps(out, indent=2))
    return PASS


def cmd_cycles(args) -> int:
    p = _params(args)
    g = build_rose_window(p)
    if args.group == "full":
        group = AutomorphismGroup(g)
    else:
        tag = recognize_family(p)
        if tag.kind != "iv" or tag.m % 4 != 2:
            print(f"--group {args.group} needs a family (iv) graph with m = 2 (mod 4)", file=sys.stderr)
            return INVALID
        # the subgroups live on the standard form, which is this graph up to relabelling
        if _standard_form(p, tag) != p:
            print(f"use the standard form {_standard_form(p, tag)} for --group {args.group}", file=sys.stderr)
            return INVALID
        group = family_iv_subgroups(tag.m, tag.d)[args.group.upper()]
    census = cycle_census(group, g)
    out = {"schema": SCHEMA, "graph": str(p), "group": args.group, "group_order": group.order}
    out.update(census.to_dict(g.names))
    print(json.dumps(out, indent=2))
    return PASS


def cmd_classify(args) -> int:
    report = classify_params(_params(args))
    sys.stdout.write(emit_report(report, args.format))
    return PASS if report.verdict == "pass" else MISMATCH


def cmd_verify(args) -> int:
    rows = verify_count_tables(args.family, args.max)
    bad = 0
    for row in rows:
        status = "ok" if row.ok else "MISMATCH"
        print(f"{row.label:>16}  expected {row.expected}  found {row.found}  {status}")
        bad += not row.ok
    print(f"{len(rows) - bad}/{len(rows)} cases match")
    return PASS if not bad else MISMATCH


def cmd_oracle(args) -> int:
    p = _params(args)
    tag = recognize_family(p)
    g = build_rose_window(_standard_form(p, tag))
    kwargs = {"pool": args.pool}
    if args.vertex_cap:
        kwargs["vertex_cap"] = args.vertex_cap
    found = exhaustive_oracle(g, **kwargs)
    built, _ = construct_maps(p, tag) if tag.arc_transitive else ([], 0)
    same = len(found) == len(built) and all(any(maps_isomorphic(m, c.map) for c in built) for m in found)
    print(f"{g.params}: oracle finds {len(found)} map(s) of class 2_{{0,1}}")
    for m in found:
        print(f"  faces {', '.join(map(str, m.distinct_face_lengths()))}, chi {m.euler_characteristic()}")
    print(f"constructions give {len(built)}; {'agree' if same else 'DISAGREE'}")
    return PASS if same else MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwmaps", description="Rose Window graphs and their 2_{0,1} maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_params(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--a", type=int, required=True)
        sp.add_argument("--r", type=int, required=True)
        sp.set_defaults(func=func)
        return sp

    with_params("graph", cmd_graph, "print the graph").add_argument(
        "--emit", choices=["edges", "dot", "json"], default="edges"
    )
    with_params("aut", cmd_aut, "automorphism group summary")
    with_params("cycles", cmd_cycles, "consistent-cycle census").add_argument(
        "--group", choices=["full", "h1", "h2"], default="full"
    )
    with_params("classify", cmd_classify, "classify the 2_{0,1} maps").add_argument(
        "--format", choices=["json", "csv", "text"], default="text"
    )
    sp = with_params("oracle", cmd_oracle, "brute-force search for 2_{0,1} maps")
    sp.add_argument("--pool", choices=["all", "consistent"], default=None)
    sp.add_argument("--vertex-cap", type=int, default=None)
    sp = sub.add_parser("verify", help="check a family's count table")
    sp.add_argument("--family", choices=["i", "ii", "iii", "iv"], required=True)
    sp.add_argument(
        "--max", type=int, required=True,
        help="largest family index: n for (i), half of n for (ii), m for (iii) and (iv)",
    )
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GroupTooLarge, EnumerationTooLarge, VertexCapExceeded) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return CAP
    except (GraphError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
