import csv
import io
import json

import pytest

import rwmaps.classifier as classifier
from rwmaps.automorphisms import VertexCapExceeded
from rwmaps.classifier import (
    CONSTRUCT_ONLY,
    CSV_HEADER,
    ORACLE_COMPLETE,
    PER_CONSTRUCTION,
    ClassificationReport,
    all_cycles,
    classify_params,
    emit_report,
    exhaustive_oracle,
    family_iii_params,
    verify_map,
    verify_count_tables,
)
from rwmaps.cli import CAP, INVALID, MISMATCH, PASS, main
from rwmaps.cycles import EnumerationTooLarge
from rwmaps.families import family_i_maps, family_ii_maps
from rwmaps.graphs import build_rose_window
from rwmaps.maps import TWO_ZERO_ONE, classify, maps_isomorphic

from oracles import all_simple_cycles


def face_pairs(report):
    return sorted(tuple(s.face_lengths + s.face_lengths[-1:])[:2] for s in report.maps)


# -- classify_params --------------------------------------------------------------


def test_family_i_with_n_ten_mod_twelve():
    rep = classify_params((22, 2, 1), census=False)
    assert rep.verdict == "pass" and rep.family == "FamilyI"
    assert face_pairs(rep) == [(4, 22), (4, 44), (22, 44)]


def test_family_ii_at_eight():
    rep = classify_params((16, 6, 7), census=False)
    assert rep.family == "FamilyII" and rep.verdict == "pass"
    assert face_pairs(rep) == [(4, 8), (4, 16)]


def test_no_maps_when_n_is_coprime_to_six():
    rep = classify_params((5, 2, 1))
    assert rep.verdict == "pass" and rep.maps == [] and rep.expected == []
    assert rep.census["s"] == 3 and rep.census["c"] == 0


def test_not_arc_transitive():
    rep = classify_params((7, 3, 1))
    assert rep.family == "NotArcTransitive" and rep.matches == []
    assert rep.maps == [] and rep.expected == 0 and rep.verdict == "pass"
    assert any("not arc-transitive" in n for n in rep.notes)


def test_overlap_is_flagged():
    rep = classify_params((6, 2, 1), census=False)
    assert rep.overlap and rep.family == rep.matches[0]
    assert any(n.startswith("overlap") for n in rep.notes)
    assert len(rep.maps) == 4


def test_every_reported_map_passes_its_checks():
    rep = classify_params((12, 5, 10))
    assert len(rep.maps) == 3
    for s in rep.maps:
        assert s.ok and len(s.checks) == 8
        assert s.aut_order == 96 and s.vertices == 24 and s.edges == 48


def test_cap_gives_construct_only(monkeypatch):
    def boom(*a, **k):
        raise EnumerationTooLarge("enumeration too large: test")

    monkeypatch.setattr(classifier, "cycle_census", boom)
    rep = classify_params((12, 5, 10))
    assert rep.completeness == CONSTRUCT_ONLY and rep.census is None
    assert rep.verdict == "pass" and len(rep.maps) == 3


def test_oracle_completeness_label():
    rep = classify_params((4, 2, 1), oracle=True)
    assert rep.completeness == ORACLE_COMPLETE and rep.verdict == "pass"
    assert classify_params((4, 2, 1)).completeness == PER_CONSTRUCTION


def test_verify_map_on_constructed_maps():
    for cm in family_ii_maps(3):
        assert all(verify_map(cm.map).values())


# -- emit_report ----------------------------------------------------------------------


def test_text_report_for_the_complete_bipartite_graph():
    text = emit_report(classify_params((4, 2, 1)), "text")
    assert "class 2_{0,1}" in text and "faces 4, 8" in text
    assert text.rstrip().endswith("verdict: pass (verified per construction)")


def test_json_roundtrip():
    rep = classify_params((6, 5, 4))
    data = json.loads(emit_report(rep, "json"))
    assert data["schema"] == "rwmaps/1"
    back = ClassificationReport.from_dict(data)
    assert back == rep
    assert emit_report(back, "json") == emit_report(rep, "json")
    with pytest.raises(ValueError):
        ClassificationReport.from_dict({**data, "schema": "rwmaps/0"})


def test_csv_rows():
    rep = classify_params((6, 2, 1), census=False)
    rows = list(csv.reader(io.StringIO(emit_report(rep, "csv"))))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + len(rep.maps)
    for row in rows[1:]:
        assert row[:4] == ["6", "2", "1", rep.family]
        assert row[6] == "2_{0,1}"
        assert int(row[4]) <= int(row[5])


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(classify_params((5, 2, 1), census=False), "yaml")


def test_emit_is_deterministic():
    a = emit_report(classify_params((6, 5, 4)), "json")
    b = emit_report(classify_params((6, 5, 4)), "json")
    assert a == b


# -- tables ------------------------------------------------------------------------------


def test_tables_are_deterministic():
    assert verify_count_tables("i", 12) == verify_count_tables("i", 12)


def test_family_i_table_covers_every_residue():
    rows = verify_count_tables("i", 24)
    assert all(r.ok for r in rows)
    residues = {int(r.label[2:r.label.index("(")]) % 12 for r in rows if r.expected}
    assert {0, 2, 3, 4, 6, 8, 9, 10} <= residues


def test_family_iii_table():
    rows = verify_count_tables("iii", 12)
    assert rows and all(r.ok for r in rows)
    assert {r.expected for r in rows} == {0, 3}


def test_family_iii_parameter_list():
    assert [str(p) for p in family_iii_params(5)] == ["R_10(4,1)"]
    assert all(p.n == 16 for p in family_iii_params(8))


def test_unknown_family():
    with pytest.raises(ValueError):
        verify_count_tables("v", 3)


# -- oracle --------------------------------------------------------------------------------


@pytest.mark.parametrize("params", [(4, 2, 1), (5, 2, 1), (6, 5, 4)])
def test_cycle_listing_matches_networkx(params):
    g = build_rose_window(params)
    assert sorted(all_cycles(g)) == sorted(all_simple_cycles(g))


@pytest.mark.parametrize("params,count", [((4, 2, 1), 1), ((5, 2, 1), 0), ((6, 5, 4), 3), ((3, 2, 1), 1)])
def test_oracle_counts(params, count):
    found = exhaustive_oracle(build_rose_window(params))
    assert len(found) == count
    for m in found:
        assert classify(m) == TWO_ZERO_ONE


def test_oracle_agrees_with_the_small_family_ii_pipeline():
    found = exhaustive_oracle(build_rose_window((6, 5, 4)))
    built = family_ii_maps(3)
    assert len(found) == len(built)
    for m in found:
        assert any(maps_isomorphic(m, cm.map) for cm in built)


def test_oracle_pools_agree_on_the_complete_bipartite_graph():
    g = build_rose_window((4, 2, 1))
    a = exhaustive_oracle(g, pool="all")
    b = exhaustive_oracle(g, pool="consistent")
    assert len(a) == len(b) == 1 and maps_isomorphic(a[0], b[0])
    assert maps_isomorphic(a[0], family_i_maps(4)[0].map)


def test_oracle_cap_and_pool_errors():
    with pytest.raises(VertexCapExceeded):
        exhaustive_oracle(build_rose_window((7, 2, 1)))
    with pytest.raises(ValueError):
        exhaustive_oracle(build_rose_window((4, 2, 1)), pool="some")


# -- command line ----------------------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_graph(capsys):
    code, out, _ = run(capsys, "graph", "--n", "5", "--a", "2", "--r", "1")
    assert code == PASS and len(out.strip().splitlines()) == 20
    code, out, _ = run(capsys, "graph", "--n", "5", "--a", "2", "--r", "1", "--emit", "json")
    assert json.loads(out)["schema"] == "rwmaps/1"
    code, out, _ = run(capsys, "graph", "--n", "5", "--a", "2", "--r", "1", "--emit", "dot")
    assert out.startswith("graph")


def test_cli_aut(capsys):
    code, out, _ = run(capsys, "aut", "--n", "12", "--a", "5", "--r", "10")
    data = json.loads(out)
    assert code == PASS and data["order"] == 96 and data["arc_transitive"]


def test_cli_cycles_for_the_index_two_subgroups(capsys):
    for group in ("full", "h1", "h2"):
        code, out, _ = run(capsys, "cycles", "--n", "24", "--a", "8", "--r", "19", "--group", group)
        data = json.loads(out)
        assert code == PASS
        assert data["group_order"] == (384 if group == "full" else 192)
    code, _, err = run(capsys, "cycles", "--n", "12", "--a", "5", "--r", "10", "--group", "h1")
    assert code == INVALID and "m = 2" in err


def test_cli_classify(capsys):
    code, out, _ = run(capsys, "classify", "--n", "4", "--a", "2", "--r", "1", "--format", "text")
    assert code == PASS and "faces 4, 8" in out
    code, out, _ = run(capsys, "classify", "--n", "4", "--a", "2", "--r", "1", "--format", "csv")
    assert out.splitlines()[0] == ",".join(CSV_HEADER)


def test_cli_classify_mismatch(capsys, monkeypatch):
    monkeypatch.setattr(classifier, "expected_family_i", lambda n: [(4, 5)])
    code, out, _ = run(capsys, "classify", "--n", "4", "--a", "2", "--r", "1")
    assert code == MISMATCH and "verdict: mismatch" in out


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--family", "iv", "--max", "2")
    assert code == PASS and out.strip().endswith("4/4 cases match")


def test_cli_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--n", "6", "--a", "5", "--r", "4")
    assert code == PASS and "agree" in out
    code, _, err = run(capsys, "oracle", "--n", "12", "--a", "2", "--r", "1")
    assert code == CAP and "resource cap" in err


def test_cli_invalid_parameters(capsys):
    code, _, err = run(capsys, "classify", "--n", "6", "--a", "1", "--r", "3")
    assert code == INVALID and "invalid input" in err
