import json

import pytest

from conftest import cda_mask, kb_path, roa_mask

from ccoa import cli
from ccoa.algebra import UNIVERSAL
from ccoa.csp import new_csp, tensor_index
from ccoa.kb import (
    KbParseError,
    build_csp,
    kb_from_csp,
    parse_kb,
    serialize_kb,
)

EXAMPLE1 = open(kb_path("example1.kb")).read()


def test_parse_example1():
    kb = parse_kb(EXAMPLE1)
    assert kb.points == ("Berlin", "Hamburg", "London", "Paris")
    assert len(kb.cda_facts) == 3
    assert len(kb.roa_facts) == 4
    assert kb.cda_facts[0].subject == "Hamburg"
    assert kb.cda_facts[0].relation == cda_mask("No")
    assert kb.roa_facts[0].parent == "Hamburg"
    assert kb.roa_facts[0].primary == "Berlin"
    assert kb.roa_facts[0].relation == roa_mask("lr")


def test_parse_relation_forms_and_comments():
    kb = parse_kb(
        "point A\npoint B  # trailing comment\n\n"
        "cda A {No,NE} B\ncda A ? B\n"
        "point C\nroa A B C {bp,cp,bw}\n"
    )
    assert kb.cda_facts[0].relation == cda_mask("No", "NE")
    assert kb.cda_facts[1].relation == UNIVERSAL
    assert kb.roa_facts[0].relation == roa_mask("bp", "cp", "bw")


@pytest.mark.parametrize(
    "text,fragment,line,column",
    [
        ("point A\npoint B\ncda A Xx B", "unknown cardinal-direction atom", 3, 7),
        ("point A\ncda A No B", "unknown point 'B'", 2, 10),
        ("point A\npoint B\ncda A {} B", "empty", 3, 7),
        ("point A\npoint A", "duplicate point", 2, 7),
        ("orbit A", "unknown statement", 1, 1),
        ("point A\npoint B\ncda A No", "takes 3 arguments", 3, 1),
        ("point A\npoint B\nroa A B A No", "unknown orientation atom", 3, 11),
    ],
)
def test_parse_errors_carry_position(text, fragment, line, column):
    with pytest.raises(KbParseError) as err:
        parse_kb(text)
    assert fragment in str(err.value)
    assert err.value.line == line
    assert err.value.column == column


def test_roundtrip_through_serialization():
    kb = parse_kb(EXAMPLE1)
    assert parse_kb(serialize_kb(kb)) == kb
    synthetic = parse_kb("point A\npoint B\npoint C\ncda A {No,Eq} B\nroa A B C ?\n")
    assert parse_kb(serialize_kb(synthetic)) == synthetic


def test_build_csp_example1_structure():
    csp, findings = build_csp(parse_kb(EXAMPLE1))
    assert findings == []
    n = csp.n
    assert n == 4
    non_universal_pairs = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if csp.b.cells[i * n + j] != UNIVERSAL
    ]
    assert len(non_universal_pairs) == 3
    non_universal_triples = [
        (i, j, k)
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
        if csp.t.cells[tensor_index(n, i, j, k)] != UNIVERSAL
    ]
    assert len(non_universal_triples) == 4
    # The orientation fact on (Hamburg, London, Paris) stores {rr} at
    # (Hamburg, Paris, London) through the converse closure.
    h, l, p = 1, 2, 3
    assert csp.t.get(h, p, l) == roa_mask("rr")


def test_build_csp_empty_kb_and_idempotent_facts():
    empty = parse_kb("point A\npoint B\n")
    csp, findings = build_csp(empty)
    assert findings == []
    assert csp == new_csp(["A", "B"])
    twice = parse_kb("point A\npoint B\ncda A No B\ncda A No B\n")
    once = parse_kb("point A\npoint B\ncda A No B\n")
    assert build_csp(twice)[0] == build_csp(once)[0]


def test_build_csp_reports_conflicts_as_findings():
    kb = parse_kb("point A\npoint B\ncda A No B\ncda A So B\n")
    csp, findings = build_csp(kb)
    assert len(findings) == 1
    assert findings[0].kind == "pair"
    assert findings[0].line == 4
    assert csp.b.get(0, 1) == 0


def test_kb_from_csp_skips_uninformative_cells():
    csp, _ = build_csp(parse_kb(EXAMPLE1))
    kb = kb_from_csp(csp)
    assert len(kb.cda_facts) == 3
    assert len(kb.roa_facts) == 4


# --- CLI ------------------------------------------------------------------


def test_check_exit_codes():
    assert cli.main(["check", kb_path("example1.kb")]) == 1
    assert cli.main(["check", kb_path("example1_cda_only.kb")]) == 0
    assert cli.main(["check", "/nonexistent.kb"]) == 2


def test_usage_errors_exit_2(capsys):
    assert cli.main([]) == 2
    assert cli.main(["frobnicate"]) == 2
    capsys.readouterr()


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.kb"
    bad.write_text("point A\ncda A No B\n", encoding="utf-8")
    assert cli.main(["check", str(bad)]) == 2
    assert "unknown point" in capsys.readouterr().err


def test_check_json_is_deterministic_and_structured(capsys):
    assert cli.main(["check", kb_path("example1.kb"), "--json"]) == 1
    first = capsys.readouterr().out
    assert cli.main(["check", kb_path("example1.kb"), "--json"]) == 1
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["status"] == "inconsistent"
    assert doc["culprit"]["variables"] == ["Hamburg", "Paris", "London"]
    assert doc["culprit"]["cell"] == "{rr}"
    assert doc["culprit"]["refinement"] == "{bp,cp,bw}"
    assert set(doc) >= {"status", "culprit", "cda", "roa", "stats"}
    assert doc["stats"]["dequeues"] > 0


def test_check_explain_prints_trace(capsys):
    cli.main(["check", kb_path("example1.kb"), "--explain"])
    out = capsys.readouterr().out
    assert "cda->roa: T[Hamburg,Paris,London] {rr} -> {}" in out


def test_check_oracle_flag(capsys):
    code = cli.main(["check", kb_path("example1_cda_only.kb"), "--oracle-radius", "3"])
    assert code == 0
    assert "grid model found" in capsys.readouterr().out


def test_scenario_command(capsys):
    assert cli.main(["scenario", kb_path("example1_roa_only.kb")]) == 0
    out = capsys.readouterr().out
    assert "scenario found" in out
    assert cli.main(["scenario", kb_path("example1.kb")]) == 1
    assert "no strongly-4-consistent scenario" in capsys.readouterr().out


def test_oracle_command(capsys):
    assert cli.main(["oracle", kb_path("example1_roa_only.kb"), "--grid-radius", "2"]) == 0
    assert "model found" in capsys.readouterr().out
    assert (
        cli.main(["oracle", kb_path("example1.kb"), "--grid-radius", "2", "--json"]) == 1
    )
    doc = json.loads(capsys.readouterr().out)
    assert doc["model_found"] is False and doc["witness"] is None


def test_oracle_budget_exit_code(capsys):
    code = cli.main(["oracle", kb_path("example1.kb"), "--grid-radius", "2", "--budget", "3"])
    assert code == 4
    capsys.readouterr()


def test_tables_emit_matches_packaged_data(capsys, tmp_path):
    assert cli.main(["tables", "emit", "--format", "json"]) == 0
    out = capsys.readouterr().out
    from ccoa.tables import DERIVED_TABLES_FILE

    assert out == DERIVED_TABLES_FILE.read_text(encoding="utf-8")
    assert cli.main(["tables", "emit", "--format", "xml"]) == 2
    capsys.readouterr()


def test_bench_json_schema(capsys):
    assert cli.main(["bench", "--sizes", "3,4", "--seed", "5", "--instances", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [row["n"] for row in doc["sizes"]] == [3, 4]
    for row in doc["sizes"]:
        assert len(row["dequeues"]) == 2
        assert all(isinstance(x, float) for x in row["seconds"])
