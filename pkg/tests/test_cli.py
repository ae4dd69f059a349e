from __future__ import annotations

import json

import jsonschema
import pytest

from nis2 import catalog, cli, io
from nis2.forms import TheoremViolation


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------- documents


@pytest.mark.parametrize("name", ["sl3.json", "qsl3.json", "example-3-2-1.json", "o3.json"])
def test_fixture_round_trip_is_byte_exact(fixtures, name):
    text = (fixtures / name).read_text(encoding="utf-8")
    g, ps = io.doc_to_algebra(json.loads(text))
    assert io.dumps(io.algebra_to_doc(g, ps)) == text


def test_catalog_documents_validate_against_schema():
    schema = io.schema("algebra")
    for name in catalog.names():
        jsonschema.validate(io.algebra_to_doc(catalog.get(name)), schema)


def test_odd_p_squares_round_trip():
    from nis2 import build

    g = build.queer_q(2, 3)
    g2, _ = io.doc_to_algebra(json.loads(io.dumps(io.algebra_to_doc(g))))
    assert g2.same_tables(g)


@pytest.mark.parametrize(
    "doc",
    [
        {"dimEven": 1, "dimOdd": 0, "bracket": []},
        {"p": 4, "dimEven": 1, "dimOdd": 0, "bracket": []},
        {"p": 2, "dimEven": 2, "dimOdd": 0, "bracket": [[1, 0, 0, 1]]},
        {"p": 2, "dimEven": 2, "dimOdd": 0, "bracket": [[0, 1, 5, 1]]},
        {"p": 2, "dimEven": 1, "dimOdd": 1, "bracket": [], "squaring": [[0, 0, 1]]},
        {"p": 2, "dimEven": 1, "dimOdd": 0, "bracket": [], "labels": ["a", "b"]},
        {"p": 2, "dimEven": 1, "dimOdd": 0, "bracket": [[0, 1, "x", 1]]},
        [1, 2, 3],
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(io.DocumentError):
        io.doc_to_algebra(doc)


# ---------- commands


def test_validate_sl3_exits_zero(capsys, fixtures):
    code, out, _ = run(capsys, "validate", fixtures / "sl3.json")
    assert code == 0
    assert "Lie superalgebra: yes" in out


def test_validate_example_reports_odd_square_identity(capsys, fixtures):
    code, out, _ = run(capsys, "validate", fixtures / "example-3-2-1.json", "--field", 2)
    assert code == 1
    line = next(s for s in out.splitlines() if "square_odd" in s)
    assert line.startswith("FAIL")
    assert "(X, Y)" in line or "X, Y" in line
    assert next(s for s in out.splitlines() if "square_self" in s).startswith("PASS")


def test_validate_json_matches_schema(capsys, fixtures):
    code, out, _ = run(capsys, "validate", fixtures / "example-3-2-1.json", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    jsonschema.validate(doc, io.schema("validation"))
    bad = [a for a in doc["axioms"] if not a["passed"]]
    assert [a["key"] for a in bad] == ["square_odd"]
    assert bad[0]["witness"] == ["X", "Y"]


def test_input_errors_exit_two(capsys, fixtures, tmp_path):
    assert run(capsys, "validate", fixtures / "truncated.json")[0] == 2
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "validate", fixtures / "sl3.json", "--field", 3)[0] == 2
    assert run(capsys, "catalog", "get", "no-such-algebra")[0] == 2
    assert run(capsys, "tensor", fixtures / "sl3.json", "--mode", "extend")[0] == 2
    assert run(capsys, "tensor", fixtures / "sl3.json", "--mode", "extend", "--poly", "1,0,1")[0] == 2


def test_forms_on_queerified_sl3(capsys, fixtures):
    code, out, _ = run(capsys, "forms", fixtures / "qsl3.json")
    assert code == 0
    assert "NIS superdimension: 1|1; classification: queerification" in out


def test_forms_on_sl3(capsys, fixtures):
    code, out, _ = run(capsys, "forms", fixtures / "sl3.json")
    assert code == 0
    assert "NIS superdimension: 1|0" in out


def test_forms_json_with_pencil_on_extension(capsys, tmp_path):
    path = tmp_path / "ext.json"
    path.write_text(io.dumps(io.algebra_to_doc(catalog.get("sl3-ext"))), encoding="utf-8")
    code, out, _ = run(capsys, "forms", path, "--pencil")
    assert code == 0
    assert "NIS superdimension: 2|0 (field not closed)" in out
    assert "pencil even (0,1)" in out
    code, out, _ = run(capsys, "forms", path, "--pencil", "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, io.schema("forms"))
    assert doc["pencils"][0]["values"] == [[0, 1], [1, 1]]


def test_forms_surfaces_theorem_violation(capsys, fixtures, monkeypatch):
    def boom(g, strict=False):
        raise TheoremViolation("forced", {"form": [[1, 0], [0, 0]]})

    monkeypatch.setattr(cli, "nis_superdimension", boom)
    code, out, _ = run(capsys, "forms", fixtures / "sl3.json", "--format", "json")
    assert code == 3
    doc = json.loads(out)
    jsonschema.validate(doc, io.schema("forms"))
    assert doc["form"] == [[1, 0], [0, 0]]


def test_catalog_list_and_get(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert "qof(sl3)" in out and "example-3-2-1" in out
    code, out, _ = run(capsys, "catalog", "get", "sl(3)")
    assert code == 0
    g, _ = io.doc_to_algebra(json.loads(out))
    assert g.same_tables(catalog.get("sl(3)"))


def test_restrict_then_queerify(capsys, fixtures, tmp_path):
    path = tmp_path / "sl3p.json"
    code, out, _ = run(capsys, "restrict", fixtures / "sl3.json", "-o", path)
    assert code == 0
    assert "h1^[2] = h1" in out
    code, out, _ = run(capsys, "queerify", path)
    assert code == 0
    g, _ = io.doc_to_algebra(json.loads(out))
    assert g.same_tables(catalog.get("qof(sl3)"))


def test_restrict_reports_failures(capsys, fixtures):
    code, out, _ = run(capsys, "restrict", fixtures / "o3.json")
    assert code == 1
    assert "no 2-structure" in out
    code, out, _ = run(capsys, "restrict", fixtures / "qsl3-mutated.json")
    assert code == 1
    assert "restrictedness against odd vectors: FAIL" in out
    assert "restrictedness against even vectors: ok" in out


def test_queerify_rejects_unrestricted_input(capsys, fixtures):
    code, _, err = run(capsys, "queerify", fixtures / "o3.json")
    assert code == 1
    assert "p-structure" in err


def test_tensor_modes(capsys, fixtures):
    code, out, _ = run(capsys, "tensor", fixtures / "sl3.json", fixtures / "qunit.json", "--mode", "comm24")
    assert code == 0
    g, _ = io.doc_to_algebra(json.loads(out))
    assert g.same_tables(catalog.get("qof(sl3)"))
    code, _, err = run(capsys, "tensor", fixtures / "sl3.json", fixtures / "qunit.json", "--mode", "super")
    assert code == 1
    code, out, _ = run(capsys, "tensor", fixtures / "sl3.json", "--mode", "extend", "--poly", "1,1,1")
    assert code == 0
    assert json.loads(out)["dimEven"] == 16


def test_check_theorem_on_files(capsys, fixtures):
    code, out, _ = run(capsys, "check-theorem", fixtures / "qsl3.json", fixtures / "o3.json", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, io.schema("theorem"))
    rows = {r["name"]: r for r in doc["rows"]}
    q = rows["qof(sl3)"]
    assert (q["nis"], q["certificate"], q["even_core"], q["status"]) == ("1|1", "PASS", "PASS", "PASS")
    assert rows["o(3)"]["nis"] == "1|0"


def test_check_theorem_skips_sl2(capsys):
    code, out, _ = run(capsys, "check-theorem", "--catalog")
    assert code == 0
    line = next(s for s in out.splitlines() if s.startswith("sl(2) "))
    assert "skipped: not simple" in line
    assert out.rstrip().endswith("0 violations")


def test_console_script_entry_point():
    from importlib.metadata import entry_points

    eps = [e for e in entry_points(group="console_scripts") if e.name == "nis2"]
    assert eps and eps[0].value == "nis2.cli:main"
