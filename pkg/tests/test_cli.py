import json
import os

import pytest

from secondsheaf.cli import dump, main, run
from secondsheaf.document import DocumentError, load_instance, parse_document, resolve_guards

HERE = os.path.dirname(__file__)
INSTANCES = os.path.join(HERE, "..", "instances")


def _doc(name):
    with open(os.path.join(INSTANCES, name)) as fh:
        return json.load(fh)


def test_verify_canonical_exit_zero():
    report, status = run("verify", _doc("z6.json"))
    assert status == 0
    assert report["summary"]["fail"] == 0
    skipped = [r for r in report["records"] if r["status"] == "skipped"]
    assert all(r["reason"].startswith("hypothesis-failed:") for r in skipped)


def test_sections_needs_n(tmp_path, capsys):
    p = tmp_path / "doc.json"
    p.write_text(json.dumps({"ring": {"kind": "zmod", "n": 6}, "modules": {"M": {"kind": "natural"}}}))
    assert main(["sections", "--input", str(p)]) == 2
    assert "$.modules.N" in capsys.readouterr().err


def test_syntax_error_has_position(tmp_path, capsys):
    p = tmp_path / "doc.json"
    p.write_text('{"ring": {"kind": "zmod",\n "n": 6,,}}')
    assert main(["spectrum", "--input", str(p)]) == 2
    assert "line 2 column" in capsys.readouterr().err


@pytest.mark.parametrize("doc,path", [
    ({"modules": {}}, "$"),
    ({"ring": {"kind": "zmod", "n": "six"}}, "$.ring.n"),
    ({"ring": {"kind": "field"}}, "$.ring.kind"),
    ({"ring": {"kind": "zmod", "n": 6}, "modules": {"M": {"kind": "cyclic-product", "orders": [4]}}},
     "$.modules.M"),
    ({"ring": {"kind": "zmod", "n": 6}, "modules": {"M": "M"}}, "$.modules.M"),
    ({"ring": {"kind": "zmod", "n": 6}, "modules": {"M": {"kind": "natural"}},
      "maps": {"f": {"source": "M", "target": "M", "values": [0, 2, 2, 2, 2, 2]}}}, "$.maps.f"),
    ({"ring": {"kind": "zmod", "n": 6}, "guards": {"speed": 1}}, "$.guards.speed"),
])
def test_document_errors_name_their_path(doc, path):
    with pytest.raises(DocumentError) as info:
        load_instance(doc)
    assert info.value.path == path


def test_table_ring_and_module():
    doc = {"ring": {"kind": "table", "order": 2, "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 1]]},
           "modules": {"M": {"kind": "table", "order": 2, "add": [[0, 1], [1, 0]],
                             "act": [[0, 0], [0, 1]]}}}
    report, status = run("spectrum", doc)
    assert status == 0 and len(report["result"]["points"]) == 1


def test_guard_precedence():
    g = resolve_guards({"hom": 5, "families": 7}, env={"SECONDSHEAF_GUARD_HOM": "9"},
                       flags={"families": 11, "hom": None})
    assert g.hom == 9 and g.families == 11


def test_guard_trip_exit_three(tmp_path):
    p = tmp_path / "doc.json"
    p.write_text(json.dumps(_doc("z6.json")))
    out = tmp_path / "r.json"
    assert main(["sections", "--input", str(p), "--guard-families", "1",
                 "--guard-constructive", "1", "--out", str(out)]) == 3
    assert json.loads(out.read_text())["status"] == "guard-trip"


def test_brute_force_cap_notice_exit_zero():
    report, status = run("sections", _doc("z6.json"), flags={"families": 2})
    assert status == 0
    assert report["guard_notices"]


def test_non_t0_commands():
    doc = _doc("non_t0.json")
    report, status = run("topology", doc)
    assert status == 0 and report["result"]["opens"][0] == "{}" and len(report["result"]["opens"]) == 2
    report, status = run("scheme", doc)
    assert status == 0 and report["records"][0]["reason"] == "hypothesis-failed:t0"
    report, _ = run("sections", doc)
    assert [o["order"] for o in report["result"]["opens"]] == [1, 2]


@pytest.mark.parametrize("name,expected", [
    ("z6_automorphism.json", None),
    ("z6_monomorphism.json", {"{0,3}": "{0,3}"}),
    ("z6_reduction.json", {"Z/2": "{0,3}"}),
])
def test_morphism_documents(name, expected):
    report, status = run("morphism", _doc(name))
    assert status == 0 and report["summary"]["fail"] == 0
    if expected is not None:
        assert report["result"]["point_map"] == expected


def test_morphism_precondition_is_input_error(tmp_path):
    doc = {"ring": {"kind": "zmod", "n": 2}, "modules": {"M": {"kind": "cyclic-product", "orders": [2, 2]}},
           "morphism": {"kind": "ring", "target_ring": {"kind": "zmod", "n": 2},
                        "module": {"kind": "natural"}}}
    p = tmp_path / "doc.json"
    p.write_text(json.dumps(doc))
    assert main(["morphism", "--input", str(p)]) == 2


def test_export_dot(tmp_path):
    dot = tmp_path / "g.dot"
    assert main(["export-dot", "--input", os.path.join(INSTANCES, "z6.json"), "--dot", str(dot)]) == 0
    assert dot.read_text().startswith("digraph")


def test_generate_round_trip(tmp_path):
    out = tmp_path / "inst.json"
    assert main(["generate", "--seed", "5", "--out", str(out)]) == 0
    doc = parse_document(out.read_text())
    assert {"M", "N", "K"} <= set(doc["modules"])
    report, status = run("verify", doc)
    assert status == 0


def test_reports_are_byte_identical():
    doc = _doc("z6.json")
    a, _ = run("verify", doc)
    b, _ = run("verify", json.loads(json.dumps(doc)))
    assert dump(a) == dump(b)
    assert "timings" not in a
    t, _ = run("verify", doc, timings=True)
    assert "timings" in t
