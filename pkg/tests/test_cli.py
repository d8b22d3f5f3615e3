"""End-to-end tests for the command-line front end.

Everything drives ``main(argv)`` directly: the return value is the
exit code and capsys picks up the rendered output, so the full
parse -> compute -> render path is exercised without subprocesses.
"""

import io
import json

import pytest

from rowiso.cli import InputDocument, export_dot, main, parse, render
from rowiso.errors import ValidationError
from rowiso.pair import PairPresentation
from rowiso.presentation import Presentation

FREE2_DOC = {"m": 2, "base": ["b"], "s_edges": []}
CYCLE_DOC = {"m": 1, "base": ["a", "b"],
             "s_edges": [["a", 1, "b"], ["b", 1, "a"]]}
FOUR_CORNERS_DOC = {
    "m": 1, "n": 1, "theta": [[1, 1, 1, 1]],
    "base": ["a", "b", "c", "d"],
    "s_edges": [["a", 1, "a"], ["b", 1, "b"]],
    "t_edges": [["a", 1, "a"], ["c", 1, "c"]],
}
# a twist that moves three of the four letter pairs
TWISTED_FREE_DOC = {
    "m": 2, "n": 2,
    "theta": [[1, 1, 2, 2], [1, 2, 1, 1], [2, 1, 2, 1], [2, 2, 1, 2]],
    "base": ["b"], "s_edges": [], "t_edges": [],
}
COLLISION_DOC = {
    "m": 1, "n": 1, "theta": [[1, 1, 1, 1]],
    "base": ["a", "c"],
    "s_edges": [["c", 1, "a"]], "t_edges": [["a", 1, "a"]],
}
NONCOMMUTING_DOC = {
    "m": 1, "n": 1, "theta": [[1, 1, 1, 1]],
    "base": ["a", "b"],
    "s_edges": [["a", 1, "b"]], "t_edges": [["a", 1, "a"]],
}


def doc_file(tmp_path, payload, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


# -- parsing -----------------------------------------------------------------


class TestParse:
    def test_single_round_trip(self):
        doc = parse(json.dumps(CYCLE_DOC))
        built = doc.build()
        assert isinstance(built, Presentation)
        assert built.base == ("a", "b")
        assert built.edges == {("a", 1): "b", ("b", 1): "a"}

    def test_pair_round_trip(self):
        doc = parse(json.dumps(FOUR_CORNERS_DOC))
        built = doc.build()
        assert isinstance(built, PairPresentation)
        assert built.theta.is_identity
        assert built.t_edges == {("a", 1): "a", ("c", 1): "c"}

    def test_unknown_keys_rejected(self):
        bad = dict(FREE2_DOC, generators=2)
        with pytest.raises(ValidationError, match="unknown keys"):
            parse(json.dumps(bad))

    def test_missing_required_key(self):
        with pytest.raises(ValidationError, match="missing required key"):
            parse(json.dumps({"m": 1, "base": ["b"]}))

    def test_theta_exactly_when_n(self):
        with pytest.raises(ValidationError, match="theta is required"):
            parse(json.dumps(dict(FREE2_DOC, n=2)))
        with pytest.raises(ValidationError, match="theta is required"):
            parse(json.dumps(dict(FREE2_DOC, theta=[[1, 1, 1, 1]])))

    def test_t_edges_requires_n(self):
        with pytest.raises(ValidationError, match="t_edges requires n"):
            parse(json.dumps(dict(FREE2_DOC, t_edges=[])))

    def test_malformed_json_reports_position(self):
        with pytest.raises(ValidationError, match="line 1, column"):
            parse("{\"m\": }")

    def test_document_must_be_object(self):
        with pytest.raises(ValidationError, match="JSON object"):
            parse("[1, 2]")

    def test_edge_rows_shape_checked(self):
        bad = dict(FREE2_DOC, s_edges=[["a", "one", "a"]])
        with pytest.raises(ValidationError, match="node, label, node"):
            parse(json.dumps(bad))

    def test_pair_without_t_edges_defaults_empty(self):
        doc = parse(json.dumps({"m": 1, "n": 1, "theta": [[1, 1, 1, 1]],
                                "base": ["b"], "s_edges": []}))
        assert doc.t_edges == ()
        assert doc.build().t_edges == {}

    def test_duplicate_edge_slot_rejected_on_build(self):
        doc = parse(json.dumps(dict(
            CYCLE_DOC, s_edges=[["a", 1, "b"], ["a", 1, "a"]])))
        with pytest.raises(ValidationError, match="declared twice"):
            doc.build()


# -- rendering ---------------------------------------------------------------


class TestRender:
    def test_scalars_lists_and_dicts(self):
        text = render({"ok": True, "depth": 3, "witness": None,
                       "rows": [], "parts": {"left": [1, 2], "right": False}})
        assert text == ("ok: true\n"
                        "depth: 3\n"
                        "witness: -\n"
                        "rows: (none)\n"
                        "parts:\n"
                        "  left: [1, 2]\n"
                        "  right: false\n")

    def test_export_dot_exact_bytes(self):
        doc = parse(json.dumps({
            "m": 1, "n": 1, "theta": [[1, 1, 1, 1]],
            "base": ["a", "b"],
            "s_edges": [["a", 1, "b"]], "t_edges": [["b", 1, "a"]]}))
        assert export_dot(doc) == (
            'digraph presentation {\n'
            '  "a";\n'
            '  "b";\n'
            '  "a" -> "b" [style=solid, label="s 1"];\n'
            '  "b" -> "a" [style=dashed, label="t 1"];\n'
            '}\n')


# -- exit codes --------------------------------------------------------------


class TestExitCodes:
    def test_success_is_zero(self, tmp_path, capsys):
        assert main(["wold", doc_file(tmp_path, CYCLE_DOC)]) == 0
        out = capsys.readouterr().out
        assert "row_unitary: true" in out

    def test_invalid_input_is_two(self, tmp_path, capsys):
        bad = doc_file(tmp_path, dict(FREE2_DOC, typo=1))
        assert main(["wold", bad]) == 2
        assert "unknown keys" in capsys.readouterr().err

    def test_wrong_document_kind_is_two(self, tmp_path, capsys):
        assert main(["slocinski", doc_file(tmp_path, FREE2_DOC)]) == 2
        assert "pair document" in capsys.readouterr().err
        assert main(["wold", doc_file(tmp_path, FOUR_CORNERS_DOC)]) == 2

    def test_missing_file_is_two(self, capsys):
        assert main(["wold", "/nonexistent/doc.json"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_property_failure_is_one(self, tmp_path, capsys):
        path = doc_file(tmp_path, NONCOMMUTING_DOC)
        assert main(["check-commute", path]) == 1
        assert "commuting: false" in capsys.readouterr().out

    def test_contract_violation_is_one(self, tmp_path, capsys):
        # jointly non-injective pair: the decomposition walk trips the
        # predecessor contract
        path = doc_file(tmp_path, COLLISION_DOC)
        assert main(["slocinski", path]) == 1
        assert "property fails" in capsys.readouterr().err

    def test_validate_reports_violations_with_one(self, tmp_path, capsys):
        bad = {"m": 1, "base": ["a"], "s_edges": [["a", 2, "a"]]}
        assert main(["validate", doc_file(tmp_path, bad)]) == 1
        out = capsys.readouterr().out
        assert "valid: false" in out
        assert "violations:" in out

    def test_budget_exceeded_is_three(self, capsys):
        code = main(["search", "--max-base", "4", "--m", "2", "--n", "2",
                     "--theta-all", "--property", "doubly-commuting"])
        assert code == 3
        assert "budget exceeded" in capsys.readouterr().err


# -- subcommands -------------------------------------------------------------


class TestSubcommands:
    def test_wold_free_family(self, tmp_path, capsys):
        assert main(["wold", doc_file(tmp_path, FREE2_DOC)]) == 0
        out = capsys.readouterr().out
        assert "multiplicity: 1" in out
        assert "row_unitary: false" in out

    def test_classify_cycle(self, tmp_path, capsys):
        assert main(["classify", doc_file(tmp_path, CYCLE_DOC)]) == 0
        out = capsys.readouterr().out
        assert "components:" in out
        assert "H_sing:" in out

    def test_check_commute_ok(self, tmp_path, capsys):
        assert main(["check-commute",
                     doc_file(tmp_path, FOUR_CORNERS_DOC)]) == 0
        assert "commuting: true" in capsys.readouterr().out

    def test_check_doubly_four_corners(self, tmp_path, capsys):
        assert main(["check-doubly",
                     doc_file(tmp_path, FOUR_CORNERS_DOC)]) == 0
        assert "doubly_commuting: true" in capsys.readouterr().out

    def test_twisted_free_pair_commutes_but_not_doubly(self, tmp_path,
                                                       capsys):
        # the twist scrambles the adjoint displays even with no edges
        path = doc_file(tmp_path, TWISTED_FREE_DOC)
        assert main(["check-commute", path]) == 0
        assert "commuting: true" in capsys.readouterr().out
        assert main(["check-doubly", path]) == 1
        assert "doubly_commuting: false" in capsys.readouterr().out

    def test_check_doubly_failure(self, tmp_path, capsys):
        assert main(["check-doubly", doc_file(tmp_path, COLLISION_DOC)]) == 1
        assert "doubly_commuting: false" in capsys.readouterr().out

    def test_slocinski_four_corners(self, tmp_path, capsys):
        path = doc_file(tmp_path, FOUR_CORNERS_DOC)
        assert main(["slocinski", path]) == 0
        out = capsys.readouterr().out
        assert "exists: true" in out
        assert main(["slocinski", path, "--order", "ts"]) == 0

    def test_oracle_subcommand(self, tmp_path, capsys):
        assert main(["oracle", doc_file(tmp_path, FOUR_CORNERS_DOC),
                     "--depth", "4"]) == 0
        out = capsys.readouterr().out
        assert "ok: true" in out
        assert "depth: 4" in out

    def test_oracle_depth_budget(self, tmp_path, capsys):
        free3 = {"m": 3, "base": ["b"], "s_edges": []}
        assert main(["oracle", doc_file(tmp_path, free3),
                     "--depth", "11"]) == 3
        assert "budget exceeded" in capsys.readouterr().err

    def test_search_subcommand(self, capsys):
        code = main(["search", "--max-base", "1", "--m", "1", "--n", "1",
                     "--property", "doubly-commuting", "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["candidates"] == 4
        assert len(payload["hits"]) == 4

    def test_export_dot_to_stdout(self, tmp_path, capsys):
        assert main(["export-dot", doc_file(tmp_path, FOUR_CORNERS_DOC)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph presentation {")
        assert out.endswith("}\n")
        assert '"b" -> "b" [style=solid, label="s 1"];' in out

    def test_stdin_input(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(CYCLE_DOC)))
        assert main(["wold", "-"]) == 0
        assert "row_unitary: true" in capsys.readouterr().out


# -- machine output ----------------------------------------------------------


class TestJsonOutput:
    def test_json_is_canonical(self, tmp_path, capsys):
        path = doc_file(tmp_path, FOUR_CORNERS_DOC)
        assert main(["slocinski", path, "--json"]) == 0
        first = capsys.readouterr().out
        payload = json.loads(first)
        assert first == json.dumps(payload, sort_keys=True, indent=2) + "\n"
        assert payload["exists"] is True
        assert payload["hypotheses"]["doubly_commuting"] in (True, False)
        assert main(["slocinski", path, "--json"]) == 0
        assert capsys.readouterr().out == first

    def test_json_wold(self, tmp_path, capsys):
        assert main(["wold", doc_file(tmp_path, FREE2_DOC), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["multiplicity"] == 1
        assert payload["unitary_part"]["seeds"] == []

    def test_json_validate_violations(self, tmp_path, capsys):
        bad = {"m": 1, "base": ["a"], "s_edges": [["a", 2, "a"]]}
        assert main(["validate", doc_file(tmp_path, bad), "--json"]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["valid"] is False
        assert payload["violations"]
