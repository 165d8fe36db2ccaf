import json
import subprocess
import sys

import pytest

from termgraph.cli import fixture_text, main

from conftest import FIXTURE_FILE


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    data = json.loads(out)
    assert data["exit"] == code
    return code, data


def test_fixtures_flag(capsys):
    code, out, _ = run(capsys, "--fixtures")
    assert code == 0 and out == fixture_text()
    assert "graph FGA" in out


def test_no_command_is_error(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "usage" in err


def test_parse_fixtures(capsys):
    code, out, _ = run(capsys, "parse")
    assert code == 0 and "graph VD-R {" in out


def test_parse_explicit_file(capsys):
    code, data = run_json(capsys, "parse", str(FIXTURE_FILE))
    assert code == 0
    assert data["signature"] == {"a": 0, "b": 0, "f": 2, "g": 1}
    assert data["sequences"]["share-prefix"] == ["TreeFAA", "SharedFAA", "SharedFAA2"]


def test_collapse(capsys):
    code, out, _ = run(capsys, "collapse", "--source", "FGA", "--target", "FGAs")
    assert code == 0 and "4 -> C" in out
    code, _, _ = run(capsys, "collapse", "--source", "FGAs", "--target", "FGA")
    assert code == 1


def test_iso(capsys):
    assert run(capsys, "iso", "--graphs", "TreeFAA", "G1")[0] == 0
    assert run(capsys, "iso", "--graphs", "G1", "G3")[0] == 1


def test_embed_variants(capsys):
    code, data = run_json(
        capsys, "embed", "--larger", "VA-L", "--smaller", "VA-R", "--variant", "attempt1"
    )
    assert code == 0 and data["direction"] == "smaller -> larger"
    assert data["map"] == {"A": "1", "B": "2", "C": "3", "D": "2", "E": "3"}
    code, data = run_json(capsys, "embed", "--larger", "VA-L", "--smaller", "VA-R")
    assert code == 1 and data["holds"] is False


def test_embed_witness_by_name(capsys):
    code, data = run_json(capsys, "embed", "--larger", "VC-L", "--smaller", "VC-R")
    assert code == 0
    assert data["map"] == {"1": "A", "2": "B", "3": "C", "4": "D"}


def test_embed_strict(capsys):
    code, out, _ = run(
        capsys, "embed", "--larger", "TreeFAA", "--smaller", "SharedFAA", "--strict", "--prec", "sharing"
    )
    assert code == 0 and "strict = non-mutual" in out
    code, _, _ = run(capsys, "embed", "--larger", "VD-L", "--smaller", "VD-R", "--strict")
    assert code == 1


def test_rewrite_cycle(capsys):
    code, out, _ = run(capsys, "rewrite", "--graph", "TreeFAA", "--grs", "share")
    assert code == 0 and "status: cycle_detected (1, 2)" in out
    assert "TreeFAA_2" in out


def test_rewrite_normal_form_flag(capsys):
    code, data = run_json(capsys, "rewrite", "--graph", "FGA", "--grs", "ab", "--normal-form")
    assert code == 0 and data["status"] == "normal_form"
    assert len(data["steps"]) == 2
    code, _, _ = run(capsys, "rewrite", "--graph", "TreeFAA", "--grs", "share", "--normal-form")
    assert code == 1


def test_rewrite_step_budget(capsys):
    code, data = run_json(capsys, "rewrite", "--graph", "FGA", "--grs", "ab", "--steps", "1")
    assert data["status"] == "budget_exhausted" and len(data["steps"]) == 1


def test_rewrite_grs_from_file(capsys, tmp_path):
    rules = tmp_path / "rules.tg"
    rules.write_text("rule g-to-a { 1: g(2)  2: ?x  3: a  lhs: 1  rhs: 3 }\n")
    code, data = run_json(capsys, "rewrite", "--graph", "FGA", "--grs", str(rules))
    assert code == 0 and data["steps"][0]["rule"] == "g-to-a"


def test_lpo(capsys):
    assert run(capsys, "lpo", "--smaller", "FAB", "--larger", "FBA", "--prec", "ab")[0] == 0
    assert run(capsys, "lpo", "--smaller", "FBA", "--larger", "FAB", "--prec", "ab")[0] == 1
    code, data = run_json(capsys, "lpo", "--smaller", "FGAs", "--larger", "FGAs")
    assert code == 1 and data["verdict"] == "inapplicable"


def test_orient(capsys):
    code, out, _ = run(capsys, "orient", "--grs", "swap", "--prec", "ab")
    assert code == 0 and "swap: decreasing" in out
    assert "does not prove termination" in out
    code, out, _ = run(capsys, "orient", "--grs", "share", "--prec", "sharing", "--order", "embedding")
    assert code == 0 and "strict = non-mutual" in out
    assert "does not prove termination" in out


def test_orient_variables(capsys, tmp_path):
    rules = tmp_path / "rules.tg"
    rules.write_text("rule proj { 1: g(2)  2: ?x  lhs: 1  rhs: 2 }\n")
    code, _, err = run(capsys, "orient", "--grs", str(rules))
    assert code == 2 and "vars_as_constants" in err
    code, out, _ = run(capsys, "orient", "--grs", str(rules), "--vars-as-constants")
    assert code == 0 and "proj: decreasing" in out


def test_certify(capsys):
    code, data = run_json(
        capsys, "certify", "--graph", "TreeFAA", "--grs", "share", "--prec", "sharing", "--order", "embedding"
    )
    assert code == 1
    assert [s["decreasing"] for s in data["steps"]] == [True, False]
    code, _, _ = run(capsys, "certify", "--graph", "FBA", "--grs", "swap", "--prec", "ab")
    assert code == 0


def test_good_pair(capsys):
    code, out, _ = run(capsys, "good-pair", "--sequence", "share-prefix", "--prec", "sharing")
    assert code == 0 and "good pair (2, 3)" in out
    code, _, _ = run(capsys, "good-pair", "--graphs", "FAB", "FBA")
    assert code == 1
    code, _, err = run(capsys, "good-pair")
    assert code == 2 and "--sequence" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["embed", "--larger", "nope", "--smaller", "G1"],
        ["lpo", "--smaller", "G1", "--larger", "G2", "--prec", "nope"],
        ["parse", "/does/not/exist.tg"],
        ["rewrite", "--graph", "G1", "--grs", "share", "--steps", "-1"],
    ],
)
def test_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("tgr: error:")


def test_syntax_error_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.tg"
    bad.write_text("graph G {\n  1: f(2\n}\n")
    code, _, err = run(capsys, "parse", str(bad))
    assert code == 2 and "3:" in err


def test_json_is_deterministic(capsys):
    argv = ["good-pair", "--sequence", "share-prefix", "--prec", "sharing", "--json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)["command"] == "good-pair"


@pytest.mark.parametrize(
    "name",
    ["FGA", "FGAs", "G1", "G2", "G3", "VA-L", "VA-R", "FAB", "FBA", "VC-L", "VC-R", "VD-L", "VD-R"],
)
def test_every_fixture_embeds_itself(capsys, name):
    code, data = run_json(capsys, "embed", "--larger", name, "--smaller", name)
    assert code == 0 and data["holds"] is True


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "termgraph.cli", "iso", "--graphs", "G1", "TreeFAA"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "isomorphic" in proc.stdout


def test_duplicate_inlet_warning(capsys):
    argv = ["lpo", "--smaller", "SharedFAA", "--larger", "TreeFAA", "--prec", "sharing"]
    code, _, err = run(capsys, *argv)
    assert code == 0 and "tgr: warning: repeated inlets" in err
    code, data = run_json(capsys, *argv)
    assert data["warnings"] and data["holds"] is True
