import json
import subprocess
import sys

import pytest

from markoffbm import report
from markoffbm.acceptance import FAIL, INCONCLUSIVE, SuiteOptions, criterion_3, criterion_7, mutated_hilbert
from markoffbm.cli import read_config, run


def run_json(capsys, argv):
    code = run(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_analyze_obstruction(capsys):
    code, rep = run_json(capsys, ["analyze", "--a", "3", "--m", "14", "--box", "50"])
    assert code == 0
    assert rep["schema"] == 1
    assert rep["verdict"] == "ObstructionCertified"
    assert rep["box_search"]["count"] == 0
    assert rep["field_degree"] == 8
    assert rep["thm11_consistency"] is True


def test_analyze_locally_insoluble(capsys):
    code, rep = run_json(capsys, ["analyze", "--a", "5", "--m", "3", "--box", "10"])
    assert code == 0
    assert rep["verdict"] == "LocallyInsoluble"
    assert rep["local_solubility"]["blocking_places"] == [2]


def test_analyze_three_adic(capsys):
    _, rep = run_json(capsys, ["analyze", "--a", "10", "--m", "43", "--box", "50"])
    b = {pr["p"]: pr["achieved"] for pr in rep["profiles"] if pr["class"] == "B"}
    assert rep["verdict"] == "ObstructionCertified"
    assert b == {"inf": ["0"], 2: ["0"], 3: ["1/2"]}


def test_analyze_warns_on_square_a(capsys):
    code = run(["analyze", "--a", "9", "--m", "14", "--box", "5"])
    err = capsys.readouterr().err
    assert code == 0 and "sqrt(a) is rational" in err


def test_reports_are_deterministic(capsys):
    argv = ["analyze", "--a", "-3", "--m", "-6", "--box", "30", "--json"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_verdict_strings(capsys):
    allowed = {"ObstructionCertified", "NoObstructionCertified", "Inconclusive", "LocallyInsoluble"}
    for a, m in [(3, 14), (5, 3), (-2, -1), (2, 5)]:
        _, rep = run_json(capsys, ["analyze", "--a", str(a), "--m", str(m), "--box", "5"])
        assert rep["verdict"] in allowed


def test_degenerate_exit_code(capsys):
    assert run(["analyze", "--a", "2", "--m", "8"]) == 2
    assert run(["analyze", "--a", "2", "--m", "0"]) == 2


def test_usage_errors(capsys):
    assert run(["analyze", "--a", "3"]) == 1
    assert run(["cohomology", "--case", "nope"]) == 1
    with pytest.raises(SystemExit) as info:
        run(["bogus"])
    assert info.value.code == 1


def test_family(capsys):
    code, rep = run_json(capsys, ["family", "--prop", "3.6", "--params", "a=3,d=1", "--box", "30"])
    assert code == 0 and rep["matches_expected"]
    assert (rep["a"], rep["m"]) == (3, 14)
    code, rep = run_json(capsys, ["family", "--prop", "3.11", "--params", "3", "--box", "30"])
    assert code == 0 and rep["analysis"]["verdict"] == "ObstructionCertified"


def test_family_violation(capsys):
    assert run(["family", "--prop", "3.6", "--params", "3,3"]) == 1
    assert "p = +-1 mod 8 or (a/p) = -1" in capsys.readouterr().err


def test_cohomology(capsys):
    _, rep = run_json(capsys, ["cohomology", "--case", "prop2.3"])
    assert rep["invariant_factors"] == [2, 2]
    _, rep = run_json(capsys, ["cohomology", "--case", "lemma5.1"])
    assert rep["invariant_factors"] == [2, 4] and rep["witness"]["order"] == 4
    _, rep = run_json(capsys, ["cohomology", "--case", "prop2.2-case3"])
    assert rep["invariant_factors"] == [] and rep["group"] == "0"


def test_lines_and_search(capsys):
    _, rep = run_json(capsys, ["lines", "--a", "2", "--m", "3"])
    assert len(rep["lines"]) == 27 and all(L["on_surface"] for L in rep["lines"])
    assert rep["lines"][0]["equations"] == ["x = 0", "t = 0"]
    _, rep = run_json(capsys, ["search", "--a", "2", "--m", "1", "--box", "2", "--orbit-depth", "1"])
    assert [0, 0, 1] in rep["points"] and rep["orbit"]["points"]


def test_text_mode(capsys):
    assert run(["analyze", "--a", "3", "--m", "14", "--box", "10"]) == 0
    out = capsys.readouterr().out
    assert "verdict: ObstructionCertified" in out
    assert run(["lines", "--a", "2", "--m", "3"]) == 0
    assert "l4(1,1)" in capsys.readouterr().out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# analysis settings\na = 3\nm = 14\nbox = 5\njson = true\n")
    assert read_config(str(cfg))["box"] == 5
    assert run(["analyze", "--config", str(cfg), "--m", "43"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert (rep["a"], rep["m"]) == (3, 43)
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert run(["analyze", "--config", str(bad)]) == 1


def test_selftest_mutation(capsys):
    assert criterion_3(SuiteOptions(symbol=mutated_hilbert)).status == FAIL
    assert run(["selftest", "--only", "3", "--inject-fault", "hilbert"]) == 3
    assert "[FAIL] criterion 3" in capsys.readouterr().out


def test_selftest_low_precision_is_inconclusive(capsys):
    assert criterion_7(SuiteOptions(prec_cap=1)).status == INCONCLUSIVE
    assert run(["selftest", "--only", "2,7", "--prec-cap", "1"]) == 0
    out = capsys.readouterr().out
    assert "[INCONCLUSIVE] criterion 7" in out and "[PASS] criterion 2" in out


def test_selftest_subset_json(capsys):
    code, rep = run_json(capsys, ["selftest", "--only", "2,4,6"])
    assert code == 0 and rep["failed"] == [] and len(rep["results"]) == 3


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "markoffbm.cli", "cohomology", "--case", "prop2.3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "Z/2 + Z/2" in out.stdout


def test_format_tower():
    from markoffbm.tower import TowerElement
    one, al, be, ga = TowerElement.generators((2, 3))
    assert report.format_tower(al * 2 - be + 1) == "1 + 2α - β"
