import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from nullcone.cli import SCOPE_OTHER, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def analyze_json(*extra):
    return run("analyze", "--format", "json", *extra)


def test_analyze_a3_2w2():
    code, out = analyze_json("--type", "A", "--rank", "3", "--weight", "0,2,0")
    assert code == 0
    rep = json.loads(out)
    assert rep["num_components"] == 2 and rep["scope"] == "catalog"


def test_analyze_a1_w1():
    code, out = analyze_json("--type", "A", "--rank", "1", "--weight", "1")
    rep = json.loads(out)
    assert code == 0 and (rep["dim_nullcone"], rep["num_components"]) == (2, 1)


def test_analyze_g2_w1():
    code, out = analyze_json("--type", "G", "--rank", "2", "--weight", "1,0")
    rep = json.loads(out)
    assert (rep["dim_module"], rep["dim_nullcone"], rep["num_components"]) == (7, 6, 1)


def test_json_round_trip():
    _, out = analyze_json("--type", "C", "--rank", "3", "--weight", "0,0,1")
    rep = json.loads(out)
    assert json.loads(json.dumps(rep)) == rep
    for s in rep["strata"]:
        lam = [Fraction(x) for x in s["lambda_euclid"]]
        assert sum(x * x for x in lam) == Fraction(s["norm2"])
        assert all(str(Fraction(x)) == x for x in s["lambda"])
    assert "timing" not in rep


def test_byte_identical_across_runs_and_threads():
    args = ("--type", "D", "--rank", "4", "--weight", "2,0,0,0")
    outs = {analyze_json(*args, "--threads", t)[1] for t in ("1", "2", "8")}
    outs.add(analyze_json(*args)[1])
    assert len(outs) == 1
    tsv = {run("analyze", "--format", "tsv", *args, "--threads", t)[1] for t in ("1", "3")}
    assert len(tsv) == 1


def test_non_catalog_label():
    code, out = analyze_json("--type", "A", "--rank", "2", "--weight", "2,1")
    assert code == 0 and json.loads(out)["scope"] == SCOPE_OTHER
    _, human = run("analyze", "--type", "A", "--rank", "2", "--weight", "2,1")
    assert SCOPE_OTHER in human


def test_dual_input_matches_catalog():
    _, out = analyze_json("--type", "A", "--rank", "2", "--weight", "0,3")
    assert json.loads(out)["scope"] == "catalog"


@pytest.mark.parametrize("argv", [
    ("analyze", "--type", "B", "--rank", "2", "--weight", "1,0"),
    ("analyze", "--type", "A", "--rank", "2", "--weight", "1"),
    ("analyze", "--type", "A", "--rank", "2", "--weight", "1,-1"),
    ("analyze", "--type", "A", "--rank", "2", "--weight", "0,0"),
    ("analyze", "--type", "A", "--rank", "2", "--weight", "x,1"),
    ("analyze", "--type", "A", "--rank", "2", "--weight", "1,0", "--threads", "0"),
    ("analyze", "--type", "A", "--rank", "2"),
    ("frobnicate",),
    ("verify", "--max-rank", "0"),
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_budget_exit(capsys):
    code, _ = run("analyze", "--type", "C", "--rank", "4", "--weight", "0,0,0,1", "--max-subsets", "10")
    assert code == 3
    assert "subsets visited" in capsys.readouterr().err


def test_dim_cap_exit(capsys):
    code, _ = run("analyze", "--type", "E", "--rank", "8", "--weight", "0,0,0,0,0,0,0,1", "--dim-cap", "100")
    assert code == 3


def test_verify_tiny_cap():
    code, out = run("verify", "--dim-cap", "5", "--max-rank", "3", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    statuses = {e["label"]: e["status"] for e in rep["entries"]}
    assert statuses["(A1, 4w1)"] == "PASS"
    assert statuses["(A2, w1+w2)"] == "SKIPPED"
    assert rep["summary"]["skipped"] > 0 and rep["summary"]["fail"] == 0
    code, human = run("verify", "--dim-cap", "5", "--max-rank", "3")
    assert "SKIPPED" in human and "PASS" in human


def test_verify_budget_exit():
    code, out = run("verify", "--dim-cap", "10", "--max-rank", "2", "--max-subsets", "3", "--format", "json")
    assert code == 3
    assert any(e["status"] == "BUDGET" for e in json.loads(out)["entries"])


@pytest.mark.parametrize("series,rank,w,rows,dim", [
    ("A", "1", "4", 5, 5), ("A", "2", "1,1", 7, 8), ("B", "3", "0,0,1", 8, 8)])
def test_weights(series, rank, w, rows, dim):
    code, out = run("weights", "--type", series, "--rank", rank, "--weight", w, "--format", "json")
    rep = json.loads(out)
    assert code == 0 and len(rep["weights"]) == rows and rep["dim_module"] == dim
    assert sum(x["multiplicity"] for x in rep["weights"]) == dim
    code, tsv = run("weights", "--type", series, "--rank", rank, "--weight", w, "--format", "tsv")
    assert len(tsv.strip().splitlines()) == rows + 1


def test_weights_zero_row():
    _, out = run("weights", "--type", "A", "--rank", "2", "--weight", "1,1", "--format", "json")
    zero = [x for x in json.loads(out)["weights"] if x["fw"] == ["0", "0"]]
    assert zero[0]["multiplicity"] == 2


def test_list_catalog():
    code, out = run("list-catalog", "--max-rank", "3", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    labels = {e["label"] for e in rep["entries"]}
    assert "(A2, 3w1)" in labels
    code, human = run("list-catalog", "--max-rank", "8")
    assert "(D8, w8)" in human and "129" in human


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "nullcone.cli", "analyze", "--type", "A",
                          "--rank", "1", "--weight", "2", "--format", "json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["dim_nullcone"] == 2
