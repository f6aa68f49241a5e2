import json
import subprocess
import sys

import pytest

from manypoints.cli import main

EX1 = "q=2; h=x; f=x^5+x^3+x^2+x"
EX2 = "q=5; f=x^5-x^3+x"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "--curve", EX1)
    assert code == 0
    assert out == "N1=4\tN2=8\tdeg2=2\ta1=1\ta2=2\th=10\tstructure=Z/10\n"


def test_analyze_with_separate_flags(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "2", "--h", "x", "--f", "x^5+x^3+x^2+x")
    assert code == 0 and "h=10" in out


def test_analyze_with_modulus(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "16", "--mod", "a^4+a+1", "--h", "x^2+x", "--f", "x^5+x^3+x^2+x")
    assert code == 0 and out.startswith("N1=")


def test_places(capsys):
    code, out, _ = run(capsys, "places", "--curve", EX1)
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == ["P_inf", "P_{0}", "P_{1,0}", "P_{1,1}"]


def test_classgroup(capsys):
    code, out, _ = run(capsys, "classgroup", "--curve", EX2, "--elements")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "h=64; structure=Z/8 x Z/8"
    assert sum(line.startswith("generator") for line in lines) == 2
    assert sum(line.startswith("element") for line in lines) == 64


def test_subgroups(capsys):
    code, out, _ = run(capsys, "subgroups", "--curve", EX1)
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert [(r[0], r[1]) for r in rows] == [("1", "10"), ("2", "5"), ("5", "2"), ("10", "1")]
    code, out, _ = run(capsys, "subgroups", "--curve", EX2, "--index", "8")
    assert code == 0 and all(line.startswith("8\t") for line in out.splitlines()[1:])


def test_covers_from_generating_places(capsys, tmp_path):
    out_file = tmp_path / "w.jsonl"
    code, _, _ = run(capsys, "covers", "--curve", EX2, "--place", "P_{0}",
                     "--gen-places", "P_inf; P_{4,3}; P_{4,2}", "--out", str(out_file))
    assert code == 0
    w = json.loads(out_file.read_text())
    assert (w["d"], w["genus"], w["N"]) == (8, 9, 32)
    code, out, _ = run(capsys, "verify", str(out_file))
    assert code == 0 and out.startswith("PASS\t1\t")


def test_covers_window(capsys):
    code, out, _ = run(capsys, "covers", "--curve", EX1, "--genus-min", "6", "--genus-max", "6", "--min-split", "1")
    assert code == 0
    assert sorted(json.loads(s)["N"] for s in out.splitlines()) == [5, 5, 10, 10]


def test_verify_detects_tampering(capsys, tmp_path):
    code, out, _ = run(capsys, "covers", "--curve", EX2, "--place", "P_{0}", "--gen-places", "P_inf;P_{4,3};P_{4,2}")
    obj = json.loads(out)
    obj["N"] = 40
    p = tmp_path / "bad.jsonl"
    p.write_text(json.dumps(obj) + "\n")
    code, out, _ = run(capsys, "verify", str(p))
    assert code == 1 and out.startswith("FAIL\t1\t") and "N: stated 40" in out


def test_search_writes_report_and_witnesses(capsys, tmp_path):
    out_file = tmp_path / "best.jsonl"
    bounds = tmp_path / "b.csv"
    bounds.write_text("q,genus,lower,upper\n3,3,8,8\n")
    code, out, err = run(capsys, "search", "--q", "3", "--genus-min", "3", "--genus-max", "4",
                         "--bounds", str(bounds), "--out", str(out_file), "--progress")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "genus\tbest_N\tclassification\twitness_ref"
    assert lines[1].startswith("3\t8\tmeets_many_points_criterion\t")
    assert "searched 134 curves" in err and "curves=" in err
    assert len(out_file.read_text().splitlines()) == 2
    assert run(capsys, "verify", str(out_file))[0] == 0


def test_search_explicit_curves(capsys, tmp_path):
    curves = tmp_path / "c.txt"
    curves.write_text(EX2 + "\n")
    code, out, _ = run(capsys, "search", "--q", "5", "--curves", str(curves), "--genus-min", "9", "--genus-max", "9")
    assert code == 0
    assert out.splitlines()[1].startswith("9\t32\timproves_lower_bound\t")


def test_verify_paper_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "ex1,ex2")
    assert code == 0
    assert out.splitlines()[-1].endswith("checks passed")
    assert all(line.startswith("PASS") for line in out.splitlines()[:-1])


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["analyze"],
        ["analyze", "--curve", EX1, "--f", "x^5+1"],
        ["analyze", "--q", "6", "--f", "x^5+1"],
        ["analyze", "--curve", "q=5; f=x^4+1"],
        ["analyze", "--curve", "q=5; f=x^5+x^2+"],
        ["covers", "--curve", EX1, "--gen-places", "P_inf"],
        ["covers", "--curve", EX1, "--place", "P_{7}"],
        ["covers", "--curve", EX1, "--genus-min", "9", "--genus-max", "4"],
        ["search"],
        ["search", "--q", "5", "--family", "char2_full"],
        ["verify", "/nonexistent/w.jsonl"],
        ["verify-paper", "--only", "nope"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "manypoints", "analyze", "--curve", EX1],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "structure=Z/10" in res.stdout
