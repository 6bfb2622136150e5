import json
import re
import subprocess
import sys

import pytest

from braidlab import braid_canonical, build_word_poset, certify, parse_diagram
from braidlab.cli import main
from braidlab.reports import SCHEMA, TSV_COLUMNS
from oracles import DIAGRAMS


@pytest.fixture
def a2_file(tmp_path):
    p = tmp_path / "a2.cox"
    p.write_text(DIAGRAMS["A2"], encoding="utf-8")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("word, target, expected", [
    ("stst", "group", "ts (length 2)"),
    ("", "monoid", "1 (length 0)"),
    ("ss", "monoid", "ss (length 2)"),
    ("ss", "group", "1 (length 0)"),
])
def test_normal_form(capsys, a2_file, word, target, expected):
    code, out = run(capsys, "normal-form", "--diagram", a2_file, "--word", word, "--target", target)
    assert code == 0 and out.strip() == expected


def test_queries(capsys, a2_file):
    assert run(capsys, "reduced-lift", "--diagram", a2_file, "--word", "tst")[1].strip() == "sts (length 3)"
    assert run(capsys, "descents", "--diagram", a2_file, "--word", "stst")[1].split() == ["s", "t"]
    out = run(capsys, "prefixes", "--diagram", a2_file, "--word", "st")[1].split()
    assert out == ["1", "s", "st"]
    out = run(capsys, "max-reduced-prefix", "--diagram", a2_file, "--word", "stst")[1]
    assert out.strip() == "sts (length 3)"


def _dot_counts(text):
    return len(re.findall(r"^\s*n\d+ \[", text, re.M)), text.count("->")


def test_poset_outputs(capsys, a2_file, tmp_path):
    dot, js = tmp_path / "p.dot", tmp_path / "p.json"
    code, _ = run(capsys, "poset", "--diagram", a2_file, "--word", "sts", "--variant", "s",
                  "--dot", str(dot), "--out", str(js))
    assert code == 0
    assert _dot_counts(dot.read_text(encoding="utf-8")) == (6, 4)
    report = json.loads(js.read_text(encoding="utf-8"))
    assert report["schema"] == SCHEMA
    rec = report["instances"][0]
    assert rec["verdict"] == "NotContractible" and rec["betti"][0] == 1

    run(capsys, "poset", "--diagram", a2_file, "--word", "st", "--dot", str(dot), "--out", str(js))
    assert _dot_counts(dot.read_text(encoding="utf-8")) == (2, 1)
    assert json.loads(js.read_text())["instances"][0]["verdict"].startswith("Contractible")
    run(capsys, "poset", "--diagram", a2_file, "--word", "1", "--dot", str(dot))
    assert _dot_counts(dot.read_text(encoding="utf-8")) == (1, 0)


def test_certify_prints_json(capsys, a2_file):
    code, out = run(capsys, "certify", "--diagram", a2_file, "--word", "stst", "--variant", "r")
    rec = json.loads(out)["instances"][0]
    assert code == 0 and rec["certificate_kind"] in ("closure", "collapse", "homology+pi1")
    assert set(("diagram", "b_canonical", "variant", "verdict", "betti", "elapsed_ms")) <= set(rec)


def test_audit_and_fiber(capsys, a2_file):
    code, out = run(capsys, "audit-axioms", "--diagram", a2_file, "--kind", "full", "--max-len", "3")
    assert code == 0 and json.loads(out)["passed"]
    code, out = run(capsys, "audit-axioms", "--diagram", a2_file, "--inject-fault", "s,t,ts")
    assert code == 1
    assert any(v["axiom"] == "P2" for v in json.loads(out)["detail"]["violations"])
    code, out = run(capsys, "fiber-check", "--diagram", a2_file, "--word", "sts")
    assert code == 0 and json.loads(out)["detail"]["fiber_objects"] == 7


def _verdicts(report):
    return [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in report["instances"]]


def test_verify_campaign(capsys, a2_file, tmp_path):
    out = tmp_path / "run"
    code, text = run(capsys, "verify", "--diagram", a2_file, "--max-len", "4", "--out", str(out))
    assert code == 0 and "fail" not in text
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report["schema"] == SCHEMA and report["summary"]["failures"] == 0
    checks = {r["check"] for r in report["instances"]}
    assert checks == {"prefix-corollary", "certify", "subposet-sample", "fiber", "pi0", "audit"}
    tsv = (out / "summary.tsv").read_text(encoding="utf-8").splitlines()
    assert tsv[0].split("\t") == list(TSV_COLUMNS) and len(tsv) == len(report["instances"]) + 1

    # deterministic, also when split across processes
    out2 = tmp_path / "run2"
    run(capsys, "verify", "--diagram", a2_file, "--max-len", "4", "--jobs", "2", "--out", str(out2))
    again = json.loads((out2 / "report.json").read_text(encoding="utf-8"))
    assert _verdicts(again) == _verdicts(report)

    # recorded instances reproduce their verdicts
    d = parse_diagram(DIAGRAMS["A2"])
    for r in report["instances"]:
        if r["check"] == "certify":
            P = build_word_poset(d, braid_canonical(d, r["b_canonical"]), r["variant"])
            assert certify(P).verdict == r["verdict"]


def test_verify_seeded_fault(capsys, a2_file, tmp_path):
    out = tmp_path / "fault"
    code, _ = run(capsys, "verify", "--diagram", a2_file, "--max-len", "3",
                  "--inject-fault", "s,t,ts", "--out", str(out))
    assert code == 1
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    bad = [r for r in report["instances"] if r["status"] == "fail"]
    assert [r["check"] for r in bad] == ["audit"]
    assert any(v["axiom"] == "P2" for v in bad[0]["detail"]["violations"])


def test_verify_empty_diagram(capsys, tmp_path):
    p = tmp_path / "empty.cox"
    p.write_text("gens:\n", encoding="utf-8")
    code, _ = run(capsys, "verify", "--diagram", str(p), "--max-len", "3")
    assert code == 0


def test_errors(capsys, tmp_path, a2_file):
    bad = tmp_path / "bad.cox"
    bad.write_text("gens: s t\nm: s t 1\n", encoding="utf-8")
    assert main(["normal-form", "--diagram", str(bad), "--word", "s"]) == 2
    assert main(["normal-form", "--diagram", a2_file, "--word", "x"]) == 2
    assert main(["verify", "--diagram", a2_file, "--budget-poset", "0"]) == 2
    assert main(["poset", "--diagram", a2_file, "--word", "stst", "--budget-poset", "2"]) == 2


def test_module_entry_point(a2_file):
    res = subprocess.run([sys.executable, "-m", "braidlab", "normal-form", "--diagram", a2_file,
                          "--word", "stst"], capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "ts (length 2)"
