import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from lsiverify import cli
from lsiverify.liealg import build_representation
from lsiverify.liealg.catalog import mutate
from lsiverify.ward import MUTATIONS


def run(*argv):
    return cli.run(list(argv))


@pytest.mark.parametrize("argv", [
    ["verify", "algebra", "--id", "sch", "--dim", "1"],
    ["verify", "algebra", "--id", "sv", "--window", "-2..2"],
    ["verify", "algebra", "--id", "central-charges", "--window", "-2..2"],
    ["verify", "algebra", "--id", "ecga", "--dim", "2", "--closure"],
    ["verify", "algebra", "--id", "sch", "--bind", "M=3/7"],
    ["verify", "symmetry"],
    ["verify", "ward", "--case", "fixed-mass-symmetric", "--branch", "t>0"],
    ["verify", "ward", "--case", "dual-cga-remark-e", "--bind", "xi2=-xi1", "--mutations"],
    ["verify", "constraints"],
    ["causality", "integral", "--n", "0", "--x", "1.5", "--half-plane", "below"],
    ["causality", "integral", "--n", "1", "--x", "0.7", "--half-plane", "above"],
    ["causality", "dualize", "--x", "0.8", "--xi", "0.3", "--t", "-1", "--r", "1"],
    ["response", "collapse", "--y", "0.5,3"],
])
def test_passing_commands_exit_zero(argv, capsys):
    code, report = run(*argv)
    assert code == 0, report.to_text() if report else capsys.readouterr().err


def test_generic_dual_cga_exits_one():
    code, report = run("verify", "ward", "--case", "dual-cga-remark-e", "--branch", "t>0")
    assert code == 1 and {c.name for c in report.failures} == {"t>0 Vp", "t>0 D"}


@pytest.mark.parametrize("argv", [
    ["verify", "algebra", "--id", "nope"],
    ["verify", "algebra", "--window", "3..1"],
    ["verify", "algebra", "--id", "sch", "--bind", "nope=1"],
    ["verify", "ward"],
    ["verify", "ward", "--case", "asymmetric", "--bind", "x1"],
    ["verify", "ward", "--case", "asymmetric", "--branch", "t=0"],
    ["causality", "integral", "--x", "-1"],
    ["causality", "integral", "--x", "abc"],
    ["causality", "dualize", "--x", "0.5", "--t", "0"],
    ["bogus"],
    [],
])
def test_usage_errors_exit_two(argv):
    code, report = run(*argv)
    assert code == 2 and report is None


def test_json_is_deterministic(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code, _ = run("verify", "ward", "--case", "asymmetric", "--format", "json", "--out", str(path))
        assert code == 0
        doc = json.loads(path.read_text())
        doc.pop("wall_time")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]


def test_causality_json_schema(capsys):
    code, _ = run("causality", "report", "--x", "0.8", "--xi", "0.3", "--format", "json")
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    data = doc["data"]
    assert set(data) == {"task", "grid", "aggregates"}
    assert {"t", "r", "re", "im", "err"} <= set(data["grid"][0])


SCH = build_representation("sch")


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SCH.labels()), st.sampled_from(sorted(MUTATIONS)))
def test_mutated_generator_exits_one(label, name):
    bad = mutate(SCH, label, MUTATIONS[name])
    if bad.image(label) == SCH.image(label):
        return
    original = cli.build_representation
    cli.build_representation = lambda *a, **k: bad
    try:
        code, report = run("verify", "algebra", "--id", "sch")
    finally:
        cli.build_representation = original
    assert code == 1


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lsiverify.cli", "verify", "algebra", "--id", "cga"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
