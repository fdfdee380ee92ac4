import csv
import json
import subprocess
import sys

import pytest

from finmode import fixtures
from finmode.cli import main
from finmode.field import parse, serialize


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def abc_file(tmp_path):
    p = tmp_path / "abc.json"
    p.write_text(serialize(fixtures.abc(1, 2, 3)))
    return str(p)


def test_make_abc_round_trip(capsys):
    code, out, _ = run(capsys, "make", "abc", "--A", "1", "--B", "1", "--C", "1")
    assert code == 0
    f = parse(out)
    assert len(f.support) == 6


@pytest.mark.parametrize("argv,family", [
    (["abc"], "Beltrami"),
    (["planar-q", "--normal", "0,0,1", "--q", "0,1"], "PlanarQ"),
    (["planar-q", "--normal", "1,2,2", "--q", "1", "--p", "6"], "Beltrami"),
    (["planar-perp", "--normal", "1,1,0"], "PlanarPerp"),
    (["line", "--direction", "1,2,3"], "Line"),
    (["beltrami-random", "--seed", "7", "--modes", "10"], "Beltrami"),
    (["perturbed-abc"], "NonSolution"),
])
def test_make_then_classify(capsys, tmp_path, argv, family):
    code, out, _ = run(capsys, "make", *argv)
    assert code == 0
    p = tmp_path / "f.json"
    p.write_text(out)
    code, out, _ = run(capsys, "classify", str(p))
    assert json.loads(out)["tag"] == family
    assert code == (1 if family == "NonSolution" else 0)


def test_make_rejects_bad_params(capsys):
    assert run(capsys, "make", "planar-q", "--p", "5")[0] == 2
    assert run(capsys, "make", "line", "--direction", "0,0,0")[0] == 2
    assert run(capsys, "make", "abc", "--A", "x")[0] == 2
    assert run(capsys, "make", "nonsense")[0] == 2
    assert run(capsys, "make", "beltrami-random", "--modes", "2")[0] == 2


def test_validate(capsys, tmp_path, abc_file):
    code, out, _ = run(capsys, "validate", abc_file)
    assert code == 0 and json.loads(out)["ok"]
    p = tmp_path / "tet.json"
    p.write_text(serialize(fixtures.tetrahedron()))
    assert run(capsys, "validate", str(p))[0] == 0
    # unpaired modes in a real document are a schema error
    d = json.loads(p.read_text())
    d["real_valued"] = True
    p.write_text(json.dumps(d))
    assert run(capsys, "validate", str(p))[0] == 2
    # parses, but the coefficient is not normal to its frequency
    d = json.loads(open(abc_file).read())
    for m in d["modes"]:
        m["re"] = [1.0, 1.0, 1.0]
        m["im"] = [0.0, 0.0, 0.0]
    p.write_text(json.dumps(d))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and {v["kind"] for v in json.loads(out)["violations"]} == {"divergence"}


def test_parse_failures_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    for cmd in ("validate", "classify", "simulate"):
        code, _, err = run(capsys, cmd, str(p))
        assert code == 2 and err.startswith("error:")
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 2


def test_classify_rotating(capsys, abc_file):
    code, out, _ = run(capsys, "classify", abc_file, "--nu", "1", "--omega", "2")
    d = json.loads(out)
    assert code == 0 and d["certificate"]["tag"] == "Beltrami" and d["omega"] == 2.0


def test_simulate(capsys, tmp_path, abc_file):
    jl, cs = tmp_path / "t.jsonl", tmp_path / "d.csv"
    code, out, _ = run(capsys, "simulate", abc_file, "--t-end", "0.05", "--dt", "0.01",
                       "--save-every", "1", "--jsonl", str(jl), "--csv", str(cs))
    assert code == 0
    rep = json.loads(out)
    assert rep["steps"] == 5 and rep["growth"] == []
    assert rep["energy_final"] == pytest.approx(rep["energy_initial"], rel=1e-12)
    assert len(jl.read_text().splitlines()) == 6
    assert len(list(csv.reader(cs.open()))) == 7
    assert run(capsys, "simulate", abc_file, "--dt", "0")[0] == 2


def test_simulate_perturbed_leaks(capsys, tmp_path):
    p = tmp_path / "perturbed.json"
    p.write_text(serialize(fixtures.perturbed_abc()))
    code, out, _ = run(capsys, "simulate", str(p), "--t-end", "0.01", "--dt", "0.001")
    assert code == 0
    growth = json.loads(out)["growth"]
    assert growth and growth[0]["time"] == pytest.approx(0.001)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "rotation-loop", "--trials", "20", "--seed", "4")
    assert code == 0 and "PASS" in out and "seed 4" in out
    assert run(capsys, "verify", "sip", "--trials", "0")[0] == 2
    assert run(capsys, "verify", "no-such-lemma")[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "finmode", "make", "tetrahedron"],
                         capture_output=True, text=True, check=True)
    assert not parse(out.stdout).real_valued
    bad = subprocess.run([sys.executable, "-m", "finmode"], capture_output=True, text=True)
    assert bad.returncode == 2
