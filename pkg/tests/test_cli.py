import csv
import json
import math

import pytest

from powersum_morse.cli import main, parse_c


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_analyze_zero(capsys):
    code, out = run(capsys, "analyze", "--c", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"] == "110 critical points: 30 min / 60 saddle / 20 max; chi=-10; genus=6"
    assert doc["regime"] == "smooth-connected"
    assert any("swapped" in n for n in doc["notes"])
    assert json.loads(json.dumps(doc)) == doc


def test_analyze_text_and_constants(capsys):
    code, out = run(capsys, "analyze", "--c", "0", "--format", "text", "--show-constants")
    assert code == 0
    assert "1/sqrt(30) = 0.18257418583505536" in out
    assert "3/sqrt(20) = 0.67082039324993692" in out


def test_analyze_empty_and_singular(capsys):
    code, out = run(capsys, "analyze", "--c", "0.7")
    assert code == 0
    doc = json.loads(out)
    assert doc["regime"] == "empty" and doc["orbits"] == []

    code, out = run(capsys, "analyze", "--c", "0.18257419")
    doc = json.loads(out)
    assert doc["regime"] == "singular" and doc["n_singular"] == 10
    assert doc["singular_probe"]["verdict"] in ("LocalMin", "LocalMax")

    code, out = run(capsys, "analyze", "--c=-1/sqrt(30)")
    assert json.loads(out)["regime"] == "singular"


def test_parse_c():
    assert parse_c("3/sqrt(20)") == 3 / math.sqrt(20)
    assert parse_c("-0.25") == -0.25


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze"],
        ["analyze", "--c", "abc"],
        ["verify", "--c", "0", "--starts", "0"],
        ["topology", "--c", "0.8"],
        ["sweep", "--lo", "0.1", "--hi", "0.1", "--step", "0.01", "-o", "x.csv"],
        ["analyze", "--c", "0", "--format", "xml"],
    ],
)
def test_usage_errors_exit_2(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_sweep_unwritable_path(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--lo", "0", "--hi", "0.1", "--step", "0.05", "-o", str(tmp_path / "no" / "x.csv")])
    assert exc.value.code == 2


def test_verify(capsys):
    code, out = run(capsys, "verify", "--c", "0", "--starts", "200", "--seed", "42")
    assert code == 0
    v = json.loads(out)["verification"]
    assert v["unmatched"] == [] and v["ok"]

    code, out = run(capsys, "verify", "--c", "0.4", "--starts", "500", "--seed", "1")
    assert code == 0
    assert sum(h > 0 for h in json.loads(out)["verification"]["matched_orbits"].values()) == 3


def test_sweep_csv(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    png = tmp_path / "sweep.png"
    code, out = run(
        capsys, "sweep", "--lo", "-0.7", "--hi", "0.7", "--step", "0.01", "-o", str(path),
        "--plot", str(png), "--format", "text",
    )
    assert code == 0
    assert out.count("transition in") == 4
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "c,regime,n_orbits,n_min,n_saddle,n_max,chi,genus,p4_values"
    assert len(lines) - 1 == math.floor(1.4 / 0.01 + 1e-9) + 1 == 141
    assert "0.00,smooth-connected,4,30,60,20,-10,6,0.25;0.3;0.5" in lines
    rows = list(csv.DictReader(lines))
    assert {r["regime"] for r in rows} == {"empty", "smooth-five-spheres", "smooth-connected"}
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_topology(capsys):
    code, out = run(capsys, "topology", "--c", "0", "--samples", "20000", "--eps", "0.15", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["components"]["n_components"] == 1
    assert doc["cross_check"]["passed"] and doc["cross_check"]["genus"] == 6

    code, out = run(capsys, "topology", "--c", "0.4", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["components"]["n_components"] == 5 and doc["cross_check"]["genus"] == 0


def test_topology_cross_check_failure(capsys):
    # a tiny epsilon shatters the sample into many pieces
    code, out = run(capsys, "topology", "--c", "0", "--samples", "200", "--eps", "0.01")
    assert code == 1
    assert not json.loads(out)["cross_check"]["passed"]


def test_reports_byte_identical(capsys):
    argv = ["verify", "--c", "-0.1", "--starts", "50", "--seed", "9"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
    _, a = run(capsys, "topology", "--c", "0.3", "--samples", "2000", "--seed", "2")
    _, b = run(capsys, "topology", "--c", "0.3", "--samples", "2000", "--seed", "2")
    assert a == b
