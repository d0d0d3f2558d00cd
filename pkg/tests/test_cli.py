import csv
import io
import json
import math

import numpy as np
import pytest

from pathgroup import cli
from pathgroup import io as pio
from pathgroup.checks import CheckResult
from pathgroup.geodesics import Helix, exp_point
from pathgroup.group import GroupPoint, multiply
from pathgroup.optimality import cut_time


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exp_line_csv(capsys):
    code, out, _ = run(capsys, "exp", "--params", '{"kind":"line","c0":1,"c":[0,0]}',
                       "--t-grid", "0:3:4")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "x", "l_1", "l_2", "y_1", "y_2"]
    assert len(rows) == 5
    assert float(rows[-1][1]) == 3.0
    # 17 significant digits
    assert rows[-1][1] == "3.0000000000000000e+00"


def test_exp_json_matches_library(capsys):
    g = Helix(0.7, 1.3, 0.4, [0.6, 0.8, 0.0], [0.0, 0.0, 1.0])
    code, out, _ = run(capsys, "exp", "--params", json.dumps(pio.params_to_dict(g)),
                       "--t-grid", "0.5:0.5:1", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert pio.point_from_dict(row).allclose(exp_point(g, 0.5), atol=0.0)


def test_cut_time_heisenberg(capsys):
    code, out, _ = run(capsys, "cut-time", "--params",
                       '{"kind":"helix","alpha":0,"rho":1,"sigma":0,"k":[1,0]}')
    assert code == 0
    assert math.isclose(float(out), 2 * math.pi, rel_tol=1e-15)


def test_cut_time_json(capsys):
    code, out, _ = run(capsys, "cut-time", "--format", "json", "--params",
                       '{"kind":"helix","alpha":1,"rho":2,"sigma":0.5,"k":[1,0],"kperp":[0,1]}')
    assert code == 0
    d = json.loads(out)
    assert math.isclose(d["t_cut"], math.pi * 2 * math.sqrt(1.25) / 2, rel_tol=1e-14)
    assert d["multiplicity"] == "two"


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--point", '{"x":2,"l":[3,0],"y":[0,4]}')
    assert code == 0
    d = json.loads(out)
    assert d == {"x": 2.0, "l2": 9.0, "ldoty": 0.0, "lwedge": 12.0, "y2": 16.0,
                 "phi": math.pi / 2}


def test_cut_locus_check(capsys):
    code, out, _ = run(capsys, "cut-locus-check", "--point", '{"x":0,"l":[1,0],"y":[0.05,0.05]}')
    assert code == 0
    d = json.loads(out)
    assert d["in_cut_locus"] is True
    assert d["t_cut"] > 0
    code, out, _ = run(capsys, "cut-locus-check", "--point", '{"x":0.1,"l":[1,0],"y":[0.05,0.05]}')
    assert json.loads(out)["in_cut_locus"] is False


def test_locus_slice(capsys):
    code, out, _ = run(capsys, "locus-slice", "--sigmas", "0.5,1", "--l-grid", "0:2:3")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["sigma", "l_norm", "y_min", "y_max"]
    assert len(rows) == 7
    s, L, lo, hi = map(float, rows[3])
    assert (s, L) == (0.5, 2.0)
    assert math.isclose(lo, 4 / math.pi, rel_tol=1e-15)
    assert math.isclose(hi, math.sqrt(2) * 4 / math.pi, rel_tol=1e-15)


def test_synth_recovers_endpoint(capsys, tmp_path):
    g = Helix(0.9, 1.7, 0.6, [1.0, 0.0], [0.0, 1.0])
    t = 0.7 * cut_time(g)
    target = exp_point(g, t)
    traj = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "synth", "--point", json.dumps(pio.point_to_dict(target)),
                       "--emit-trajectory", str(traj), "--samples", "11")
    assert code == 0
    r = pio.result_from_dict(json.loads(out))
    assert r.multiplicity.value == "unique"
    assert abs(r.distance - t) < 1e-8
    (h, s), = r.solutions
    assert exp_point(h, s).allclose(target, atol=1e-9)
    rows = list(csv.reader(traj.open()))
    assert rows[0][:3] == ["solution", "t", "x"]
    assert len(rows) == 12
    end = np.array([float(v) for v in rows[-1][2:]])
    assert np.allclose(end, target.as_vector(), atol=1e-9)


def test_synth_from_start_point(capsys, tmp_path):
    q0 = GroupPoint(0.4, [-0.2, 0.3], [0.1, -0.5])
    g = Helix(2.0, 1.1, 0.3, [0.0, 1.0], [1.0, 0.0])
    t = 0.5 * cut_time(g)
    q1 = multiply(q0, exp_point(g, t))
    traj = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "synth", "--from", json.dumps(pio.point_to_dict(q0)),
                       "--point", json.dumps(pio.point_to_dict(q1)),
                       "--emit-trajectory", str(traj), "--samples", "5")
    assert code == 0
    assert abs(json.loads(out)["distance"] - t) < 1e-8
    rows = list(csv.reader(traj.open()))
    start = np.array([float(v) for v in rows[1][2:]])
    end = np.array([float(v) for v in rows[-1][2:]])
    assert np.allclose(start, q0.as_vector(), atol=1e-15)
    assert np.allclose(end, q1.as_vector(), atol=1e-9)


def test_synth_maxwell_pair(capsys):
    code, out, _ = run(capsys, "synth", "--point", '{"x":0,"l":[1,0],"y":[0,0.2]}')
    assert code == 0
    d = json.loads(out)
    assert d["multiplicity"] == "maxwell_pair"
    assert len(d["solutions"]) == 2
    assert d["tau"] == math.pi


def test_point_from_file_and_stdin(capsys, tmp_path, monkeypatch):
    text = '{"x":2,"l":[3,0],"y":[0,4]}'
    f = tmp_path / "p.json"
    f.write_text(text)
    _, from_file, _ = run(capsys, "invariants", "--point", str(f))
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    _, from_stdin, _ = run(capsys, "invariants", "--point", "-")
    _, inline, _ = run(capsys, "invariants", "--point", text)
    assert from_file == from_stdin == inline


def test_out_flag(capsys, tmp_path):
    dest = tmp_path / "o.txt"
    code, out, _ = run(capsys, "cut-time", "--out", str(dest), "--params",
                       '{"kind":"helix","alpha":0,"rho":2,"sigma":0,"k":[1]}')
    assert code == 0 and out == ""
    assert float(dest.read_text()) == math.pi


@pytest.mark.parametrize("argv, flag", [
    (["exp", "--t-grid", "0:1:2"], "--params"),
    (["exp", "--params", '{"kind":"line","c0":1,"c":[0]}', "--t-grid", "0:1"], "--t-grid"),
    (["synth", "--point", '{"x":1,"l":[1,0],"y":[1]}'], "--point"),
    (["synth", "--point", '{"x":1,"l":[1,0],"y":[1,0]', ], "--point"),
    (["locus-slice", "--sigmas", "0,1"], "--sigmas"),
    (["frobnicate"], "frobnicate"),
    ([], "subcommand"),
])
def test_usage_errors(capsys, argv, flag):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert flag in err


@pytest.mark.parametrize("argv, kind", [
    (["cut-time", "--params", '{"kind":"helix","alpha":0,"rho":-1,"sigma":0,"k":[1,0]}'],
     "InvalidParams"),
    (["exp", "--params", '{"kind":"spiral"}'], "InvalidParams"),
    (["synth", "--tol", "-1", "--point", '{"x":0.3,"l":[0.5,0.1],"y":[0.02,0.07]}'],
     "ValueError"),
])
def test_failures_report_error_json(capsys, argv, kind):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert json.loads(err)["error"] == kind


def test_repeat_runs_are_byte_identical(capsys):
    argv = ["synth", "--point", '{"x":0.3,"l":[0.5,0.1,-0.2],"y":[0.02,0.07,0.01]}']
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_result_json_roundtrip(capsys):
    _, out, _ = run(capsys, "synth", "--point", '{"x":0.3,"l":[0.5,0.1],"y":[0.02,0.07]}')
    r = pio.result_from_dict(json.loads(out))
    assert pio.dumps(pio.result_to_dict(r)) == out.strip()


def test_verify_table_format(capsys, monkeypatch):
    fake = [CheckResult(1, "one", True, "ok", 0.1), CheckResult(2, "two", False, "bad", 0.2)]
    seen = []

    def fake_run_all(seed, progress):
        seen.append(seed)
        for r in fake:
            progress(r)
        return fake

    monkeypatch.setattr(cli, "run_all", fake_run_all)
    code, out, err = run(capsys, "verify", "--seed", "42", "--progress")
    assert seen == [42]
    assert code == 1
    lines = out.strip().splitlines()
    assert lines[:2] == [r.line() for r in fake]
    assert lines[-1] == "1/2 passed"
    assert err.strip().splitlines() == [r.line() for r in fake]
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert [d["passed"] for d in json.loads(out)] == [True, False]
