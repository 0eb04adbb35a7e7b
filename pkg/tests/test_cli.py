import json

import pytest

from kvseek.cli import SWEEP_COLUMNS, main


@pytest.fixture
def cfg(tmp_path):
    def make(name="c.json", **over):
        p = tmp_path / name
        p.write_text(json.dumps({"t_end": 0.2, **over}))
        return p
    return make


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def test_simulate(cfg, tmp_path, capsys):
    out = tmp_path / "ts.csv"
    snaps = tmp_path / "snap.csv"
    assert main(["simulate", str(cfg(output={"snapshot_stride": 100})), "-o", str(out),
                 "--snapshots", str(snaps)]) == 0
    header, rows = read_csv(out)
    assert header == ["t", "theta", "Theta", "y", "G", "Hhat", "U", "theta_hat", "psi", "V"]
    assert len(rows) == 21
    assert snaps.read_text().startswith("t,x0,")
    assert "limsup" in capsys.readouterr().err


def test_simulate_stdout_and_backend(cfg, capsys):
    assert main(["--backend", "python", "simulate", str(cfg()), "--t-end", "0.01"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("t,theta,Theta") and len(lines) == 3


def test_simulate_invalid_config(cfg, tmp_path):
    assert main(["simulate", str(cfg(bogus=1))]) == 1
    assert main(["simulate", str(cfg(dt=-1.0))]) == 1
    assert main(["simulate", str(tmp_path / "missing.json")]) == 1


def test_simulate_numerical_failure(cfg, tmp_path):
    assert main(["simulate", str(cfg(t_end=100.0)), "-o", str(tmp_path / "x.csv")]) == 2


def test_spectrum(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--n-max", "10", "-o", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["n", "mu", "re_plus", "im_plus", "re_minus", "im_minus", "is_complex",
                      "circle_residual"]
    assert len(rows) == 11 and rows[0][6] == "1"
    assert main(["spectrum", "--d", "-1"]) == 1


def test_kernel_check(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["kernel-check", "--points", "5", "-o", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["x", "sigma", "k", "residual"] and rows


def test_probe_check(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["probe-check", "--points", "4", "--times", "2", "-o", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["t", "x", "beta_r", "residual"] and len(rows) == 8
    assert main(["probe-check", "--frequency", "0"]) == 1


def test_sweep(tmp_path):
    lst = tmp_path / "sweep.json"
    lst.write_text(json.dumps({"base": {"t_end": 0.5, "controller": {"washout_cutoff": 1.0}},
                               "scenarios": [{"name": "a"}, {"name": "b",
                                                             "probe": {"amplitude": 0.1}}]}))
    out = tmp_path / "sum.csv"
    assert main(["sweep", str(lst), "--workers", "2", "-o", str(out)]) == 0
    header, rows = read_csv(out)
    assert tuple(header) == SWEEP_COLUMNS
    assert [r[0] for r in rows] == ["a", "b"] and all(r[-1] == "ok" for r in rows)
    assert rows[1][5] == "0.1"


def test_sweep_reports_failures(tmp_path):
    lst = tmp_path / "sweep.json"
    lst.write_text(json.dumps([{"name": "ok", "t_end": 0.5, "controller": {"washout_cutoff": 1.0}},
                               {"name": "bad", "t_end": 100.0}]))
    out = tmp_path / "sum.csv"
    assert main(["sweep", str(lst), "--workers", "1", "-o", str(out)]) == 2
    _, rows = read_csv(out)
    assert rows[0][-1] == "ok" and rows[1][-1].startswith("failed")


def test_sweep_invalid(tmp_path):
    lst = tmp_path / "sweep.json"
    lst.write_text(json.dumps([{"mode": "nope"}]))
    assert main(["sweep", str(lst)]) == 1


def test_convergence(cfg, tmp_path):
    out = tmp_path / "conv.csv"
    assert main(["convergence", str(cfg()), "--points", "11", "--dt", "0.01", "--t-end", "0.5",
                 "--levels", "3", "-o", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["level", "points", "dx", "dt", "max_error", "ratio", "neumann_slope"]
    assert len(rows) == 3 and 3.0 < float(rows[2][5]) < 5.0
