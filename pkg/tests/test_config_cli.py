import json
import os

import numpy as np
import pytest

from aedesfront import run
from aedesfront.cli import main
from aedesfront.config import parse_config, serialize_config
from aedesfront.errors import ConfigError
from aedesfront.outputs import dumps17, emit_outputs, read_ndjson
from aedesfront.config import OutputConfig

MINIMAL = """
[model]
D = 1.0

[profile.r]
kind = constant
value = 1.0

[profile.gamma]
kind = constant
value = 1.0

[profile.mu1]
kind = constant
value = 0.25

[profile.mu2]
kind = constant
value = 1.0

[initial]
h0 = 1.5
"""


def test_defaults_filled():
    cfg = parse_config(MINIMAL)
    assert cfg.profile.nu == 0.0 and cfg.profile.K1 == 1.0 and cfg.profile.K2 == 1.0
    assert cfg.profile.homogenization_radius == 50.0
    assert cfg.solver.N == 256 and cfg.solver.dt == 0.01 and cfg.solver.mu == 1.0
    assert cfg.solver.horizon == 10.0 and cfg.solver.output_every == 0.5
    assert cfg.task.name == "simulate" and not cfg.task.explicit
    assert cfg.output.formats == ("ndjson", "csv", "png")
    assert cfg.initial.params == {"a": 0.5, "b": 0.5}


def test_negative_D_named():
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL.replace("D = 1.0", "D = -1.0"))
    assert any("D" in p and "[model]" in p for p in exc.value.problems)


def test_analytic_and_table_exclusive(tmp_path):
    (tmp_path / "init.txt").write_text("-1.5 0 0\n0 0.5 0.4\n1.5 0 0\n")
    text = MINIMAL + "a = 0.5\nb = 0.4\ntable = init.txt\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text, str(tmp_path))
    assert any("mutually exclusive" in p for p in exc.value.problems)


def test_tabulated_initial_data(tmp_path):
    (tmp_path / "init.txt").write_text("# x M0 A0\n-1.5 0 0\n0 0.5 0.4\n1.5 0 0\n")
    cfg = parse_config(MINIMAL + "table = init.txt\n", str(tmp_path))
    assert cfg.initial.h0 == 1.5 and cfg.initial.M0(0.0) == 0.5


def test_errors_aggregated():
    text = MINIMAL.replace("D = 1.0", "D = -1.0\nbogus = 3") + "[solver]\nN = 15\nspeed = 2\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert len(exc.value.problems) >= 3


def test_round_trip_same_run():
    cfg = parse_config(MINIMAL + "a = 0.3\n[solver]\nN = 32\nhorizon = 1\n")
    again = parse_config(serialize_config(cfg))
    assert serialize_config(again) == serialize_config(cfg)
    assert again.run_hash == cfg.run_hash
    a = run(cfg.initial, cfg.profile, cfg.solver)
    b = run(again.initial, again.profile, again.solver)
    assert a.records() == b.records()
    assert np.array_equal(a.final.M, b.final.M)


def test_dumps17_round_trip():
    vals = [0.1, 1 / 3, np.float64(2.0) ** 0.5, 1e-300, -7.25e12]
    back = json.loads(dumps17(vals))
    assert all(float(a) == float(b) for a, b in zip(back, vals))


def test_empty_trajectory_plot(tmp_path, hom, hump):
    from aedesfront import SolverConfig
    traj = run(hump, hom, SolverConfig(N=32, horizon=0.0))
    files = emit_outputs({"trajectory": traj, "trace": [(0.0, 0.5)]},
                         OutputConfig(str(tmp_path)), "simulate", "abc")
    assert any(f.endswith("-fronts.png") for f in files)
    meta = json.loads((tmp_path / "simulate-abc-plots.json").read_text())
    assert meta["fronts"]["t_range"] == [0.0, 0.0]


def test_unwritable_directory(tmp_path, hom, hump):
    target = tmp_path / "file"
    target.write_text("")
    with pytest.raises(OSError):
        emit_outputs({"report": {}}, OutputConfig(str(target / "sub")), "threshold", "x")


@pytest.fixture
def cfg_file(tmp_path):
    def make(extra="", body=MINIMAL):
        p = tmp_path / "run.ini"
        p.write_text(body + "a = 0.5\nb = 0.4\n[solver]\nN = 32\nhorizon = 2\n" + extra)
        return str(p)
    return make


def test_cli_simulate_outputs(cfg_file, tmp_path, capsys):
    path = cfg_file("[output]\nfields = true\n")
    assert main(["simulate", "--config", path, "--out", str(tmp_path / "o")]) == 0
    names = os.listdir(tmp_path / "o")
    stem = [n for n in names if n.endswith(".ndjson")][0][:-7]
    recs = read_ndjson(str(tmp_path / "o" / f"{stem}.ndjson"))
    assert set(recs[0]) == {"t", "g", "h", "sup_M", "sup_A"}
    assert f"{stem}-fields-00000.csv" in names and f"{stem}-r0f.csv" in names
    meta = json.loads((tmp_path / "o" / f"{stem}-plots.json").read_text())
    assert meta["heatmap"]["x_range"] == [min(r["g"] for r in recs), max(r["h"] for r in recs)]


def test_cli_byte_identical(cfg_file, tmp_path):
    path = cfg_file()
    for d in ("a", "b"):
        assert main(["simulate", "--config", path, "--out", str(tmp_path / d)]) == 0
    data = [n for n in os.listdir(tmp_path / "a") if not n.endswith(".png")]
    assert data and sorted(data) == sorted(n for n in os.listdir(tmp_path / "b")
                                           if not n.endswith(".png"))
    for n in data:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_cli_threshold_report(cfg_file, tmp_path):
    path = cfg_file("[task]\nname = threshold\np = -1.5707963267948966\nq = 1.5707963267948966\n")
    assert main(["threshold", "--config", path, "--out", str(tmp_path / "o")]) == 0
    rep = [n for n in os.listdir(tmp_path / "o") if n.endswith(".json")][0]
    data = json.loads((tmp_path / "o" / rep).read_text())
    assert data["R0"] == pytest.approx(0.4**0.5, rel=1e-4)


def test_cli_config_error(cfg_file, tmp_path):
    path = cfg_file(body=MINIMAL.replace("D = 1.0", "D = -2"))
    assert main(["simulate", "--config", path, "--out", str(tmp_path)]) == 2


def test_cli_task_conflict(cfg_file, tmp_path):
    path = cfg_file("[task]\nname = steady\n")
    assert main(["simulate", "--config", path, "--out", str(tmp_path)]) == 2


def test_cli_numerical_failure(cfg_file, tmp_path):
    path = cfg_file("[task]\nL_sequence = 1\n")
    assert main(["steady", "--config", path, "--out", str(tmp_path)]) == 3


def test_cli_steady_outputs(cfg_file, tmp_path):
    path = cfg_file("[task]\ndx = 0.1\nL_sequence = 5,10\n")
    assert main(["steady", "--config", path, "--out", str(tmp_path / "o")]) == 0
    names = os.listdir(tmp_path / "o")
    assert any(n.endswith("-stationary.csv") for n in names)
    table = [n for n in names if n.endswith("-table.json")][0]
    rows = json.loads((tmp_path / "o" / table).read_text())
    assert [r["L"] for r in rows] == [5.0, 10.0]
