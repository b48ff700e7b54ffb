import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from phasespec.cli import EXIT_CONFIG, EXIT_OK, main
from phasespec.geometry import AtomPairGeometry, collective_damping
from phasespec.io import ConfigError, parse_config, reproduce_figure, run_scan


def write(path, payload):
    path.write_text(json.dumps(payload))
    return path


SMALL_RUN = {
    "name": "demo",
    "gamma12": 0.5,
    "omega12": 5.0,
    "n_photons": 0.5,
    "m_abs": 0.8,
    "phi_b": 3.14159,
    "omega_min": -9.0,
    "omega_max": 9.0,
    "omega_step": 0.2,
    "t_max": 1.0,
    "t_step": 0.1,
    "esd_t_max": 3.0,
    "products": ["spectrum", "populations", "holes", "esd", "steady_state", "concurrence"],
}


def test_simulate_writes_documented_schemas(tmp_path):
    cfg = write(tmp_path / "run.json", SMALL_RUN)
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "out")]) == EXIT_OK
    out = tmp_path / "out"
    with open(out / "demo_spectrum.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["omega_tilde", "gamma_t", "S"]
    assert len(rows) == 1 + 91 * 11
    with open(out / "demo_populations.csv") as fh:
        header = next(csv.reader(fh))
    assert header == ["gamma_t", "rho_ee", "rho_ss", "rho_aa", "rho_u", "rho_v", "concurrence"]
    assert (out / "demo_holes.csv").read_text().startswith("line_center,t_start,t_end\n")
    esd = json.loads((out / "demo_esd.json").read_text())
    assert set(esd) == {"death_times", "revival_times", "steady_value", "t_max"}
    meta = json.loads((out / "demo_meta.json").read_text())
    assert meta["config"]["gamma12"] == 0.5
    assert "demo_spectrum.csv" in meta["outputs"]


def test_nine_significant_digits(tmp_path):
    cfg = write(tmp_path / "run.json", SMALL_RUN)
    run_scan(cfg, tmp_path)
    with open(tmp_path / "demo_populations.csv") as fh:
        next(fh)
        row = next(csv.reader([next(fh)]))
    digits = [len(v.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) for v in row]
    assert max(digits) <= 9


def test_byte_identical_reruns_and_worker_independence(tmp_path):
    cfg = write(tmp_path / "run.json", SMALL_RUN)
    a = run_scan(cfg, tmp_path / "a", workers=1)
    b = run_scan(cfg, tmp_path / "b", workers=3)
    for pa, pb in zip(a, b):
        assert pa.name == pb.name
        assert pa.read_bytes() == pb.read_bytes()


def test_sidecar_regenerates_outputs(tmp_path):
    cfg = write(tmp_path / "run.json", SMALL_RUN)
    first = run_scan(cfg, tmp_path / "a")
    second = run_scan(tmp_path / "a" / "demo_meta.json", tmp_path / "b")
    assert [p.read_bytes() for p in first] == [p.read_bytes() for p in second]


def test_empty_products_is_config_error(tmp_path, capsys):
    cfg = write(tmp_path / "run.json", {**SMALL_RUN, "products": []})
    assert main(["simulate", "--config", str(cfg)]) == EXIT_CONFIG
    assert "nothing to compute" in capsys.readouterr().err


@pytest.mark.parametrize(
    "change",
    [{"bogus": 1}, {"m_abs": 5.0}, {"gamma12": 2.0}, {"products": ["movie"]}, {"omega_step": -0.1},
     {"figure": "fig99"}, {"figure": "fig4"}],
)
def test_invalid_configs(change):
    with pytest.raises(ConfigError):
        parse_config({**SMALL_RUN, **change})


def test_unreadable_config_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--config", str(bad)]) == EXIT_CONFIG
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_figure_preset_with_override():
    cfg = parse_config({"figure": "fig5", "gamma_d": 3.0})
    assert cfg.name == "fig5"
    assert cfg.params.gamma12 == 0.5 and cfg.params.gamma_d == 3.0
    assert cfg.omega_min == -35.0 and cfg.omega_max == 35.0
    assert "spectrum" in cfg.products


def test_geometry_sets_collective_damping():
    raw = {k: v for k, v in SMALL_RUN.items() if k != "gamma12"}
    cfg = parse_config({**raw, "kr12": 2.0, "cos_theta": 0.2})
    assert cfg.params.gamma12 == pytest.approx(collective_damping(AtomPairGeometry(2.0, 0.2)))
    # an explicit collective damping wins over the geometry
    assert parse_config({**SMALL_RUN, "kr12": 2.0}).params.gamma12 == 0.5


def test_figure_command_fig9(tmp_path):
    written = reproduce_figure("fig9", tmp_path)
    names = {p.name for p in written}
    assert {"fig9_gamma12_m0.5_concurrence.csv", "fig9_gamma12_p0.5_concurrence.csv"} <= names
    data = np.loadtxt(tmp_path / "fig9_gamma12_p0.5_concurrence.csv", delimiter=",", skiprows=1)
    assert data[-1, 0] == pytest.approx(10.0)


def test_unknown_figure_exit_code(tmp_path):
    assert main(["figure", "fig1", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_worker_env_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("PHASESPEC_WORKERS", "two")
    cfg = write(tmp_path / "run.json", SMALL_RUN)
    assert main(["simulate", "--config", str(cfg)]) == EXIT_CONFIG


def test_selftest_subprocess():
    res = subprocess.run([sys.executable, "-m", "phasespec", "selftest"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.count("PASS") == 6
