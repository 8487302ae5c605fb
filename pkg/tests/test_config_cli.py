import json
import subprocess
import sys
import pytest

from fchpearl import parse_config, build_config, ConfigError
from fchpearl.config import write_effective


def _write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_minimal_config_defaults(tmp_path):
    cfg = parse_config(_write(tmp_path, {"command": "coeffs", "well": {"m": 1.4}}))
    assert cfg.command == "coeffs"
    assert cfg.block("well")["m"] == 1.4
    assert cfg.block("grid")["n"] == 32769
    assert cfg.block("physics")["eta1"] == 2.0


def test_misspelled_key_named_in_error(tmp_path):
    with pytest.raises(ConfigError, match="welll"):
        parse_config(_write(tmp_path, {"command": "coeffs", "welll": {"m": 1.4}}))
    with pytest.raises(ConfigError, match="well.mm"):
        parse_config(_write(tmp_path, {"command": "coeffs", "well": {"mm": 1.4}}))


def test_type_mismatch_rejected(tmp_path):
    with pytest.raises(ConfigError, match="sim.mirror_symmetric"):
        parse_config(_write(tmp_path, {"command": "simulate",
                                       "sim": {"mirror_symmetric": "yes"}}))


def test_unknown_command(tmp_path):
    with pytest.raises(ConfigError, match="unknown command"):
        parse_config(_write(tmp_path, {"command": "explode"}))
    with pytest.raises(ConfigError, match="command"):
        parse_config(_write(tmp_path, {}))


def test_set_overrides(tmp_path):
    path = _write(tmp_path, {"command": "coeffs"})
    cfg = parse_config(path, overrides=["well.m=1.7", "physics.eta1=3",
                                        "output_dir=elsewhere"])
    assert cfg.block("well")["m"] == 1.7
    assert cfg.block("physics")["eta1"] == 3
    assert cfg["output_dir"] == "elsewhere"


def test_effective_config_round_trip(tmp_path):
    cfg = parse_config(_write(tmp_path, {"command": "pnf",
                                         "physics": {"kappa": 0.25}}))
    echo = write_effective(cfg, tmp_path / "out")
    with open(echo) as fh:
        cfg2 = build_config(json.load(fh))
    assert cfg2.to_dict() == cfg.to_dict()


def _run_cli(tmp_path, config, overrides=()):
    path = _write(tmp_path, config)
    cmd = [sys.executable, "-m", "fchpearl.cli", str(path)]
    for o in overrides:
        cmd += ["--set", o]
    return subprocess.run(cmd, capture_output=True, text=True, cwd=tmp_path)


def test_cli_usage_error_exit_2(tmp_path):
    res = _run_cli(tmp_path, {"command": "coeffs", "welll": {}})
    assert res.returncode == 2
    assert "welll" in res.stderr


def test_cli_profile_runs(tmp_path):
    res = _run_cli(tmp_path, {"command": "profile", "grid": {"n": 2049}},
                   overrides=["output_dir=prof_out"])
    assert res.returncode == 0, res.stderr
    out = tmp_path / "prof_out"
    assert (out / "profile.csv").exists()
    assert (out / "effective_config.json").exists()
    assert "lambda0" in res.stdout


def test_cli_coeffs_json_and_determinism(tmp_path):
    cfg = {"command": "coeffs", "grid": {"n": 4097}, "seed": 7}
    res1 = _run_cli(tmp_path, cfg, overrides=["output_dir=c1"])
    res2 = _run_cli(tmp_path, cfg, overrides=["output_dir=c2"])
    assert res1.returncode == 0, res1.stderr
    b1 = (tmp_path / "c1" / "coefficients.json").read_bytes()
    b2 = (tmp_path / "c2" / "coefficients.json").read_bytes()
    assert b1 == b2
    data = json.loads(b1)
    assert data["alpha0"] == pytest.approx(0.659, abs=5e-3)


def test_cli_coeffs_sweep_rows(tmp_path):
    cfg = {"command": "coeffs", "grid": {"n": 4097},
           "sweep": {"gamma": [0.5, 1.0], "eta_d": [0.0, 1.0, -1.0]}}
    res = _run_cli(tmp_path, cfg, overrides=["output_dir=sweep"])
    assert res.returncode == 0, res.stderr
    lines = (tmp_path / "sweep" / "coefficients.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 6     # header + one row per tuple


def test_cli_verify_sabotaged_well_fails(tmp_path):
    res = _run_cli(tmp_path, {"command": "verify", "well": {"m": 1.0},
                              "grid": {"n": 1025}})
    assert res.returncode == 1
    assert "well_validation" in res.stdout
    assert "SKIP" in res.stdout


def test_verify_default_passes_and_tols_honored(tmp_path):
    # in-process for speed; default config must pass the whole suite
    cfg = build_config({"command": "verify"})
    from fchpearl import run_verification
    report = run_verification(cfg)
    assert report["passed"], [c for c in report["checks"] if not c["passed"]]
    # tightened tolerance override flips the kernel check
    cfg2 = build_config({"command": "verify", "verify_tols": {"kernel": 1e-12}})
    report2 = run_verification(cfg2)
    names = {c["name"]: c for c in report2["checks"]}
    assert not names["kernel_identity"]["passed"]
    assert not report2["passed"]


def test_cli_pnf_orbit_construct_simulate(tmp_path):
    base = {"grid": {"n": 4097}, "physics": {"kappa": 0.2}}
    res = _run_cli(tmp_path, {**base, "command": "pnf", "nf": {"t_end": 20.0}},
                   overrides=["output_dir=o_pnf"])
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "o_pnf" / "pnf_trajectory.csv").exists()
    assert "drift" in res.stdout or "max |K" in res.stdout

    res = _run_cli(tmp_path, {**base, "command": "orbit"},
                   overrides=["output_dir=o_orbit"])
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "o_orbit" / "orbit.json").exists()

    res = _run_cli(tmp_path, {**base, "command": "construct",
                              "construct": {"kind": "circular", "samples": 128},
                              "physics": {"gamma": "circular", "eta2": 0.0,
                                          "kappa": 0.02}},
                   overrides=["output_dir=o_con"])
    assert res.returncode == 0, res.stderr
    out = tmp_path / "o_con"
    assert (out / "pearl.json").exists()
    assert (out / "admissible_radii.json").exists()
    assert (out / "pearl_field.svg").exists()

    res = _run_cli(tmp_path, {**base, "command": "simulate",
                              "sim": {"nx": 64, "ny": 128, "Lx": 1.6, "Ly": 3.2,
                                      "t_end": 0.1, "perturb_amplitude": 1e-3,
                                      "perturb_mode": 2}},
                   overrides=["output_dir=o_sim"])
    assert res.returncode == 0, res.stderr
    out = tmp_path / "o_sim"
    assert (out / "timeseries.csv").exists()
    assert (out / "final_field.bin").exists()
    assert (out / "final_field.json").exists()

    # checkpoint round trip
    from fchpearl.outputs import read_field_checkpoint
    field, header = read_field_checkpoint(out / "final_field")
    assert field.nx == 64 and field.ny == 128 and header["epsilon"] == 0.1
