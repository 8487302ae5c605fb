"""Run configuration: one JSON file plus --set key=value overrides.

Unknown keys are rejected with their full path so typos surface immediately;
the effective (defaults-filled) config is echoed to the output directory and
reparses to an identical config.
"""

import copy
import json
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    pass


COMMANDS = ("profile", "coeffs", "pnf", "orbit", "construct", "simulate", "verify")

_DEFAULTS = {
    "well": {
        "family": "cubic",
        "m": 1.5,
        "scale": 1.0,
        "coeffs": None,
    },
    "grid": {
        "n": 32769,
        "width_factor": 34.0,
    },
    "physics": {
        "epsilon": 0.1,
        "eta1": 2.0,
        "eta2": 2.0,
        "gamma": 1.0,       # "circular" selects gamma1(eta1, eta_d)
        "kappa": 0.1,
    },
    "nf": {
        "tol": 1e-12,
        "t_end": 100.0,
        "alpha7": 0.0,
        "alpha8": 0.0,
        "beta1": 0.0,
    },
    "construct": {
        "kind": "flat",     # flat | circular
        "n_beads": None,    # circular: explicit bead count (default: smallest admissible)
        "R_minus": 1.0,
        "eps0": 0.2,
        "samples": 256,
    },
    "sim": {
        "nx": 256,
        "ny": 128,
        "Lx": 6.4,
        "Ly": 3.2,
        "dt": 2e-3,
        "t_end": 10.0,
        "init": "flat_bilayer",
        "R0": 1.0,
        "include_u1": True,
        "perturb_amplitude": 1e-4,
        "perturb_mode": None,
        "mirror_symmetric": False,
        "stabilization": None,
        "stabilization0": None,
        "checkpoint_every": None,
    },
    "sweep": {
        "gamma": None,      # list => coeffs emits one row per tuple
        "eta_d": None,
    },
    "verify_tols": {
        "hamiltonian": 1e-8,
        "kernel": 1e-6,
        "affine": 1e-9,
        "alpha1": 1e-6,
        "kh_drift": 1e-10,
        "subspace": 1e-12,
        "gradient": 1e-5,
        "mass": 1e-13,
    },
    "output_dir": "out",
    "seed": 0,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    data: dict

    def __getitem__(self, key):
        return self.data[key]

    def block(self, name) -> dict:
        return self.data[name]

    def to_dict(self) -> dict:
        return {"command": self.command, **copy.deepcopy(self.data)}


def _merge(defaults, given, path=""):
    if not isinstance(given, dict):
        raise ConfigError(f"expected a table at '{path or '<root>'}'")
    out = copy.deepcopy(defaults)
    for key, val in given.items():
        here = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown config key '{here}'")
        if isinstance(defaults[key], dict):
            out[key] = _merge(defaults[key], val, here)
        else:
            out[key] = _check_type(defaults[key], val, here)
    return out


def _check_type(default, val, path):
    if val is None or default is None:
        return val
    if path == "physics.gamma" and val == "circular":
        return val
    if isinstance(default, bool):
        if not isinstance(val, bool):
            raise ConfigError(f"'{path}' must be a boolean, got {val!r}")
        return val
    if isinstance(default, (int, float)) and isinstance(val, (int, float)) \
            and not isinstance(val, bool):
        return type(default)(val) if isinstance(default, float) else val
    if isinstance(default, str) and isinstance(val, (str, int, float)):
        return val
    if isinstance(default, list) or isinstance(val, list):
        return val
    if type(default) is type(val):
        return val
    raise ConfigError(f"'{path}' has wrong type: expected {type(default).__name__}, "
                      f"got {type(val).__name__}")


def build_config(raw: dict) -> RunConfig:
    raw = copy.deepcopy(raw)
    command = raw.pop("command", None)
    if command is None:
        raise ConfigError("config needs a 'command' key")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command '{command}' (choose from {COMMANDS})")
    data = _merge(_DEFAULTS, raw)
    return RunConfig(command=command, data=data)


def parse_config(path, overrides=()) -> RunConfig:
    """Read JSON config; apply --set key.path=value overrides."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    for item in overrides:
        raw = _apply_override(raw, item)
    return build_config(raw)


def _apply_override(raw, item):
    if "=" not in item:
        raise ConfigError(f"override '{item}' is not of the form key.path=value")
    key, _, val = item.partition("=")
    try:
        parsed = json.loads(val)
    except json.JSONDecodeError:
        parsed = val
    node = raw
    parts = key.split(".")
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path '{key}' crosses a non-table value")
    node[parts[-1]] = parsed
    return raw


def write_effective(cfg: RunConfig, outdir) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "effective_config.json"
    with open(path, "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
