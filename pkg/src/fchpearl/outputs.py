"""CSV/JSON/SVG/binary writers for CLI and demo outputs."""

import csv
import json
from pathlib import Path

import numpy as np


def write_profile_csv(path, b):
    """Columns r, u0, du0, v0, u1 (zeros when corrections absent)."""
    v0 = b.v0 if b.v0 is not None else np.zeros_like(b.u0)
    u1 = b.u1 if b.u1 is not None else np.zeros_like(b.u0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "u0", "du0", "v0", "u1"])
        for row in zip(b.grid.r, b.u0, b.du0, v0, u1):
            w.writerow([f"{x:.17g}" for x in row])


def write_json(path, obj):
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        raise TypeError(f"not JSON-serializable: {type(o)}")
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=default)
        fh.write("\n")


def write_table_csv(path, tables):
    """One CoefficientTable per row (sweep mode emits several)."""
    if not tables:
        return
    rows = [t.as_dict() for t in tables]
    flat_rows = []
    for d in rows:
        flat = {}
        for k, v in d.items():
            if isinstance(v, list):
                for i, x in enumerate(v, start=1):
                    flat[f"{k}{i}"] = x
            else:
                flat[k] = v
        flat_rows.append(flat)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(flat_rows[0]))
        w.writeheader()
        w.writerows(flat_rows)


def write_trajectory_csv(path, traj, coeffs, n_samples=1001):
    from .normal_form import first_integrals
    t0, t1 = traj.t[0], traj.t[-1]
    ts = np.linspace(t0, t1, n_samples)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "ReC1", "ImC1", "ReC2", "ImC2",
                    "D1", "D2", "D3", "D4", "K", "H"])
        for t in ts:
            v = traj(t)
            K, H = first_integrals(v, coeffs)
            w.writerow([f"{x:.17g}" for x in (t, *v, K, H)])


def write_timeseries_csv(path, result):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "mass", "energy", "mode", "amplitude"])
        for row in zip(result.t, result.mass, result.energy,
                       result.mode, result.amplitude):
            w.writerow([f"{x:.17g}" for x in row])


def write_field_checkpoint(prefix, field, t, meta=None):
    """Raw float64 row-major values + JSON header side file."""
    prefix = Path(prefix)
    field.values.astype("<f8").tofile(prefix.with_suffix(".bin"))
    header = {"nx": field.nx, "ny": field.ny, "Lx": field.Lx, "Ly": field.Ly,
              "t": t, "dtype": "<f8", "order": "C"}
    if meta:
        header.update(meta)
    write_json(prefix.with_suffix(".json"), header)


def read_field_checkpoint(prefix):
    from .simulator import Field2D
    prefix = Path(prefix)
    with open(prefix.with_suffix(".json")) as fh:
        header = json.load(fh)
    vals = np.fromfile(prefix.with_suffix(".bin"), dtype="<f8")
    vals = vals.reshape(header["nx"], header["ny"])
    return Field2D(vals, header["Lx"], header["Ly"]), header


def save_heatmap_svg(path, field, title=""):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 6 * field.Ly / field.Lx))
    im = ax.imshow(field.values.T, origin="lower", aspect="auto",
                   extent=(0, field.Lx, 0, field.Ly), cmap="RdBu_r")
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
