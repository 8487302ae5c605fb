"""Command-line front end.

    fchpearl <config.json> [--set key.path=value ...]

The config's "command" selects one of: profile, coeffs, pnf, orbit,
construct, simulate, verify.  Exit codes: 0 pass, 1 check failure,
2 usage/config error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import outputs
from .config import ConfigError, parse_config, write_effective
from .potential import WellSpec
from .profile import RadialGrid, compute_u0, with_corrections
from .operator import assemble_L0, lambda0_refined
from .coefficients import coefficient_table
from .normal_form import (NFCoefficients, pnf_rhs, pnf_periodic_orbit,
                          first_integrals, integrate, reversible_shoot)
from .pearls import flat_pearl, circular_pearl, circular_radii, default_box
from .simulator import (SimConfig, FCHSimulator, extract_flat_metrics,
                        extract_circular_metrics, NoInterfaceError)
from .verify import run_verification


def _well(cfg) -> WellSpec:
    wb = cfg.block("well")
    kwargs = {k: v for k, v in wb.items() if v is not None}
    if kwargs.get("coeffs") is not None:
        kwargs["coeffs"] = tuple(kwargs["coeffs"])
    return WellSpec(**kwargs)


def _grid(cfg, well):
    gb = cfg.block("grid")
    return RadialGrid.default(well, n=gb["n"], width_factor=gb["width_factor"])


def _pipeline(cfg):
    well = _well(cfg)
    grid = _grid(cfg, well)
    b = compute_u0(well, grid)
    op = assemble_L0(b)
    return well, grid, b, op


def cmd_profile(cfg, outdir):
    well, grid, b, op = _pipeline(cfg)
    phys = cfg.block("physics")
    b = with_corrections(b, op, phys["gamma"] if phys["gamma"] != "circular" else 0.0,
                         phys["eta1"] - phys["eta2"])
    outputs.write_profile_csv(outdir / "profile.csv", b)
    lam_ref = lambda0_refined(well, RadialGrid.default(well, n=8193,
                                                       width_factor=grid.half_width
                                                       * np.sqrt(well.mu_minus)))
    print(f"u* = {b.ustar:.12g}")
    print(f"lambda0 (matrix, n={grid.n}) = {op.lam0:.12g}")
    print(f"lambda0 (Richardson)        = {lam_ref:.12g}")
    print(f"kernel eigenvalue           = {op.lam_kernel:.3e}")
    print(f"tail |u0(L)+1|              = {abs(b.u0[-1] + 1):.3e}")
    print(f"wrote {outdir / 'profile.csv'}")
    return 0


def cmd_coeffs(cfg, outdir):
    well, grid, b, op = _pipeline(cfg)
    phys = cfg.block("physics")
    sweep = cfg.block("sweep")
    gammas = sweep["gamma"] if sweep["gamma"] else [phys["gamma"]]
    eta_ds = sweep["eta_d"] if sweep["eta_d"] else [phys["eta1"] - phys["eta2"]]
    tables = []
    for g in gammas:
        for ed in eta_ds:
            tables.append(coefficient_table(well, gamma=g, eta1=phys["eta1"],
                                            eta_d=ed, bilayer=b, op=op))
    outputs.write_json(outdir / "coefficients.json",
                       tables[0].as_dict() if len(tables) == 1
                       else [t.as_dict() for t in tables])
    outputs.write_table_csv(outdir / "coefficients.csv", tables)
    t = tables[0]
    print(f"lambda0 = {t.lambda0:.9g}")
    print(f"alpha0 = {t.alpha0:.9g} (alpha01 = {t.alpha01:.9g}, alpha02 = {t.alpha02:.9g})")
    print(f"beta0 = {t.beta0:.3e}   gamma1 = {t.gamma1:.9g}   alpha2 = {t.alpha2:.9g}")
    print(f"|alpha1| residual = {abs(t.alpha1_residual):.3e}")
    print(f"wrote {outdir / 'coefficients.json'}, {outdir / 'coefficients.csv'}")
    return 0


def _nf_from_cfg(cfg, table):
    phys = cfg.block("physics")
    nfb = cfg.block("nf")
    beta = [0.0] * 13
    beta[0] = nfb["beta1"]
    return NFCoefficients.from_table(table, phys["epsilon"],
                                     alpha7=nfb["alpha7"], alpha8=nfb["alpha8"],
                                     beta=tuple(beta))


def cmd_pnf(cfg, outdir):
    well, grid, b, op = _pipeline(cfg)
    phys = cfg.block("physics")
    nfb = cfg.block("nf")
    table = coefficient_table(well, gamma=phys["gamma"], eta1=phys["eta1"],
                              eta2=phys["eta2"], bilayer=b, op=op)
    nf = _nf_from_cfg(cfg, table)
    orbit = pnf_periodic_orbit(nf, phys["kappa"])
    v0 = orbit.state(0.0)
    traj = integrate(pnf_rhs, v0, (0.0, nfb["t_end"]), tol=nfb["tol"], coeffs=nf)
    K0, H0 = first_integrals(v0, nf)
    drift = [0.0, 0.0]
    for t in np.linspace(0, nfb["t_end"], 401):
        K, H = first_integrals(traj(t), nf)
        drift[0] = max(drift[0], abs(K - K0))
        drift[1] = max(drift[1], abs(H - H0))
    outputs.write_trajectory_csv(outdir / "pnf_trajectory.csv", traj, nf)
    print(f"alpha0 = {nf.alpha0:.9g}, K = {K0:.9g}, H = {H0:.9g}")
    print(f"max |K - K0| = {drift[0]:.3e}, max |H - H0| = {drift[1]:.3e} "
          f"over t in [0, {nfb['t_end']}]")
    print(f"wrote {outdir / 'pnf_trajectory.csv'}")
    return 0


def cmd_orbit(cfg, outdir):
    well, grid, b, op = _pipeline(cfg)
    phys = cfg.block("physics")
    table = coefficient_table(well, gamma=phys["gamma"], eta1=phys["eta1"],
                              eta2=phys["eta2"], bilayer=b, op=op)
    nf = _nf_from_cfg(cfg, table)
    orbit = pnf_periodic_orbit(nf, phys["kappa"])
    shot = reversible_shoot(nf, phys["kappa"])
    state_err = np.abs(shot.state0 - orbit.state(0.0)).max()
    period_err = abs(shot.period - orbit.period)
    outputs.write_json(outdir / "orbit.json", {
        "closed_form": {"r1": orbit.r1, "r2": orbit.r2, "omega": orbit.omega,
                        "period": orbit.period},
        "shooting": {"state0": shot.state0.tolist(), "period": shot.period,
                     "residual": shot.residual, "iterations": shot.iterations},
        "state_error": state_err, "period_error": period_err,
    })
    print(f"closed-form period = {orbit.period:.12g}")
    print(f"shooting period    = {shot.period:.12g} "
          f"(state err {state_err:.2e}, period err {period_err:.2e})")
    print(f"wrote {outdir / 'orbit.json'}")
    return 0


def cmd_construct(cfg, outdir):
    well, grid, b, op = _pipeline(cfg)
    phys = cfg.block("physics")
    cb = cfg.block("construct")
    gamma = phys["gamma"]
    table = coefficient_table(well, gamma=gamma, eta1=phys["eta1"],
                              eta2=phys["eta2"], bilayer=b, op=op)
    b = with_corrections(b, op, table.gamma, table.eta_d)
    eps, kappa = phys["epsilon"], phys["kappa"]
    eps0, kappa0 = default_box(table, cb["eps0"])
    from .simulator import Field2D
    ns = cb["samples"]

    if cb["kind"] == "flat":
        sol = flat_pearl(b, op, table, eps, kappa, eps0=eps0, kappa0=kappa0)
        Lx = 4 * sol.period
        Ly = 3.2
        nx, ny = ns, ns // 2
        grid_vals = sol.evaluate((np.arange(nx) * Lx / nx)[:, None],
                                 ((np.arange(ny) * Ly / ny)[None, :] - Ly / 2) / eps)
        field = Field2D(grid_vals, Lx, Ly)
        info = {"kind": "flat", "A_p": sol.amplitude, "T_p": sol.period,
                "epsilon": eps, "kappa": kappa}
    else:
        radii = circular_radii(table, eps, kappa, cb["R_minus"],
                               eps0=eps0, kappa0=kappa0)
        n_beads = cb["n_beads"] or radii[0][0]
        sol = circular_pearl(b, op, table, n_beads, eps, kappa,
                             eps0=eps0, kappa0=kappa0)
        L = 2 * (sol.radius + 8 * eps)
        nx = ny = ns
        xs = np.arange(nx) * L / nx - L / 2
        rho = np.hypot(xs[:, None], xs[None, :])
        theta = np.arctan2(xs[None, :], xs[:, None])
        grid_vals = sol.evaluate(theta, (rho - sol.radius) / eps)
        field = Field2D(grid_vals, L, L)
        outputs.write_json(outdir / "admissible_radii.json",
                           {"epsilon": eps, "kappa": kappa,
                            "radii": [{"n": n, "R0": R} for n, R in radii]})
        info = {"kind": "circular", "A_p": sol.amplitude, "n": sol.n,
                "R0": sol.radius, "epsilon": eps, "kappa": kappa}

    outputs.write_json(outdir / "pearl.json", info)
    np.savetxt(outdir / "pearl_field.csv", field.values, delimiter=",")
    outputs.save_heatmap_svg(outdir / "pearl_field.svg", field,
                             title=f"{info['kind']} pearled bilayer")
    print(f"A_p = {info['A_p']:.6g}")
    if cb["kind"] == "flat":
        print(f"T_p = {info['T_p']:.6g}")
    else:
        print(f"n = {info['n']}, R0 = {info['R0']:.6g}")
    print(f"wrote {outdir / 'pearl.json'}, pearl_field.csv, pearl_field.svg")
    return 0


def cmd_simulate(cfg, outdir):
    well, grid, b, op = _pipeline(cfg)
    phys = cfg.block("physics")
    sb = cfg.block("sim")
    scfg = SimConfig(epsilon=phys["epsilon"], eta1=phys["eta1"], eta2=phys["eta2"],
                     dt=sb["dt"], t_end=sb["t_end"], nx=sb["nx"], ny=sb["ny"],
                     Lx=sb["Lx"], Ly=sb["Ly"], init=sb["init"], R0=sb["R0"],
                     include_u1=sb["include_u1"],
                     gamma=phys["gamma"] if phys["gamma"] != "circular" else 0.0,
                     perturb_amplitude=sb["perturb_amplitude"],
                     perturb_mode=sb["perturb_mode"], seed=cfg["seed"],
                     mirror_symmetric=sb["mirror_symmetric"],
                     stabilization=sb["stabilization"],
                     stabilization0=sb["stabilization0"])
    if scfg.include_u1:
        b = with_corrections(b, op, scfg.gamma, scfg.eta_d)
    sim = FCHSimulator(well, scfg)
    field = sim.init_field(b)
    result = sim.run(field)
    outputs.write_timeseries_csv(outdir / "timeseries.csv", result)
    outputs.write_field_checkpoint(outdir / "final_field", result.final,
                                   t=float(result.t[-1]),
                                   meta={"epsilon": scfg.epsilon, "eta1": scfg.eta1,
                                         "eta2": scfg.eta2, "seed": cfg["seed"]})
    outputs.save_heatmap_svg(outdir / "final_field.svg", result.final,
                             title=f"t = {result.t[-1]:.1f}")
    try:
        if scfg.init == "circular_bilayer":
            n, amp, R = extract_circular_metrics(result.final)
            print(f"final: {n} beads, amplitude {amp:.3e}, radius {R:.4g}")
        else:
            m, amp, period = extract_flat_metrics(result.final)
            print(f"final: mode {m}, amplitude {amp:.3e}, period {period:.4g}")
    except NoInterfaceError:
        print("final: no interface detected")
    print(f"mass drift = {abs(result.mass[-1] - result.mass[0]):.3e}, "
          f"energy {result.energy[0]:.6g} -> {result.energy[-1]:.6g}")
    print(f"wrote {outdir / 'timeseries.csv'}, final_field.bin/json/svg")
    return 0


def cmd_verify(cfg, outdir):
    report = run_verification(cfg)
    outputs.write_json(outdir / "verify_report.json", report)
    for c in report["checks"]:
        status = "SKIP" if c["skipped"] else ("PASS" if c["passed"] else "FAIL")
        print(f"[{status}] {c['name']}: residual {c['residual']:.3e} (tol {c['tol']:.1e})")
    print(f"wrote {outdir / 'verify_report.json'}")
    return 0 if report["passed"] else 1


_COMMANDS = {
    "profile": cmd_profile,
    "coeffs": cmd_coeffs,
    "pnf": cmd_pnf,
    "orbit": cmd_orbit,
    "construct": cmd_construct,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fchpearl",
        description="Pearled bilayers of the planar FCH equation: profiles, "
                    "coefficients, normal-form orbits, constructors, simulation.")
    parser.add_argument("config", help="JSON config file with a 'command' key")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY.PATH=VALUE", help="override a config entry")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(args.config, args.overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    outdir = Path(cfg["output_dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    write_effective(cfg, outdir)
    try:
        return _COMMANDS[cfg.command](cfg, outdir)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
