"""Asymptotic pearled solutions: flat fields, circular fields, admissible radii.

Uses the circular-bilayer parameter point (eta1 = 2, eta_d = 2, gamma =
gamma1) where alpha0 > 0, builds the flat and circular pearled fields of the
existence theory, and tabulates the discrete family of admissible circular
radii R_{0,n} whose gaps are eps/sqrt(lambda0) (1 - sqrt(alpha0 eps)).
"""

from pathlib import Path

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from fchpearl import (WellSpec, RadialGrid, compute_u0, assemble_L0,
                      with_corrections, coefficient_table, flat_pearl,
                      circular_pearl, circular_radii, default_box,
                      supercriticality_bound)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

EPS = 0.1
well = WellSpec()
b0 = compute_u0(well, RadialGrid.default(well, n=8193))
op = assemble_L0(b0)
table = coefficient_table(well, gamma="circular", eta1=2.0, eta_d=2.0,
                          bilayer=b0, op=op)
b = with_corrections(b0, op, table.gamma, table.eta_d)
print(f"circular point: gamma1 = {table.gamma1:.6f}, alpha0 = {table.alpha0:.6f}")

eps0, kappa0 = default_box(table)
ok, margin = supercriticality_bound(table, eps0, kappa0)
print(f"existence box: eps0 = {eps0}, kappa0 = {kappa0:.4f} "
      f"(super-criticality margin {margin:.4f}, pass = {ok})")

kappa = kappa0 / 2
flat = flat_pearl(b, op, table, EPS, kappa)
print(f"\nflat pearl: A_p = {flat.amplitude:.5f}, T_p = {flat.period:.5f}")

radii = circular_radii(table, EPS, kappa, R_minus=1.0, max_count=8)
print("\nadmissible circular radii (n, R0n):")
for n, R in radii:
    print(f"  n = {n:3d}  R0 = {R:.6f}")
gaps = np.diff([R for _, R in radii])
print(f"gaps: {gaps[0]:.6f} (all equal: {np.allclose(gaps, gaps[0])})")

n_beads = radii[0][0]
circ = circular_pearl(b, op, table, n_beads, EPS, kappa)
print(f"\ncircular pearl: n = {circ.n}, R0 = {circ.radius:.5f}, "
      f"A_p = {circ.amplitude:.5f}")

# render both fields
fig, axes = plt.subplots(1, 2, figsize=(12, 5))
Lx, Ly = 4 * flat.period, 2.4
x = np.linspace(0, Lx, 400)
y = np.linspace(-Ly / 2, Ly / 2, 240)
axes[0].imshow(flat.evaluate(x[:, None], y[None, :] / EPS).T, origin="lower",
               extent=(0, Lx, -Ly / 2, Ly / 2), cmap="RdBu_r", aspect="auto")
axes[0].set_title(f"flat pearled bilayer, T_p = {flat.period:.3f}")

L = 2 * (circ.radius + 0.8)
xs = np.linspace(-L / 2, L / 2, 500)
rho = np.hypot(xs[:, None], xs[None, :])
th = np.arctan2(xs[None, :], xs[:, None])
axes[1].imshow(circ.evaluate(th, (rho - circ.radius) / EPS).T, origin="lower",
               extent=(-L / 2, L / 2, -L / 2, L / 2), cmap="RdBu_r")
axes[1].set_title(f"circular pearled bilayer, n = {circ.n}")

fig.tight_layout()
fig.savefig(out / "05_pearled_solutions.png", dpi=130)
print(f"\nwrote {out / '05_pearled_solutions.png'}")
