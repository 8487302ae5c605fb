"""Double well, bilayer profile, and the transverse spectrum.

Builds the default cubic-derivative well W'(u) = u(u+1)(u-m) with m = 3/2,
computes the homoclinic bilayer profile by quadrature of the first integral,
and extracts the ground state (lambda0, psi0) and translation mode psi1 of
L0 = d^2/dr^2 - W''(u0).  Saves a figure with the well, the profile, and the
eigenfunctions.
"""

from pathlib import Path

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from fchpearl import (WellSpec, RadialGrid, compute_u0, assemble_L0,
                      eval_well, validate_well, lambda0_refined)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

well = WellSpec(m=1.5)
report = validate_well(well)
print("well checks:")
for c in report.checks:
    print(f"  {'ok ' if c.passed else 'BAD'} {c.name:12s} value {c.value:+.3e}")

grid = RadialGrid.default(well, n=8193)
b = compute_u0(well, grid)
op = assemble_L0(b)

print(f"\nturning point u*      = {b.ustar:.12f}")
print(f"tail |u0(L)+1|        = {abs(b.u0[-1] + 1):.3e}")
print(f"lambda0 (matrix)      = {op.lam0:.10f}")
print(f"lambda0 (Richardson)  = {lambda0_refined(well, grid):.10f}")
print(f"kernel eigenvalue     = {op.lam_kernel:.3e}")

ham = np.abs(0.5 * b.du0 ** 2 - eval_well(well, b.u0)).max()
print(f"Hamiltonian residual  = {ham:.3e}")

fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
us = np.linspace(-1.4, 2.0, 400)
axes[0].plot(us, eval_well(well, us))
axes[0].axhline(0, color="k", lw=0.5)
axes[0].set_title("W(u)")
axes[0].set_xlabel("u")

r = grid.r
axes[1].plot(r, b.u0, label="u0")
axes[1].plot(r, b.du0, label="u0'")
axes[1].set_xlim(-12, 12)
axes[1].legend()
axes[1].set_title("bilayer profile")
axes[1].set_xlabel("r")

axes[2].plot(r, op.psi0, label=r"$\psi_0$")
axes[2].plot(r, op.psi1, label=r"$\psi_1$")
axes[2].set_xlim(-12, 12)
axes[2].legend()
axes[2].set_title(f"eigenfunctions, $\\lambda_0$ = {op.lam0:.4f}")
axes[2].set_xlabel("r")

fig.tight_layout()
fig.savefig(out / "01_well_and_profile.png", dpi=130)
print(f"\nwrote {out / '01_well_and_profile.png'}")
