"""Pearling normal form: conserved quantities and the closed-form orbits.

Integrates the PNF from a generic state and from the closed-form periodic
orbit, monitoring the two first integrals K and H; plots the orbit family
amplitude r1(kappa) and the conservation errors.
"""

from pathlib import Path

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from fchpearl import (WellSpec, RadialGrid, compute_u0, assemble_L0,
                      coefficient_table, NFCoefficients, pnf_rhs,
                      first_integrals, pnf_periodic_orbit, integrate)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

EPS = 0.1
well = WellSpec()
b = compute_u0(well, RadialGrid.default(well, n=8193))
op = assemble_L0(b)
table = coefficient_table(well, gamma=1.0, eta1=2.0, eta_d=0.0, bilayer=b, op=op)
nf = NFCoefficients.from_table(table, EPS)
print(f"alpha0 = {nf.alpha0:.6f}, alpha2 = {nf.alpha2:.6f}, "
      f"omega1 = {nf.omega1:.6f}")

kappa = 0.25
orbit = pnf_periodic_orbit(nf, kappa)
print(f"\nclosed-form orbit at kappa = {kappa}:")
print(f"  r1 = {orbit.r1:.6f}, r2 = {orbit.r2:.6f}, omega = {orbit.omega:.6f}")
print(f"  period = {orbit.period:.6f}, K = {orbit.K:.6e}")

# residual of the closed form in the vector field
worst = 0.0
for t in np.linspace(0, orbit.period, 64):
    v = orbit.state(t)
    dC = pnf_rhs(v, nf)
    # analytic derivative is i*omega*(C1, C2)
    ana = orbit.omega * np.array([-v[1], v[0], -v[3], v[2], 0, 0, 0, 0])
    worst = max(worst, np.abs(dC - ana).max())
print(f"  pointwise residual in the PNF: {worst:.2e}")

# drift of K, H along a generic trajectory
v0 = orbit.state(0.0) + np.array([0.02, 0.0, 0.0, 0.01, 0, 0, 0, 0])
traj = integrate(pnf_rhs, v0, (0.0, 100.0), tol=1e-12, coeffs=nf)
K0, H0 = first_integrals(v0, nf)
ts = np.linspace(0, 100, 2001)
Ks, Hs = np.array([first_integrals(traj(t), nf) for t in ts]).T
print(f"\nK drift over t in [0,100]: {np.abs(Ks - K0).max():.2e}")
print(f"H drift over t in [0,100]: {np.abs(Hs - H0).max():.2e}")

fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
kaps = np.linspace(-0.5, 0.5, 201)
r1s = [pnf_periodic_orbit(nf, k).r1 if k != 0 else nf.alpha0 ** -0.25
       for k in kaps]
axes[0].plot(kaps, r1s)
axes[0].set_xlabel(r"$\kappa$")
axes[0].set_title(r"orbit amplitude $r_1(\kappa)$")

sample = np.array([traj(t) for t in ts])
axes[1].plot(sample[:, 0], sample[:, 1], lw=0.4)
axes[1].set_title("C1 plane, generic trajectory")
axes[1].set_aspect("equal")

axes[2].semilogy(ts, np.abs(Ks - K0) + 1e-18, label="|K - K(0)|")
axes[2].semilogy(ts, np.abs(Hs - H0) + 1e-18, label="|H - H(0)|")
axes[2].legend()
axes[2].set_xlabel("t")
axes[2].set_title("first-integral drift")

fig.tight_layout()
fig.savefig(out / "03_pnf_orbits.png", dpi=130)
print(f"\nwrote {out / '03_pnf_orbits.png'}")
