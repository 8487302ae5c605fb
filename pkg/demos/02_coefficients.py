"""The pearling coefficient table and its structure.

alpha0 = alpha01*gamma - alpha02*eta_d decides the onset of pearling; the
table also carries the reduction integrals nu1..nu8, the versal-linear
mu1..mu6 / omega1..omega4, the cubic coefficient alpha2, and the numerical
verification that the resonant cubic coefficient alpha1 vanishes.  Two
things worth seeing once:

* the affine law in (gamma, eta_d) holds to solver precision, and
* beta0 evaluates to zero (an exact integration-by-parts identity), so the
  meander-block coefficient omega3 = mu5 = 4*beta0 is zero as well.
"""

import numpy as np

from fchpearl import (WellSpec, RadialGrid, compute_u0, assemble_L0,
                      coefficient_table, alpha0)

well = WellSpec()
b = compute_u0(well, RadialGrid.default(well, n=8193))
op = assemble_L0(b)

table = coefficient_table(well, gamma=1.0, eta1=2.0, eta_d=0.0, bilayer=b, op=op)
print("coefficient table at (gamma, eta1, eta_d) = (1, 2, 0):")
print(f"  lambda0  = {table.lambda0:.9f}")
print(f"  alpha0   = {table.alpha0:.9f}   (alpha01 {table.alpha01:.6f}, "
      f"alpha02 {table.alpha02:.6f})")
print(f"  beta0    = {table.beta0:.3e}  <- identically zero in the continuum")
print(f"  gamma1   = {table.gamma1:.9f}")
print(f"  alpha2   = {table.alpha2:.9f}")
print(f"  alpha1   = {table.alpha1_residual:.3e} (theory: exactly 0)")
print(f"  nu       = {np.round(table.nu, 6)}")
print(f"  mu       = {np.round(table.mu, 6)}")
print(f"  omega    = {np.round(table.omega, 6)}")

print("\naffine structure over a 3x3 parameter grid:")
worst = 0.0
for g in (-1.0, 0.5, 2.0):
    for ed in (-1.0, 0.0, 1.5):
        a, a01, a02 = alpha0(b, op, g, ed)
        resid = abs(a - (a01 * g - a02 * ed))
        worst = max(worst, resid)
        print(f"  gamma={g:+.1f} eta_d={ed:+.1f}: alpha0 = {a:+.6f} "
              f"(affine residual {resid:.1e})")
print(f"worst affine residual: {worst:.2e}")

print("\ncross identities:")
print(f"  alpha0 + mu2   = {table.alpha0 + table.mu[1]:+.2e} (exact: 0)")
print(f"  mu5 - 4 beta0  = {table.mu[4] - 4 * table.beta0:+.2e} (exact: 0)")

# the pearling threshold in eta_d at fixed gamma, from the affine law
for gamma in (0.5, 1.0, 2.0):
    root = -(table.alpha01 * gamma) / (-table.alpha02)
    print(f"alpha0 = 0 at eta_d = {root:+.4f} for gamma = {gamma}")
