"""Scalar coefficients of the reduced pearling problem.

Everything is a quadrature of profile/eigenfunction data against well
derivatives: the bifurcation coefficient alpha0 (with its affine split
alpha0 = alpha01*gamma - alpha02*eta_d), beta0, the circular Lagrange
multiplier gamma1, the quadratic/cubic reduction coefficients nu1..nu8, the
linear (versal) coefficients mu1..mu6 and omega1..omega4, the cubic normal
form coefficient alpha2, and the alpha1 = 0 diagnostic.

Quadrature is composite trapezoid on the uniform grid: all integrands decay
exponentially, so the trapezoid rule is spectrally accurate and the h^2 error
of the eigenfunctions dominates.
"""

from dataclasses import dataclass, asdict, replace

import numpy as np

from .potential import WellSpec, eval_well
from .profile import BilayerData, RadialGrid, compute_u0, compute_v0, compute_u1
from .operator import SpectralData, assemble_L0


@dataclass(frozen=True)
class CoefficientTable:
    alpha0: float
    alpha01: float
    alpha02: float
    beta0: float
    gamma1: float
    nu: tuple          # nu1..nu8
    mu: tuple          # mu1..mu6
    omega: tuple       # omega1..omega4
    alpha2: float
    alpha1_residual: float
    lambda0: float
    # inputs echo
    gamma: float
    eta1: float
    eta2: float
    eta_d: float
    well_family: str
    well_m: float
    well_scale: float
    grid_n: int
    grid_half_width: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["nu"] = list(d["nu"])
        d["mu"] = list(d["mu"])
        d["omega"] = list(d["omega"])
        return d


def _tz(grid, f):
    return float(np.trapezoid(f, grid.r))


def alpha0(b: BilayerData, op: SpectralData, gamma: float, eta_d: float):
    """alpha0 = (1/4 lam0^2) int (W'''(u0) v0 - eta_d W''(u0)) psi0^2 dr.

    Returns (alpha0, alpha01, alpha02); the affine constants are obtained by
    probing at unit parameters.
    """
    w3 = eval_well(b.well, b.u0, 3)
    w2 = eval_well(b.well, b.u0, 2)
    pref = 1.0 / (4.0 * op.lam0 ** 2)

    def evaluate(g, ed):
        v0 = compute_v0(b, op, g, ed)
        return pref * _tz(b.grid, (w3 * v0 - ed * w2) * op.psi0 ** 2)

    a01 = evaluate(1.0, 0.0)
    a02 = -evaluate(0.0, 1.0)
    return evaluate(gamma, eta_d), a01, a02


def beta0(b: BilayerData, op: SpectralData, gamma: float, eta_d: float) -> float:
    """As alpha0 with psi0^2 replaced by psi1^2 (vanishes identically; kept as
    a diagnostic of the printed formula)."""
    w3 = eval_well(b.well, b.u0, 3)
    w2 = eval_well(b.well, b.u0, 2)
    v0 = compute_v0(b, op, gamma, eta_d)
    return float(_tz(b.grid, (w3 * v0 - eta_d * w2) * op.psi1 ** 2) / (4.0 * op.lam0 ** 2))


def gamma1(b: BilayerData, eta1: float, eta_d: float) -> float:
    """Lagrange multiplier selecting the circular-bilayer family."""
    num = _tz(b.grid, b.du0 ** 2)
    den = 2.0 * _tz(b.grid, b.u0 + 1.0)
    return (eta_d - 2.0 * eta1) * num / den


def nu_mu_omega(b: BilayerData, op: SpectralData, eta1: float, eta_d: float,
                u1: np.ndarray = None):
    """All quadratic/cubic reduction integrals and the versal combinations."""
    grid = b.grid
    lam0 = op.lam0
    psi0, psi1 = op.psi0, op.psi1
    w2 = eval_well(b.well, b.u0, 2)
    w3 = eval_well(b.well, b.u0, 3)
    w4 = eval_well(b.well, b.u0, 4)

    if u1 is None:
        v0 = compute_v0(b, op, b.gamma if b.gamma is not None else 0.0, eta_d)
        u1 = compute_u1(b, op, v0)
    L0u1 = op.apply(u1)

    nu = (
        -_tz(grid, w3 * psi0 ** 3) / (4 * lam0),
        -_tz(grid, w3 * psi0 * psi1 ** 2) / (4 * lam0),
        -_tz(grid, w4 * psi0 ** 4) / lam0,
        -_tz(grid, w4 * psi0 ** 2 * psi1 ** 2) / lam0,
        -_tz(grid, w4 * psi1 ** 4) / lam0,
        _tz(grid, w3 ** 2 * psi0 ** 4) / lam0 ** 2,
        _tz(grid, w3 ** 2 * psi0 ** 2 * psi1 ** 2) / lam0 ** 2,
        _tz(grid, w3 ** 2 * psi1 ** 4) / lam0 ** 2,
    )
    mu = (
        -_tz(grid, w3 * u1 * psi0 ** 2) / (2 * lam0),
        -_tz(grid, (w3 * L0u1 - eta_d * w2) * psi0 ** 2) / (4 * lam0 ** 2),
        eta1 / (2 * lam0)
        - _tz(grid, (w3 * (L0u1 + 2 * lam0 * u1) - eta_d * w2) * psi0 ** 2) / (4 * lam0 ** 2),
        _tz(grid, w3 * u1 * psi1 ** 2) / lam0,
        _tz(grid, (w3 * L0u1 - eta_d * w2) * psi1 ** 2) / lam0 ** 2,
        -eta1 / lam0 + _tz(grid, w3 * u1 * psi1 ** 2) / lam0,
    )
    omega = (0.5 * (mu[0] + mu[2]), mu[1], mu[4], mu[3] + mu[5])
    return nu, mu, omega


def _ltilde(op: SpectralData, f: np.ndarray) -> np.ndarray:
    """Ltilde = (1/3 lam0^2)(1/2 + 2 lam0 L0^{-1} + 2 lam0 (L0-4lam0)^{-1}
    - lam0 (L0-4lam0)^{-2}), self-adjoint on even fields."""
    lam0 = op.lam0
    s1 = op.solve_shifted(0.0, f, deflate="kernel")
    s2 = op.solve_shifted(4 * lam0, f)
    s3 = op.solve_shifted(4 * lam0, s2)
    return (0.5 * f + 2 * lam0 * s1 + 2 * lam0 * s2 - lam0 * s3) / (3 * lam0 ** 2)


def alpha2(b: BilayerData, op: SpectralData, nu1: float = None, nu3: float = None) -> float:
    """Cubic coefficient alpha2 = -nu3/3 + (80/9) nu1^2 + <g, Ltilde g>."""
    grid = b.grid
    lam0 = op.lam0
    w3 = eval_well(b.well, b.u0, 3)
    w4 = eval_well(b.well, b.u0, 4)
    if nu1 is None:
        nu1 = -_tz(grid, w3 * op.psi0 ** 3) / (4 * lam0)
    if nu3 is None:
        nu3 = -_tz(grid, w4 * op.psi0 ** 4) / lam0
    op.check_shift_resonance(4 * lam0)
    g = w3 * op.psi0 ** 2 + 4 * lam0 * nu1 * op.psi0
    return -nu3 / 3.0 + 80.0 / 9.0 * nu1 ** 2 + _tz(grid, g * _ltilde(op, g))


def verify_alpha1(b: BilayerData, op: SpectralData,
                  nu1: float = None, nu6: float = None) -> float:
    """Residual of the vanishing cubic coefficient alpha1.

    The center-manifold bracket pairs the quadratic forcing with the tensor
    entries X11 (shift 4 lam0) and X13 (kernel-deflated inverse); with exact
    discrete self-adjointness it cancels -6 nu1^2 + (3/8) nu6 identically, so
    the returned value measures solve/deflation quality.
    """
    grid = b.grid
    lam0 = op.lam0
    w3 = eval_well(b.well, b.u0, 3)
    if nu1 is None:
        nu1 = -_tz(grid, w3 * op.psi0 ** 3) / (4 * lam0)
    if nu6 is None:
        nu6 = _tz(grid, w3 ** 2 * op.psi0 ** 4) / lam0 ** 2

    q = w3 * op.psi0 ** 2
    g = q + 4 * lam0 * nu1 * op.psi0
    L0q = op.apply(q)
    inv0_g = op.solve_shifted(0.0, g, deflate="kernel")
    inv4_g = op.solve_shifted(4 * lam0, g)
    bracket = (_tz(grid, L0q * inv0_g) / (4 * lam0 ** 2)
               - 3.0 * _tz(grid, q * g) / (4 * lam0 ** 2)
               + _tz(grid, L0q * inv4_g) / (8 * lam0 ** 2)
               - _tz(grid, q * inv4_g) / (2 * lam0))
    return -6.0 * nu1 ** 2 + 3.0 / 8.0 * nu6 + bracket


def coefficient_table(well: WellSpec, grid: RadialGrid = None, gamma: float = 1.0,
                      eta1: float = 2.0, eta2: float = None, eta_d: float = None,
                      bilayer: BilayerData = None, op: SpectralData = None) -> CoefficientTable:
    """Evaluate the full table for one parameter tuple.

    gamma="circular" selects the circular-bilayer multiplier gamma1(eta1, eta_d).
    """
    if (eta2 is None) == (eta_d is None):
        raise ValueError("give exactly one of eta2, eta_d")
    if eta_d is None:
        eta_d = eta1 - eta2
    else:
        eta2 = eta1 - eta_d

    if bilayer is None:
        if grid is None:
            grid = RadialGrid.default(well)
        bilayer = compute_u0(well, grid)
    if op is None:
        op = assemble_L0(bilayer)

    g1 = gamma1(bilayer, eta1, eta_d)
    if gamma == "circular":
        gamma = g1
    gamma = float(gamma)

    v0 = compute_v0(bilayer, op, gamma, eta_d)
    u1 = compute_u1(bilayer, op, v0)
    a0, a01, a02 = alpha0(bilayer, op, gamma, eta_d)
    b0 = beta0(bilayer, op, gamma, eta_d)
    bb = replace(bilayer, v0=v0, u1=u1, gamma=gamma, eta_d=eta_d)
    nu, mu, omega = nu_mu_omega(bb, op, eta1, eta_d, u1=u1)
    a2 = alpha2(bilayer, op, nu1=nu[0], nu3=nu[2])
    a1res = verify_alpha1(bilayer, op, nu1=nu[0], nu6=nu[5])

    return CoefficientTable(
        alpha0=a0, alpha01=a01, alpha02=a02, beta0=b0, gamma1=g1,
        nu=nu, mu=mu, omega=omega, alpha2=a2, alpha1_residual=a1res,
        lambda0=op.lam0,
        gamma=gamma, eta1=eta1, eta2=eta2, eta_d=eta_d,
        well_family=well.family, well_m=well.m, well_scale=well.scale,
        grid_n=bilayer.grid.n, grid_half_width=bilayer.grid.half_width,
    )
