"""Bilayer profile u0 and its first-order corrections v0, u1.

u0 solves u'' = W'(u0), homoclinic to u = -1.  With W(-1) = 0 the first
integral is (u0')^2/2 = W(u0), so u0 is obtained by quadrature of

    w' = -sgn(r) * w * sqrt(2 q(u)),     w := u + 1,  W = (u+1)^2 q(u),

integrated outward from the turning point u* (the simple zero of q in (0, m))
and reflected; the turning point is regularized by a quartic Taylor step.
Integrating in w with relative error control keeps the exponential tail
accurate down to ~1e-14, which the Dirichlet closure of the discrete operator
needs (the closure error enters as tail/h^2).

v0 and u1 are correction fields of the bilayer family at small epsilon:

    L0 v0 = gamma - eta_d W'(u0),      L0 u1 = v0,

solved on the orthogonal complement of the translation kernel.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .potential import WellSpec, eval_well, validate_well, WellError


class NoHomoclinicError(ValueError):
    """The well admits no homoclinic pulse (no simple turning point)."""


class DomainTooSmallError(ValueError):
    """Grid half-width too small for the profile tail."""


DEFAULT_N = 32769
DEFAULT_WIDTH_FACTOR = 34.0


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid on [-L, L]; n should be odd so r = 0 is a node."""

    half_width: float
    n: int

    def __post_init__(self):
        if self.n < 201:
            raise ValueError(f"grid needs n >= 201, got {self.n}")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")

    @property
    def r(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @classmethod
    def default(cls, well: WellSpec, n: int = DEFAULT_N,
                width_factor: float = DEFAULT_WIDTH_FACTOR) -> "RadialGrid":
        return cls(width_factor / np.sqrt(well.mu_minus), n)

    def refined(self) -> "RadialGrid":
        """Grid with the same half-width and halved spacing (shares nodes)."""
        return RadialGrid(self.half_width, 2 * self.n - 1)


@dataclass(frozen=True)
class BilayerData:
    """Bilayer profile and (optionally) its first-order corrections."""

    well: WellSpec
    grid: RadialGrid
    u0: np.ndarray
    du0: np.ndarray
    ustar: float
    u_minus: float = -1.0
    v0: Optional[np.ndarray] = None
    u1: Optional[np.ndarray] = None
    gamma: Optional[float] = None
    eta_d: Optional[float] = None


def turning_point(well: WellSpec) -> float:
    """Simple zero u* of W in (0, m), via bisection on the deflated factor q."""
    m = well.m
    us = np.linspace(0.0, m, 4097)
    qv = well.q(us)
    if qv[0] <= 0:
        raise NoHomoclinicError("W has no positive barrier at u = 0")
    sign_change = np.where((qv[:-1] > 0) & (qv[1:] <= 0))[0]
    if len(sign_change) == 0:
        raise NoHomoclinicError("W has no zero in (0, m): front, not pulse")
    i = sign_change[0]
    if qv[i + 1] == 0.0 and (i + 2 >= len(qv) or qv[i + 2] >= 0.0):
        raise NoHomoclinicError("turning point is a double root (equal-depth well)")
    ustar = brentq(well.q, us[i], us[i + 1], xtol=1e-15, rtol=8.9e-16)
    dq = (well.q(ustar + 1e-7) - well.q(ustar - 1e-7)) / 2e-7
    if abs(dq) < 1e-8:
        raise NoHomoclinicError("turning point is degenerate (W'(u*) ~ 0)")
    # W > 0 on (-1, u*)
    probe = np.linspace(-1.0 + 1e-9, ustar - 1e-9, 2049)
    if np.any(well.q(probe) <= 0):
        raise NoHomoclinicError("W is not positive on (-1, u*)")
    return float(ustar)


def compute_u0(well: WellSpec, grid: RadialGrid) -> BilayerData:
    """Leading-order bilayer profile by quadrature of the first integral."""
    report = validate_well(well)
    if not report.passed:
        failed = [c.name for c in report.failures()]
        if failed == ["W(m) < 0"]:
            # equal-depth well: admissible shape but the orbit is a front
            raise NoHomoclinicError("W(m) = 0: equal-depth well has no pulse")
        raise WellError(f"well fails validation: {failed}")
    ustar = turning_point(well)

    r = grid.r
    h = grid.h
    mid = grid.n // 2
    L = grid.half_width
    scale = 1.0  # q already carries any scale

    wp = eval_well(well, ustar, 1)
    wpp = eval_well(well, ustar, 2)
    r0 = min(h, 1e-3)

    def taylor(rr):
        # u(r) = u* + W'(u*) r^2/2 + W''(u*)W'(u*) r^4/24 + O(r^6)
        return ustar + 0.5 * wp * rr ** 2 + wpp * wp * rr ** 4 / 24.0

    def rhs(rr, w):
        qv = well.q(w[0] - 1.0)
        return [-w[0] * np.sqrt(max(2.0 * scale * qv, 0.0))]

    sol = solve_ivp(rhs, (r0, L), [taylor(r0) + 1.0], method="DOP853",
                    rtol=2.5e-14, atol=1e-250, dense_output=True)
    if not sol.success:
        raise NoHomoclinicError(f"profile integration failed: {sol.message}")

    rp = r[mid + 1:]
    w_pos = np.where(rp < r0, 1.0 + taylor(rp), sol.sol(np.maximum(rp, r0))[0])
    w = np.empty(grid.n)
    w[mid] = 1.0 + ustar
    w[mid + 1:] = w_pos
    w[:mid] = w_pos[::-1]

    u0 = w - 1.0
    if abs(u0[-1] + 1.0) > 1e-6:
        raise DomainTooSmallError(
            f"|u0(L)+1| = {abs(u0[-1] + 1.0):.2e} > 1e-6; increase half_width")
    du0 = -np.sign(r) * w * np.sqrt(np.maximum(2.0 * well.q(u0), 0.0))
    return BilayerData(well=well, grid=grid, u0=u0, du0=du0, ustar=ustar)


def compute_v0(b: BilayerData, op, gamma: float, eta_d: float) -> np.ndarray:
    """v0 = gamma L0^{-1} 1 - eta_d L0^{-1} W'(u0), the even bounded solution."""
    n = b.grid.n
    v0 = np.zeros(n)
    if gamma != 0.0:
        v0 += gamma * op.solve_shifted(0.0, np.ones(n), deflate="kernel")
    if eta_d != 0.0:
        v0 -= eta_d * op.solve_shifted(0.0, eval_well(b.well, b.u0, 1), deflate="kernel")
    return v0


def compute_u1(b: BilayerData, op, v0: Optional[np.ndarray] = None) -> np.ndarray:
    """u1 = L0^{-1} v0 with <u1, psi1> = 0."""
    if v0 is None:
        v0 = b.v0
    if v0 is None:
        raise ValueError("v0 not computed; call compute_v0 first")
    return op.solve_shifted(0.0, v0, deflate="kernel")


def with_corrections(b: BilayerData, op, gamma: float, eta_d: float) -> BilayerData:
    """BilayerData with v0, u1 attached for the given parameters."""
    v0 = compute_v0(b, op, gamma, eta_d)
    u1 = compute_u1(b, op, v0)
    return replace(b, v0=v0, u1=u1, gamma=gamma, eta_d=eta_d)
