"""Pearling normal form (PNF) and the truncated 8th-order normal form.

State layout: 8 reals [Re C1, Im C1, Re C2, Im C2, D1, D2, D3, D4]; the
conjugate equations are implied, which removes a whole class of conjugation
bugs.  The PNF is the restriction to D = 0:

    C1' = i(1+omega1 eps) C1 + C2 + i C1 [alpha7 |C1|^2 + 2 alpha8 K]
    C2' = i(1+omega1 eps) C2 + i C2 [alpha7 |C1|^2 + 2 alpha8 K]
          + C1 (-alpha0 eps + 2 alpha2 K)

with K = -Im(C1 conj(C2)).  The conserved pair is (K, H) with

    H = |C2|^2 + (alpha0 eps - 2 alpha2 K) |C1|^2,

the sign that the periodic-orbit construction actually conserves (the +/-
printed variant is not a first integral; see the decisions ledger).

The full 8D field adds the versal linear D-block and the cubic resonance
terms; alpha1 = 0 is hard-wired (the resonant cubic coefficient vanishes
identically, which the coefficient table verifies numerically), and
alpha3..alpha6, alpha9..alpha12, beta1..beta13 default to zero and are
user-suppliable.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp


class NoPearlingError(ValueError):
    """alpha0 <= 0: no nontrivial PNF periodic orbits."""


class SupercriticalityError(ValueError):
    """kappa outside the existence box (r1 would be complex)."""


class ShootingError(RuntimeError):
    """Newton shooting failed to converge."""


class StiffnessError(RuntimeError):
    """Adaptive integrator step underflow / failure."""


# ---------------------------------------------------------------------------
# state
# ---------------------------------------------------------------------------

@dataclass
class NFState:
    C1: complex = 0.0 + 0.0j
    C2: complex = 0.0 + 0.0j
    D: np.ndarray = field(default_factory=lambda: np.zeros(4))
    t: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.C1.real, self.C1.imag, self.C2.real, self.C2.imag,
                         *self.D], dtype=float)

    @classmethod
    def from_vector(cls, v, t: float = 0.0) -> "NFState":
        v = np.asarray(v, dtype=float)
        return cls(C1=v[0] + 1j * v[1], C2=v[2] + 1j * v[3], D=v[4:8].copy(), t=t)


def s1_reverse(v: np.ndarray) -> np.ndarray:
    """Reversibility S1: (C1,C2,D) -> (conj C1, -conj C2, D1,-D2,D3,-D4)."""
    v = np.asarray(v, dtype=float)
    return np.array([v[0], -v[1], -v[2], v[3], v[4], -v[5], v[6], -v[7]])


def rotate(v: np.ndarray, theta: float) -> np.ndarray:
    """Phase rotation R_theta on (C1, C2); D untouched."""
    c, s = np.cos(theta), np.sin(theta)
    out = np.array(v, dtype=float)
    out[0], out[1] = c * v[0] - s * v[1], s * v[0] + c * v[1]
    out[2], out[3] = c * v[2] - s * v[3], s * v[2] + c * v[3]
    return out


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NFCoefficients:
    """Normal-form coefficients; omega2 = -alpha0 by construction."""

    epsilon: float
    omega1: float = 0.0
    omega2: float = 0.0
    omega3: float = 0.0
    omega4: float = 0.0
    alpha2: float = 0.0
    alpha7: float = 0.0
    alpha8: float = 0.0
    # higher-order pearling/meander couplings; never supplied by the theory
    alpha3: float = 0.0
    alpha4: float = 0.0
    alpha5: float = 0.0
    alpha6: float = 0.0
    alpha9: float = 0.0
    alpha10: float = 0.0
    alpha11: float = 0.0
    alpha12: float = 0.0
    beta: tuple = (0.0,) * 13

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if len(self.beta) != 13:
            raise ValueError("beta must have 13 entries")

    @property
    def alpha0(self) -> float:
        return -self.omega2

    @classmethod
    def from_table(cls, table, epsilon: float, **overrides) -> "NFCoefficients":
        kw = dict(
            epsilon=epsilon,
            omega1=table.omega[0], omega2=table.omega[1],
            omega3=table.omega[2], omega4=table.omega[3],
            alpha2=table.alpha2,
        )
        kw.update(overrides)
        return cls(**kw)

    def with_alpha0(self, alpha0: float) -> "NFCoefficients":
        return replace(self, omega2=-alpha0)


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------

def _split(v):
    C1 = v[0] + 1j * v[1]
    C2 = v[2] + 1j * v[3]
    return C1, C2, v[4:8]


def _join(dC1, dC2, dD):
    return np.array([dC1.real, dC1.imag, dC2.real, dC2.imag, *dD])


def first_integrals(v, c: NFCoefficients):
    """(K, H) of the PNF restriction."""
    C1, C2, _ = _split(np.asarray(v, dtype=float))
    K = -np.imag(C1 * np.conj(C2))
    H = abs(C2) ** 2 + (c.alpha0 * c.epsilon - 2.0 * c.alpha2 * K) * abs(C1) ** 2
    return float(K), float(H)


def pnf_rhs(v, c: NFCoefficients) -> np.ndarray:
    """PNF vector field on the pearling modes; D components ride along as 0."""
    C1, C2, _ = _split(np.asarray(v, dtype=float))
    K = -np.imag(C1 * np.conj(C2))
    ilin = 1j * (1.0 + c.omega1 * c.epsilon)
    phase = c.alpha7 * abs(C1) ** 2 + 2.0 * c.alpha8 * K
    dC1 = ilin * C1 + C2 + 1j * C1 * phase
    dC2 = ilin * C2 + 1j * C2 * phase + C1 * (-c.alpha0 * c.epsilon + 2.0 * c.alpha2 * K)
    return _join(dC1, dC2, np.zeros(4))


def nf8_rhs(v, c: NFCoefficients) -> np.ndarray:
    """Truncated 8th-order normal form: versal linear part + displayed cubics."""
    C1, C2, D = _split(np.asarray(v, dtype=float))
    D1, D2, D3, D4 = D
    eps = c.epsilon
    P = C1 * np.conj(C2) - np.conj(C1) * C2          # purely imaginary
    phase = c.alpha7 * (C1 * np.conj(C1)).real + c.alpha8 * (1j * P).real

    Q1 = D2 * D3 - 3.0 * D1 * D4
    Q2 = 2.0 * D1 * D3 - D2 ** 2

    R31 = 1j * (C1 * phase + c.alpha9 * C1 * D1 ** 2
                + c.alpha10 * 1j * D1 * (C2 * D1 - C1 * D2)
                + c.alpha11 * C1 * Q2
                + c.alpha12 * 1j * (C1 * Q1 + C2 * Q2))
    R32 = (C1 * (1j * c.alpha2 * P) + c.alpha3 * C1 * D1 ** 2
           + c.alpha4 * 1j * D1 * (C2 * D1 - C1 * D2)
           + c.alpha5 * C1 * Q2 + c.alpha6 * 1j * (C1 * Q1 + C2 * Q2)
           + 1j * (C2 * phase + c.alpha9 * C2 * D1 ** 2
                   + c.alpha10 * 1j * D2 * (C2 * D1 - C1 * D2)
                   + c.alpha11 * C1 * (-Q1)
                   + c.alpha12 * 1j * (2.0 * C1 * (2.0 * D3 ** 2 - 3.0 * D2 * D4)
                                       + C2 * (-Q1))))
    b = c.beta
    c1c1 = (C1 * np.conj(C1)).real
    c2c2 = (C2 * np.conj(C2)).real
    iP = (1j * P).real
    c12 = (C1 * np.conj(C2) + np.conj(C1) * C2).real
    R38 = (D1 * (b[0] * c1c1 + b[1] * c2c2) + iP * (b[2] * D1 + b[3] * D3)
           + b[4] * c1c1 * D3 + b[5] * D2 * c12
           + b[6] * (3.0 * c12 * D4 - 2.0 * c2c2 * D3)
           + b[7] * D1 * D2 ** 2 + D1 ** 2 * (b[8] * D1 + b[9] * D3)
           + b[10] * (D2 ** 2 * D3 - 2.0 * D1 * D3 ** 2)
           + b[11] * (D2 ** 2 * D3 - 3.0 * D1 * D2 * D4)
           + b[12] * (9.0 * D2 * D3 * D4 - 9.0 * D1 * D4 ** 2 - 4.0 * D3 ** 3))

    ilin = 1j * (1.0 + c.omega1 * eps)
    dC1 = ilin * C1 + C2 + R31
    dC2 = c.omega2 * eps * C1 + ilin * C2 + R32
    dD = np.array([D2, D3, D4,
                   c.omega3 * eps * D1 + c.omega4 * eps * D3 + R38])
    return _join(dC1, dC2, dD)


# ---------------------------------------------------------------------------
# closed-form PNF periodic orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PNFOrbit:
    epsilon: float
    kappa: float
    r1: float
    r2: float
    omega: float
    coeffs: NFCoefficients

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    @property
    def K(self) -> float:
        return self.epsilon ** 1.5 * self.kappa

    def state(self, t: float, theta: float = 0.0) -> np.ndarray:
        eps, kap = self.epsilon, self.kappa
        ph = np.exp(1j * (self.omega * t + theta))
        C1 = np.sqrt(eps * abs(kap)) * self.r1 * ph
        C2 = np.sign(kap) * 1j * eps * np.sqrt(abs(kap)) * self.r2 * ph
        return _join(C1, C2, np.zeros(4))


def pnf_periodic_orbit(c: NFCoefficients, kappa: float) -> PNFOrbit:
    """Closed-form PNF orbit family of the degenerate 1:1 resonance."""
    a0 = c.alpha0
    if a0 <= 0:
        raise NoPearlingError(
            f"alpha0 = {a0:.6g} <= 0: no periodic solutions except the origin")
    eps = c.epsilon
    disc = a0 - 2.0 * c.alpha2 * np.sqrt(eps) * kappa
    if disc <= 0:
        raise SupercriticalityError(
            f"alpha0 - 2 alpha2 sqrt(eps) kappa = {disc:.6g} <= 0: kappa outside box")
    r1 = disc ** -0.25
    r2 = 1.0 / r1
    omega = (1.0 + c.omega1 * eps + np.sign(kappa) * np.sqrt(eps) * r2 ** 2
             + c.alpha7 * eps * abs(kappa) * r1 ** 2
             + 2.0 * c.alpha8 * eps ** 1.5 * kappa)
    return PNFOrbit(epsilon=eps, kappa=kappa, r1=r1, r2=r2, omega=omega, coeffs=c)


# ---------------------------------------------------------------------------
# integration and shooting
# ---------------------------------------------------------------------------

class Trajectory:
    """Dense-output trajectory wrapper."""

    def __init__(self, sol):
        self._sol = sol
        self.t = sol.t
        self.y = sol.y

    def __call__(self, t):
        return self._sol.sol(t)


def integrate(rhs: Callable, v0, t_span, tol: float = 1e-12,
              coeffs: Optional[NFCoefficients] = None) -> Trajectory:
    """Adaptive embedded RK (DOP853) with dense output.

    `rhs` is either rhs(v) or rhs(v, coeffs) when `coeffs` is given.
    """
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-14, 1e-6]")
    f = (lambda t, v: rhs(v, coeffs)) if coeffs is not None else (lambda t, v: rhs(v))
    sol = solve_ivp(f, t_span, np.asarray(v0, dtype=float), method="DOP853",
                    rtol=tol, atol=tol * 1e-2, dense_output=True)
    if not sol.success:
        raise StiffnessError(f"integration failed: {sol.message}")
    return Trajectory(sol)


@dataclass
class ShootResult:
    state0: np.ndarray
    period: float
    residual: float
    iterations: int

    def orbit(self, rhs, coeffs, tol=1e-12) -> Trajectory:
        return integrate(rhs, self.state0, (0.0, self.period), tol=tol, coeffs=coeffs)


def reversible_shoot(c: NFCoefficients, kappa: float, guess=None,
                     tol: float = 1e-9, max_iter: int = 40) -> ShootResult:
    """Find a reversible periodic orbit of the full 8D field by half-period
    shooting between the two S1 fixed-point sets.

    Unknowns: (Im C2, D1, D3, T/2), with Re C1 slaved to kappa through the
    PNF base point.  Residuals: the S1-antisymmetric components
    (Im C1, Re C2, D2, D4) at T/2.  Least-squares Newton steps handle the
    neutral directions (phase and translation families).
    """
    if c.alpha0 <= 0:
        raise NoPearlingError("alpha0 <= 0: nothing to shoot for")
    base = pnf_periodic_orbit(c, kappa)
    reC1 = np.sqrt(c.epsilon * abs(kappa)) * base.r1
    if guess is None:
        guess = np.array([np.sign(kappa) * c.epsilon * np.sqrt(abs(kappa)) * base.r2,
                          0.0, 0.0, np.pi / base.omega])
    x = np.asarray(guess, dtype=float).copy()

    def residual(xv):
        imC2, D1, D3, Thalf = xv
        if Thalf <= 0:
            return np.full(4, 1e3)
        v0 = np.array([reC1, 0.0, 0.0, imC2, D1, 0.0, D3, 0.0])
        traj = integrate(nf8_rhs, v0, (0.0, Thalf), tol=1e-12, coeffs=c)
        vT = traj.y[:, -1]
        return np.array([vT[1], vT[2], vT[5], vT[7]])

    F = residual(x)
    best = (np.abs(F).max(), x.copy())
    it = 0
    for it in range(1, max_iter + 1):
        if np.abs(F).max() < tol:
            break
        J = np.zeros((4, 4))
        for j in range(4):
            dx = np.zeros(4)
            dx[j] = 1e-7 * max(1.0, abs(x[j]))
            J[:, j] = (residual(x + dx) - F) / dx[j]
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        damp = 1.0
        for _ in range(8):
            Fn = residual(x + damp * step)
            if np.abs(Fn).max() <= np.abs(F).max():
                break
            damp *= 0.5
        x = x + damp * step
        F = Fn
        if np.abs(F).max() < best[0]:
            best = (np.abs(F).max(), x.copy())
    if np.abs(F).max() >= max(tol, 1e-9) and best[0] >= max(tol, 1e-9):
        raise ShootingError(
            f"no convergence after {it} iterations (residual {best[0]:.2e})")
    res, x = (np.abs(F).max(), x) if np.abs(F).max() <= best[0] else best
    state0 = np.array([reC1, 0.0, 0.0, x[0], x[1], 0.0, x[2], 0.0])
    return ShootResult(state0=state0, period=2.0 * x[3], residual=float(res),
                       iterations=it)
