"""Asymptotic pearled-solution constructors.

Flat:      u_p(tau, r) = u_h(r) + A_p cos(2 pi tau / T_p) psi0(r),
Circular:  u_pn(theta, r) = u_h(r) + A_p cos(n theta) psi0(r),

with u_h ~ u0 + eps*u1, bead amplitude A_p = 2 sqrt(eps|kappa|)/alpha0^{1/4},
period T_p = (2 pi eps / sqrt(lambda0)) (1 - sqrt(alpha0 eps)) at implemented
order, and admissible circular radii R_{0,n} = (n eps / sqrt(lambda0))
(1 - sqrt(alpha0 eps)).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .normal_form import NoPearlingError, SupercriticalityError


class ParameterBoxError(SupercriticalityError):
    pass


def default_box(table, eps0: float = 0.2):
    """(eps0, kappa0) existence box: kappa0 from the super-criticality bound
    with a safety factor of one half."""
    if table.alpha2 == 0:
        return eps0, np.inf
    return eps0, 0.5 * table.alpha0 / (2.0 * abs(table.alpha2) * np.sqrt(eps0))


def _check_params(table, epsilon, kappa, eps0, kappa0):
    if table.alpha0 <= 0:
        raise NoPearlingError(f"alpha0 = {table.alpha0:.6g} <= 0")
    if eps0 is None or kappa0 is None:
        eps0, kappa0 = default_box(table, eps0 if eps0 is not None else 0.2)
    if not 0 < epsilon <= eps0:
        raise ParameterBoxError(f"epsilon = {epsilon} outside (0, {eps0}]")
    if abs(kappa) > kappa0:
        raise ParameterBoxError(f"|kappa| = {abs(kappa)} > kappa0 = {kappa0:.6g}")
    if table.alpha0 - 2.0 * table.alpha2 * np.sqrt(epsilon) * kappa <= 0:
        raise ParameterBoxError("amplitude radicand alpha0 - 2 alpha2 sqrt(eps) kappa <= 0")
    return eps0, kappa0


@dataclass(frozen=True)
class PearlSolution:
    kind: str                 # "flat" | "circular"
    epsilon: float
    kappa: float
    amplitude: float          # A_p
    lambda0: float
    alpha0: float
    evaluate: Callable        # (tau_or_theta, r) -> u
    period: Optional[float] = None     # flat: T_p in tau units
    n: Optional[int] = None            # circular: bead count
    radius: Optional[float] = None     # circular: R_{0,n}
    far_field: float = -1.0


def pearl_amplitude(table, epsilon: float, kappa: float) -> float:
    return 2.0 * np.sqrt(epsilon * abs(kappa)) / table.alpha0 ** 0.25


def pearl_period(table, epsilon: float) -> float:
    """T_p at implemented order (bracket truncated at 1 - sqrt(alpha0 eps))."""
    return (2.0 * np.pi * epsilon / np.sqrt(table.lambda0)
            * (1.0 - np.sqrt(table.alpha0 * epsilon)))


def _profile_interp(b, op, include_u1, epsilon):
    r_grid = b.grid.r
    u1 = b.u1 if (include_u1 and b.u1 is not None) else np.zeros_like(b.u0)
    uh = b.u0 + epsilon * u1
    psi0 = op.psi0

    def uh_of(r):
        return np.interp(r, r_grid, uh)

    def psi0_of(r):
        return np.interp(r, r_grid, psi0, left=0.0, right=0.0)

    far = float(uh[0])
    return uh_of, psi0_of, far


def flat_pearl(b, op, table, epsilon: float, kappa: float,
               eps0: float = None, kappa0: float = None,
               include_u1: bool = True) -> PearlSolution:
    """Flat pearled bilayer; evaluator takes (tau, r)."""
    _check_params(table, epsilon, kappa, eps0, kappa0)
    A = pearl_amplitude(table, epsilon, kappa)
    T = pearl_period(table, epsilon)
    uh_of, psi0_of, far = _profile_interp(b, op, include_u1, epsilon)

    def evaluate(tau, r):
        tau = np.asarray(tau, dtype=float)
        r = np.asarray(r, dtype=float)
        return uh_of(r) + A * np.cos(2.0 * np.pi * tau / T) * psi0_of(r)

    return PearlSolution(kind="flat", epsilon=epsilon, kappa=kappa, amplitude=A,
                         lambda0=table.lambda0, alpha0=table.alpha0,
                         evaluate=evaluate, period=T, far_field=far)


def circular_radius(table, n: int, epsilon: float) -> float:
    return (n * epsilon / np.sqrt(table.lambda0)
            * (1.0 - np.sqrt(table.alpha0 * epsilon)))


def circular_radii(table, epsilon: float, kappa: float, R_minus: float,
                   max_count: int = 50, n_minus: float = None,
                   eps0: float = None, kappa0: float = None):
    """Admissible (n, R_{0,n}) with R_{0,n} >= R_minus, n >= ceil(n_minus/eps).

    n_minus defaults to the value implied by inverting R_{0,n} at R_minus.
    """
    _check_params(table, epsilon, kappa, eps0, kappa0)
    if R_minus <= 0:
        raise ValueError("R_minus must be positive")
    gap = epsilon / np.sqrt(table.lambda0) * (1.0 - np.sqrt(table.alpha0 * epsilon))
    if n_minus is None:
        n_lo = int(np.ceil(R_minus / gap))
    else:
        n_lo = int(np.ceil(n_minus / epsilon))
    while circular_radius(table, n_lo, epsilon) < R_minus:
        n_lo += 1
    return [(n, circular_radius(table, n, epsilon))
            for n in range(n_lo, n_lo + max_count)]


def circular_pearl(b, op, table, n: int, epsilon: float, kappa: float,
                   eps0: float = None, kappa0: float = None,
                   include_u1: bool = True) -> PearlSolution:
    """Circular pearled bilayer with n beads; evaluator takes (theta, r)."""
    _check_params(table, epsilon, kappa, eps0, kappa0)
    if n < 1:
        raise ValueError("bead count n must be a positive integer")
    A = pearl_amplitude(table, epsilon, kappa)
    R0 = circular_radius(table, n, epsilon)
    uh_of, psi0_of, far = _profile_interp(b, op, include_u1, epsilon)

    def evaluate(theta, r):
        theta = np.asarray(theta, dtype=float)
        r = np.asarray(r, dtype=float)
        return uh_of(r) + A * np.cos(n * theta) * psi0_of(r)

    return PearlSolution(kind="circular", epsilon=epsilon, kappa=kappa, amplitude=A,
                         lambda0=table.lambda0, alpha0=table.alpha0,
                         evaluate=evaluate, n=n, radius=R0, far_field=far)


def supercriticality_bound(table, eps0: float, kappa0: float):
    """Necessary existence condition sqrt(eps0) kappa0 < alpha0 / (2|alpha2|).

    Returns (passed, margin).
    """
    if table.alpha2 == 0.0:
        return True, np.inf
    margin = table.alpha0 / (2.0 * abs(table.alpha2)) - np.sqrt(eps0) * kappa0
    return bool(margin > 0), float(margin)
