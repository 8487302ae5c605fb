"""Non-degenerate double-well potentials.

The well W has minima at u = -1 (solvent, W = 0) and u = m > 0 (amphiphile,
W(m) < 0), a local maximum at u = 0, and curvatures

    mu_- = W''(-1) > 0,   mu_+ = W''(m) > 0,   mu_0 = W''(0) < 0.

Two families are supported:

* ``cubic`` (default): W'(u) = scale * u(u+1)(u-m); W is the exact polynomial
  antiderivative fixed by W(-1) = 0.
* ``poly``: W given by explicit polynomial coefficients (ascending order).

Because W(-1) = W'(-1) = 0, (u+1)^2 divides W.  W is evaluated in the factored
form W(u) = (u+1)^2 q(u): the expanded polynomial cancels catastrophically near
u = -1 (absolute noise ~1e-17 swamps W ~ 1e-18 once u+1 < 1e-9), which would
destroy the exponential tail of the bilayer profile.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P


class WellError(ValueError):
    """Inadmissible well specification."""


@dataclass(frozen=True)
class WellSpec:
    """Double-well potential specification.

    Parameters
    ----------
    family : {"cubic", "poly"}
        ``cubic`` builds W from W'(u) = scale*u(u+1)(u-m); ``poly`` takes
        explicit W coefficients.
    m : float
        Location of the right well (must exceed the u=0 maximum).
    scale : float
        Overall multiplicative factor (cubic family only).
    coeffs : sequence of float, optional
        Ascending coefficients of W for the ``poly`` family.
    """

    family: str = "cubic"
    m: float = 1.5
    scale: float = 1.0
    coeffs: Optional[Sequence[float]] = None

    # derived polynomial data, filled in __post_init__
    _w_poly: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _q_poly: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _q_exact: bool = field(init=False, repr=False, compare=False, default=False)

    def __post_init__(self):
        if self.family == "cubic":
            if not self.m > 0:
                raise WellError(f"right-well location m must be positive, got {self.m}")
            if not self.scale > 0:
                raise WellError(f"scale must be positive, got {self.scale}")
            m = self.m
            # W'(u) = u(u+1)(u-m) = u^3 + (1-m)u^2 - m u, antidifferentiated with W(-1)=0
            const = -0.25 + (1.0 - m) / 3.0 + m / 2.0
            w = self.scale * np.array([const, 0.0, -m / 2.0, (1.0 - m) / 3.0, 0.25])
        elif self.family == "poly":
            if self.coeffs is None:
                raise WellError("family='poly' requires coeffs")
            w = np.asarray(self.coeffs, dtype=float)
        else:
            raise WellError(f"unknown well family {self.family!r}")
        object.__setattr__(self, "_w_poly", w)
        q, exact = _deflate_double_root(w)
        object.__setattr__(self, "_q_poly", q)
        object.__setattr__(self, "_q_exact", exact)

    # -- curvatures ------------------------------------------------------
    @property
    def mu_minus(self) -> float:
        return float(eval_well(self, -1.0, 2))

    @property
    def mu_plus(self) -> float:
        return float(eval_well(self, self.m, 2))

    @property
    def mu_zero(self) -> float:
        return float(eval_well(self, 0.0, 2))

    def q(self, u):
        """Deflated factor q with W(u) = (u+1)^2 q(u)."""
        return P.polyval(np.asarray(u, dtype=float), self._q_poly)


def _deflate_double_root(w_poly):
    """Divide W twice by (u+1); exact when W(-1) = W'(-1) = 0."""
    one = np.array([1.0, 1.0])  # (u + 1)
    q1, r1 = P.polydiv(w_poly, one)
    q2, r2 = P.polydiv(q1, one)
    scale = max(np.abs(w_poly).max(), 1.0)
    exact = abs(r1[0]) <= 1e-12 * scale and abs(r2[0]) <= 1e-12 * scale
    return q2, exact


def eval_well(spec: WellSpec, u, order: int = 0):
    """Evaluate d^order W / du^order at u (order 0..4, exact for polynomials)."""
    if order not in (0, 1, 2, 3, 4):
        raise ValueError(f"order must be in 0..4, got {order}")
    u = np.asarray(u, dtype=float)
    if order == 0 and spec._q_exact:
        return (u + 1.0) ** 2 * P.polyval(u, spec._q_poly)
    poly = spec._w_poly
    for _ in range(order):
        poly = P.polyder(poly)
    return P.polyval(u, poly)


@dataclass(frozen=True)
class WellCheck:
    name: str
    value: float
    passed: bool


@dataclass(frozen=True)
class WellReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def validate_well(spec: WellSpec, tol: float = 1e-10) -> WellReport:
    """Check the non-degeneracy invariants; failures are report entries, not raises."""
    m = spec.m
    checks = [
        WellCheck("W(-1) = 0", float(eval_well(spec, -1.0)), abs(eval_well(spec, -1.0)) <= tol),
        WellCheck("W'(-1) = 0", float(eval_well(spec, -1.0, 1)), abs(eval_well(spec, -1.0, 1)) <= tol),
        WellCheck("W'(0) = 0", float(eval_well(spec, 0.0, 1)), abs(eval_well(spec, 0.0, 1)) <= tol),
        WellCheck("W'(m) = 0", float(eval_well(spec, m, 1)), abs(eval_well(spec, m, 1)) <= tol),
        WellCheck("mu_- > 0", spec.mu_minus, spec.mu_minus > tol),
        WellCheck("mu_+ > 0", spec.mu_plus, spec.mu_plus > tol),
        WellCheck("mu_0 < 0", spec.mu_zero, spec.mu_zero < -tol),
        WellCheck("W(m) < 0", float(eval_well(spec, m)), eval_well(spec, m) < -tol),
    ]
    return WellReport(tuple(checks))
