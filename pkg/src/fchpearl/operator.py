"""The transverse linearization L0 = d^2/dr^2 - W''(u0) and its solves.

Second-order centered stencil with Dirichlet closure at +-L (the profile tail
is pushed below 1e-13 by the default grid, so the closure error tail/h^2 stays
under the kernel-identity tolerance).  The matrix is symmetric tridiagonal:
the top eigenpair (lambda0, psi0) and the near-kernel pair come from a
selective tridiagonal eigensolve, and shifted solves (L0 - sigma)^{-1} use
banded LU with one step of iterative refinement.

Two non-obvious pieces:

* Deflation: L0 has a numerical kernel along the translation mode.  Solves at
  sigma = 0 project the right side and the solution off the discrete kernel
  eigenvector (Euclidean projection; the eigenvector is exact for the matrix).
* Far-field shift: right sides like the constant 1 do not decay, so the
  Dirichlet closure is invalid for them.  We subtract the constant far-field
  solution x_inf = -f_inf/(mu_- + sigma) first and solve for the decaying
  remainder; otherwise the solution carries an O(1) boundary layer which
  wrecks pointwise convergence of u1.
"""

import warnings

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded

from .potential import eval_well
from .profile import BilayerData, RadialGrid, compute_u0


class NotABilayerError(ValueError):
    """Ground-state eigenvalue is not positive: profile/well inconsistent."""


class ResonantSolveError(ValueError):
    """Right side has a component along the (near-)nullspace of L0 - sigma."""


class LinearSolveError(RuntimeError):
    """Shifted solve failed to reach its residual tolerance."""


class SpectralData:
    """Discretized L0 with eigendata and solve capability."""

    def __init__(self, b: BilayerData):
        self.bilayer = b
        self.grid = b.grid
        n = b.grid.n
        h = b.grid.h
        self._h = h
        self.w2 = eval_well(b.well, b.u0, 2)
        self.diag = -2.0 / h ** 2 - self.w2
        self.offdiag = np.full(n - 1, 1.0 / h ** 2)
        self.mu_far = 0.5 * (self.w2[0] + self.w2[-1])

        ev, evec = eigh_tridiagonal(self.diag, self.offdiag,
                                    select="i", select_range=(n - 2, n - 1))
        lam0 = float(ev[1])
        if lam0 <= 0:
            raise NotABilayerError(f"largest eigenvalue {lam0} is not positive")
        self.lam0 = lam0
        self.lam_kernel = float(ev[0])

        # parity cleanup: ground state even, kernel mode odd (profile mirrored exactly)
        phi0 = evec[:, 1]
        phi0 = 0.5 * (phi0 + phi0[::-1])
        phi0 /= np.linalg.norm(phi0)
        self.phi0 = phi0 * np.sign(phi0[n // 2])
        phik = evec[:, 0]
        phik = 0.5 * (phik - phik[::-1])
        self.phik = phik / np.linalg.norm(phik)

        # unit L2 norm, psi0(0) > 0; psi1 = u0'/||u0'|| (positive slope at r < 0)
        self.psi0 = self.phi0 / np.sqrt(h)
        nrm = np.sqrt(np.trapezoid(b.du0 ** 2, b.grid.r))
        self.psi1 = b.du0 / nrm

        self._eigvals_all = None

    # -- basic operations --------------------------------------------------
    def apply(self, f: np.ndarray, sigma: float = 0.0) -> np.ndarray:
        """(L0 - sigma) f for the Dirichlet-closed matrix."""
        out = (self.diag - sigma) * f
        out[:-1] += self.offdiag * f[1:]
        out[1:] += self.offdiag * f[:-1]
        return out

    def _deflate_vector(self, deflate):
        if deflate is None:
            return None
        if isinstance(deflate, str):
            return {"kernel": self.phik, "ground": self.phi0}[deflate]
        return deflate

    def solve_shifted(self, sigma: float, f: np.ndarray, deflate=None,
                      rtol: float = 1e-8) -> np.ndarray:
        """Solve (L0 - sigma) x = f; deflate in {'kernel','ground',None}.

        sigma = 0 requires deflate='kernel' unless f is numerically orthogonal
        to the kernel already; sigma = lambda0 analogously with 'ground'.
        """
        n = self.grid.n
        f = np.asarray(f, dtype=float)
        phi = self._deflate_vector(deflate)

        if deflate is None:
            target = None
            if abs(sigma) < 1e-8:
                target = self.phik
            elif abs(sigma - self.lam0) < 1e-8:
                target = self.phi0
            if target is not None:
                if abs(target @ f) > 1e-8 * np.linalg.norm(f):
                    raise ResonantSolveError(
                        f"sigma = {sigma} resonant and f not orthogonal to the mode")
                phi = target

        finf = 0.5 * (f[0] + f[-1])
        xinf = 0.0
        fp = f
        if abs(finf) > 1e-9 * max(np.abs(f).max(), 1.0):
            # subtract the constant far-field particular solution
            xinf = -finf / (self.mu_far + sigma)
            fp = f + (self.w2 + sigma) * xinf
        if phi is not None:
            c = phi @ fp
            if abs(c) > 1e-6 * max(np.linalg.norm(fp), 1e-300):
                raise ResonantSolveError(
                    "right side has a large component along the deflated mode")
            fp = fp - c * phi

        ab = np.zeros((3, n))
        ab[0, 1:] = self.offdiag
        ab[1] = self.diag - sigma
        ab[2, :-1] = self.offdiag
        x = solve_banded((1, 1), ab, fp)
        # one refinement pass handles the near-singular shifts
        for _ in range(2):
            res = fp - self.apply(x, sigma)
            x = x + solve_banded((1, 1), ab, res)
        if phi is not None:
            x = x - (phi @ x) * phi

        resid = fp - self.apply(x, sigma)
        if phi is not None:
            resid = resid - (phi @ resid) * phi
        scale = max(np.linalg.norm(fp), 1e-300)
        if np.linalg.norm(resid[2:-2]) > max(rtol * scale, 1e-12):
            raise LinearSolveError(
                f"shifted solve residual {np.linalg.norm(resid[2:-2]):.2e} above tolerance")
        return x + xinf

    # -- spectrum ------------------------------------------------------------
    def eigenvalues_near(self, sigma: float, width: float) -> np.ndarray:
        """Discrete eigenvalues in [sigma - width, sigma + width]."""
        return eigh_tridiagonal(self.diag, self.offdiag, eigvals_only=True,
                                select="v", select_range=(sigma - width, sigma + width))

    def check_shift_resonance(self, sigma: float, tol: float = 1e-6) -> None:
        near = self.eigenvalues_near(sigma, tol)
        if len(near):
            warnings.warn(
                f"shift {sigma:.6g} within {tol:g} of a discrete eigenvalue; refine grid",
                RuntimeWarning)


def assemble_L0(b: BilayerData) -> SpectralData:
    """Discretize L0 about the computed profile."""
    return SpectralData(b)


def ground_state(op: SpectralData):
    """Largest eigenpair (lambda0, psi0) with unit L2 norm and psi0(0) > 0."""
    return op.lam0, op.psi0


def lambda0_refined(well, grid: RadialGrid, levels: int = 2) -> float:
    """Richardson-extrapolated lambda0 over grids n, 2n-1, ... (h, h/2, ...)."""
    vals = []
    g = grid
    for _ in range(levels + 1):
        op = SpectralData(compute_u0(well, g))
        vals.append(op.lam0)
        g = g.refined()
    # eliminate h^2 then h^4 terms
    seq = np.asarray(vals)
    for k in range(1, levels + 1):
        seq = (4 ** k * seq[1:] - seq[:-1]) / (4 ** k - 1)
    return float(seq[0])
