"""Pseudo-spectral simulation of the FCH H^{-1} gradient flow on a periodic box.

    u_t = Delta dF/du,
    dF/du = (eps^2 Delta - W''(u) + eps eta1)(eps^2 Delta u - W'(u))
            + eps eta_d W'(u),          eta_d = eta1 - eta2.

The energy integrates the gradient term with eta1/2 so that dF/du above is
exactly its variational derivative (the operator defines the flow, so the
energy must be its antiderivative or the dissipation and gradient checks
fail).  |grad u|^2 is accumulated spectrally via Parseval so the Nyquist
modes stay consistent with the spectral Laplacian.

Time stepping is first-order IMEX in the equivalent one-line form

    u^+ = u + dt * (-|k|^2) F[dF/du(u)] / (1 + dt g(k)),
    g(k) = eps^4 |k|^6 + A2 eps^2 |k|^4 + A0 |k|^2,

which treats eps^4 Delta^3 plus fourth- and second-order stabilizers
implicitly (A2 >= 2 max|W''| caps the explicitly treated eps^2 Delta(W'' .)
stiffness; the |k|^2-only stabilizer is not sufficient in practice).  The
zero mode is untouched, so the discrete mean is conserved exactly.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .potential import WellSpec, eval_well
from .profile import BilayerData


class BlowUpError(RuntimeError):
    """Field became non-finite during stepping."""


class GeometryError(ValueError):
    """Initial geometry does not fit the box."""


class NoInterfaceError(ValueError):
    """Field is too close to constant to carry an interface."""


# ---------------------------------------------------------------------------
# field and config
# ---------------------------------------------------------------------------

def _is_pow2(n):
    return n >= 2 and (n & (n - 1)) == 0


@dataclass
class Field2D:
    """Real field on a periodic rectangle; values shape (nx, ny), x tangential."""

    values: np.ndarray
    Lx: float
    Ly: float

    def __post_init__(self):
        nx, ny = self.values.shape
        if not (_is_pow2(nx) and _is_pow2(ny)):
            raise ValueError(f"grid sizes must be powers of two, got {nx}x{ny}")

    @property
    def nx(self):
        return self.values.shape[0]

    @property
    def ny(self):
        return self.values.shape[1]

    @property
    def x(self):
        return np.arange(self.nx) * self.Lx / self.nx

    @property
    def y(self):
        return np.arange(self.ny) * self.Ly / self.ny

    @property
    def cell_area(self):
        return (self.Lx / self.nx) * (self.Ly / self.ny)

    def mean(self) -> float:
        return float(self.values.mean())

    def mass(self) -> float:
        return self.mean() * self.Lx * self.Ly


@dataclass(frozen=True)
class SimConfig:
    epsilon: float = 0.1
    eta1: float = 2.0
    eta2: float = 2.0
    dt: float = 2e-3
    t_end: float = 10.0
    nx: int = 256
    ny: int = 128
    Lx: float = 6.4
    Ly: float = 3.2
    stabilization: Optional[float] = None   # A2; default 2 max|W''|
    stabilization0: Optional[float] = None  # A0; default 2 (max|W''|^2 + 1)
    init: str = "flat_bilayer"              # flat_bilayer | circular_bilayer | custom
    R0: float = 1.0
    include_u1: bool = True
    gamma: float = 0.0                      # gamma used to build the u1 correction
    perturb_amplitude: float = 0.0
    perturb_mode: Optional[int] = None      # None => seeded band of modes
    seed: int = 0
    mirror_symmetric: bool = False          # project out odd (meander) modes each step
    checkpoint_every: Optional[float] = None
    energy_tol: float = 1e-8                # adaptive halving threshold per step

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not 0 < self.epsilon <= 0.5:
            raise ValueError("epsilon must lie in (0, 0.5]")
        h = max(self.Lx / self.nx, self.Ly / self.ny)
        if h > self.epsilon / 4 + 1e-12:
            raise ValueError(
                f"grid spacing {h:.4g} does not resolve the interface (need <= eps/4)")

    @property
    def eta_d(self) -> float:
        return self.eta1 - self.eta2


@dataclass
class SimResult:
    t: np.ndarray
    mass: np.ndarray
    energy: np.ndarray
    mode: np.ndarray
    amplitude: np.ndarray
    final: Field2D
    dt_final: float


# ---------------------------------------------------------------------------
# simulator
# ---------------------------------------------------------------------------

class FCHSimulator:
    def __init__(self, well: WellSpec, cfg: SimConfig):
        self.well = well
        self.cfg = cfg
        kx = 2 * np.pi * np.fft.fftfreq(cfg.nx, cfg.Lx / cfg.nx)
        ky = 2 * np.pi * np.fft.rfftfreq(cfg.ny, cfg.Ly / cfg.ny)
        self.k2 = kx[:, None] ** 2 + ky[None, :] ** 2
        wy = np.full(len(ky), 2.0)
        wy[0] = 1.0
        if cfg.ny % 2 == 0:
            wy[-1] = 1.0
        self._parseval_w = wy[None, :]
        self._denom = None
        self._dt = cfg.dt

    # -- spectral helpers ---------------------------------------------------
    def _fft(self, u):
        return np.fft.rfft2(u)

    def _ifft(self, uh, shape):
        return np.fft.irfft2(uh, s=shape)

    def _lap(self, u):
        return self._ifft(-self.k2 * self._fft(u), u.shape)

    # -- FCH operators --------------------------------------------------------
    def variational_derivative(self, field: Field2D) -> Field2D:
        """dF/du evaluated pseudo-spectrally."""
        u = field.values
        eps, eta1, eta_d = self.cfg.epsilon, self.cfg.eta1, self.cfg.eta_d
        inner = eps ** 2 * self._lap(u) - eval_well(self.well, u, 1)
        out = (eps ** 2 * self._lap(inner) - eval_well(self.well, u, 2) * inner
               + eps * eta1 * inner + eps * eta_d * eval_well(self.well, u, 1))
        return Field2D(out, field.Lx, field.Ly)

    def energy(self, field: Field2D) -> float:
        u = field.values
        eps, eta1, eta2 = self.cfg.epsilon, self.cfg.eta1, self.cfg.eta2
        uh = self._fft(u)
        inner = eps ** 2 * self._ifft(-self.k2 * uh, u.shape) - eval_well(self.well, u, 1)
        dA = field.cell_area
        local = 0.5 * inner ** 2 - eps * eta2 * eval_well(self.well, u, 0)
        grad2 = float((self._parseval_w * self.k2 * np.abs(uh) ** 2).sum()) \
            / (field.nx * field.ny) * dA
        return float(local.sum() * dA) - eps * 0.5 * eta1 * eps ** 2 * grad2

    # -- stepping -------------------------------------------------------------
    def prepare(self, field: Field2D) -> None:
        """Freeze the stabilizers from the attained range of the initial data."""
        w2max = float(np.abs(eval_well(self.well, field.values, 2)).max())
        w2max = max(w2max, abs(self.well.mu_minus))
        a2 = self.cfg.stabilization if self.cfg.stabilization is not None else 2.0 * w2max
        a0 = (self.cfg.stabilization0 if self.cfg.stabilization0 is not None
              else 2.0 * (w2max ** 2 + 1.0))
        self.A2, self.A0 = a2, a0
        self._dt = self.cfg.dt
        self._build_denom()

    def _build_denom(self):
        eps = self.cfg.epsilon
        g = eps ** 4 * self.k2 ** 3 + self.A2 * eps ** 2 * self.k2 ** 2 + self.A0 * self.k2
        self._denom = 1.0 + self._dt * g

    def step(self, field: Field2D) -> Field2D:
        """One IMEX step; mean conserved exactly (zero mode untouched)."""
        if self._denom is None:
            self.prepare(field)
        u = field.values
        fdel = self.variational_derivative(field).values
        uh = self._fft(u) + self._dt * (-self.k2) * self._fft(fdel) / self._denom
        unew = self._ifft(uh, u.shape)
        if not np.isfinite(unew).all():
            raise BlowUpError("field became non-finite; reduce dt")
        if self.cfg.mirror_symmetric:
            unew = self._mirror_project(unew)
        return Field2D(unew, field.Lx, field.Ly)

    def _mirror_project(self, u):
        # average with the reflection about the stripe axis y = Ly/2: even data
        # is an exact invariant of the flow, this only removes roundoff drift
        # into the odd (meander) subspace.
        return 0.5 * (u + np.roll(u[:, ::-1], 1, axis=1))

    # -- initial data -----------------------------------------------------------
    def init_field(self, b: BilayerData, perturb: bool = True,
                   custom: Optional[np.ndarray] = None) -> Field2D:
        cfg = self.cfg
        x = np.arange(cfg.nx) * cfg.Lx / cfg.nx
        y = np.arange(cfg.ny) * cfg.Ly / cfg.ny
        eps = cfg.epsilon
        r_grid = b.grid.r

        u1 = b.u1 if (cfg.include_u1 and b.u1 is not None) else np.zeros_like(b.u0)

        if cfg.init == "custom":
            if custom is None:
                raise ValueError("init='custom' needs a custom array")
            u = np.array(custom, dtype=float)
        elif cfg.init == "flat_bilayer":
            rr = (y - cfg.Ly / 2) / eps
            if rr.max() > r_grid[-1] or rr.min() < r_grid[0]:
                raise GeometryError("transverse box wider than the profile grid")
            prof = np.interp(rr, r_grid, b.u0) + eps * np.interp(rr, r_grid, u1)
            u = np.tile(prof, (cfg.nx, 1))
        elif cfg.init == "circular_bilayer":
            cx, cy = cfg.Lx / 2, cfg.Ly / 2
            rho = np.hypot(x[:, None] - cx, y[None, :] - cy)
            if cfg.R0 + 4 * eps > min(cx, cy):
                raise GeometryError(f"R0 = {cfg.R0} too large for the box")
            rr = (rho - cfg.R0) / eps
            u = np.interp(rr, r_grid, b.u0)
        else:
            raise ValueError(f"unknown init kind {cfg.init!r}")

        if perturb and cfg.perturb_amplitude > 0:
            u = u + self._perturbation(b, x, y)
        return Field2D(u, cfg.Lx, cfg.Ly)

    def _perturbation(self, b, x, y):
        """Interface-mode perturbation: cos in the tangential coordinate times
        the ground-state transverse shape."""
        cfg = self.cfg
        eps = cfg.epsilon
        from .operator import assemble_L0
        op = assemble_L0(b)   # psi0 shape and lambda0 for the seeded mode
        amp = cfg.perturb_amplitude
        rng = np.random.default_rng(cfg.seed)
        if cfg.init == "circular_bilayer":
            cx, cy = cfg.Lx / 2, cfg.Ly / 2
            rho = np.hypot(x[:, None] - cx, y[None, :] - cy)
            theta = np.arctan2(y[None, :] - cy, x[:, None] - cx)
            shape = np.interp((rho - cfg.R0) / eps, b.grid.r, op.psi0, left=0, right=0)
            n0 = cfg.perturb_mode or max(2, int(round(
                cfg.R0 * np.sqrt(op.lam0) / eps)))
            if cfg.perturb_mode is not None:
                return amp * np.cos(n0 * theta) * shape
            out = np.zeros_like(rho)
            for n in range(max(2, n0 - 2), n0 + 3):
                out += amp * np.cos(n * theta + rng.uniform(0, 2 * np.pi)) * shape
            return out
        shape = np.interp((y - cfg.Ly / 2) / eps, b.grid.r, op.psi0,
                          left=0, right=0)[None, :]
        if cfg.perturb_mode is not None:
            return amp * np.cos(2 * np.pi * cfg.perturb_mode * x / cfg.Lx)[:, None] * shape
        m0 = cfg.Lx * np.sqrt(op.lam0) / (2 * np.pi * eps)
        out = np.zeros((cfg.nx, cfg.ny))
        for m in range(max(2, int(m0) - 4), int(m0) + 5):
            ph = rng.uniform(0, 2 * np.pi)
            out += amp * np.cos(2 * np.pi * m * x / cfg.Lx + ph)[:, None] * shape
        return out

    # -- orchestration ------------------------------------------------------------
    def run(self, field: Field2D, t_end: Optional[float] = None,
            record_every: Optional[float] = None) -> SimResult:
        """Advance to t_end with energy-monitored stepping.

        dt is halved (persistently) when the energy increases by more than
        cfg.energy_tol in one step after the startup transient.
        """
        cfg = self.cfg
        t_end = cfg.t_end if t_end is None else t_end
        record_every = record_every or max(t_end / 200.0, self._dt)
        if self._denom is None:
            self.prepare(field)

        t = 0.0
        next_rec = 0.0
        ts, masses, energies, modes, amps = [], [], [], [], []
        E_prev = self.energy(field)
        nstep = 0
        while t < t_end - 1e-12:
            if t >= next_rec - 1e-12:
                mode, amp = (np.nan, np.nan)
                try:
                    mode, amp, _ = extract_flat_metrics(field)
                except NoInterfaceError:
                    pass
                ts.append(t)
                masses.append(field.mean())
                energies.append(E_prev)
                modes.append(mode)
                amps.append(amp)
                next_rec += record_every
            new = self.step(field)
            E = self.energy(new)
            if nstep > 20 and E > E_prev + cfg.energy_tol and self._dt > 1e-6:
                self._dt *= 0.5
                self._build_denom()
                continue
            field, E_prev = new, E
            t += self._dt
            nstep += 1
        ts.append(t)
        masses.append(field.mean())
        energies.append(E_prev)
        try:
            mode, amp, _ = extract_flat_metrics(field)
        except NoInterfaceError:
            mode, amp = np.nan, np.nan
        modes.append(mode)
        amps.append(amp)
        return SimResult(t=np.array(ts), mass=np.array(masses),
                         energy=np.array(energies), mode=np.array(modes),
                         amplitude=np.array(amps), final=field, dt_final=self._dt)

    # -- 1D transverse relaxation ---------------------------------------------
    def relax_transverse(self, b: BilayerData, t_relax: float = 60.0,
                         mean_offset: float = 0.0):
        """Relax the y-only problem to a stationary stripe; returns
        (profile, gamma) with gamma read off as mean(dF/du)/eps (dF/du is
        spatially constant at a 1D equilibrium)."""
        cfg = self.cfg
        ny, Ly, eps = cfg.ny, cfg.Ly, cfg.epsilon
        ky = 2 * np.pi * np.fft.rfftfreq(ny, Ly / ny)
        k2 = ky ** 2
        y = np.arange(ny) * Ly / ny
        rr = (y - Ly / 2) / eps
        u1 = b.u1 if (cfg.include_u1 and b.u1 is not None) else np.zeros_like(b.u0)
        u = (np.interp(rr, b.grid.r, b.u0) + eps * np.interp(rr, b.grid.r, u1)
             + mean_offset)

        w2max = max(float(np.abs(eval_well(self.well, u, 2)).max()),
                    abs(self.well.mu_minus))
        a2, a0 = 2.0 * w2max, 2.0 * (w2max ** 2 + 1.0)
        dt = cfg.dt
        denom = 1.0 + dt * (eps ** 4 * k2 ** 3 + a2 * eps ** 2 * k2 ** 2 + a0 * k2)

        def fdelta(uv):
            lap = np.fft.irfft(-k2 * np.fft.rfft(uv), ny)
            inner = eps ** 2 * lap - eval_well(self.well, uv, 1)
            lap_in = np.fft.irfft(-k2 * np.fft.rfft(inner), ny)
            return (eps ** 2 * lap_in - eval_well(self.well, uv, 2) * inner
                    + eps * cfg.eta1 * inner + eps * cfg.eta_d * eval_well(self.well, uv, 1))

        nstep = int(t_relax / dt)
        for _ in range(nstep):
            u = np.fft.irfft(np.fft.rfft(u) + dt * (-k2) * np.fft.rfft(fdelta(u)) / denom, ny)
            if not np.isfinite(u).all():
                raise BlowUpError("1D transverse relaxation diverged")
        gamma = float(fdelta(u).mean() / eps)
        return u, gamma


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------

def extract_flat_metrics(field: Field2D, row: Optional[int] = None):
    """Dominant tangential mode along the interface midline.

    Returns (mode index m, amplitude, period = Lx/m).  The midline is the row
    with the largest tangential variation (falls back to the row of max u).
    """
    u = field.values
    if u.max() - u.min() < 1e-3:
        raise NoInterfaceError("field is constant to 1e-3")
    if row is None:
        spread = u.max(axis=0) - u.min(axis=0)
        row = int(np.argmax(spread))
        if spread[row] < 1e-12:
            row = int(np.argmax(u.mean(axis=0)))
    line = u[:, row]
    co = np.fft.rfft(line)
    nx = field.nx
    m = 1 + int(np.argmax(np.abs(co[1:nx // 2])))
    amp = 2.0 * np.abs(co[m]) / nx
    return m, float(amp), field.Lx / m


def extract_circular_metrics(field: Field2D, n_samples: int = 720):
    """Bead count and modulation amplitude along the interface circle.

    The circle radius maximizes the azimuthally averaged |grad u|; sampling is
    bilinear.  Returns (bead count n, amplitude, radius).
    """
    u = field.values
    if u.max() - u.min() < 1e-3:
        raise NoInterfaceError("field is constant to 1e-3")
    nx, ny = u.shape
    gx, gy = np.gradient(u, field.Lx / nx, field.Ly / ny)
    gmag = np.hypot(gx, gy)
    cx, cy = field.Lx / 2, field.Ly / 2
    x = field.x
    y = field.y
    rho = np.hypot(x[:, None] - cx, y[None, :] - cy)
    rmax = min(cx, cy) * 0.95
    bins = np.linspace(0.05 * rmax, rmax, 200)
    idx = np.digitize(rho.ravel(), bins)
    sums = np.bincount(idx, weights=gmag.ravel(), minlength=len(bins) + 1)
    counts = np.maximum(np.bincount(idx, minlength=len(bins) + 1), 1)
    prof = sums / counts
    R = bins[int(np.argmax(prof[1:len(bins)]))]

    theta = np.linspace(0, 2 * np.pi, n_samples, endpoint=False)
    xs = cx + R * np.cos(theta)
    ys = cy + R * np.sin(theta)
    vals = _bilinear(u, xs / (field.Lx / nx), ys / (field.Ly / ny))
    co = np.fft.rfft(vals)
    n = 1 + int(np.argmax(np.abs(co[1:n_samples // 2])))
    amp = 2.0 * np.abs(co[n]) / n_samples
    return n, float(amp), float(R)


def _bilinear(u, xf, yf):
    nx, ny = u.shape
    x0 = np.floor(xf).astype(int)
    y0 = np.floor(yf).astype(int)
    tx = xf - x0
    ty = yf - y0
    x0 %= nx
    y0 %= ny
    x1 = (x0 + 1) % nx
    y1 = (y0 + 1) % ny
    return ((1 - tx) * (1 - ty) * u[x0, y0] + tx * (1 - ty) * u[x1, y0]
            + (1 - tx) * ty * u[x0, y1] + tx * ty * u[x1, y1])
