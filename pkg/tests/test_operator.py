import numpy as np
import pytest
from scipy.interpolate import CubicSpline
from scipy.linalg import eigh_tridiagonal

from fchpearl import (RadialGrid, compute_u0, assemble_L0, ground_state,
                      lambda0_refined, ResonantSolveError)

from oracles import lambda0_shooting


def test_operator_is_symmetric_tridiagonal(op_fast):
    # symmetric by construction: single off-diagonal array serves both sides
    assert op_fast.offdiag.shape == (op_fast.grid.n - 1,)
    assert np.all(op_fast.offdiag == op_fast.offdiag[0])


def test_constant_profile_gives_free_operator(well):
    # u = -1 frozen: operator is Laplacian - mu_-; top eigenvalue ~ -mu_- - (pi/2L)^2
    grid = RadialGrid(10.0, 1025)
    b = compute_u0(well, RadialGrid.default(well, n=1025))
    h = grid.h
    diag = -2.0 / h ** 2 - np.full(grid.n, well.mu_minus)
    off = np.full(grid.n - 1, 1.0 / h ** 2)
    ev = eigh_tridiagonal(diag, off, eigvals_only=True,
                          select="i", select_range=(grid.n - 1, grid.n - 1))
    expect = -well.mu_minus - (np.pi / (2 * grid.half_width + 2 * h)) ** 2
    assert ev[0] == pytest.approx(expect, abs=1e-4)


def test_kernel_action_on_du0(bilayer_default, op_default):
    b, op = bilayer_default, op_default
    r = b.grid.r
    nrm = np.sqrt(np.trapezoid(b.du0 ** 2, r))
    res = np.sqrt(np.trapezoid(op.apply(b.du0) ** 2, r)) / nrm
    assert res <= 1e-6


def test_ground_state_normalization_and_sign(op_fast):
    lam0, psi0 = ground_state(op_fast)
    assert lam0 > 0
    r = op_fast.grid.r
    assert np.trapezoid(psi0 ** 2, r) == pytest.approx(1.0, abs=1e-12)
    assert psi0[op_fast.grid.n // 2] > 0
    assert np.trapezoid(psi0 * op_fast.psi1, r) == pytest.approx(0.0, abs=1e-10)
    assert np.sqrt(np.trapezoid((op_fast.apply(psi0) - lam0 * psi0) ** 2, r)) <= 1e-8


def test_lambda0_matches_shooting_oracle(well, bilayer_default):
    b = bilayer_default
    u0_sp = CubicSpline(b.grid.r, b.u0)
    lam_shoot = lambda0_shooting(u0_sp, b.grid.half_width, well.mu_minus, well.m)
    lam_rich = lambda0_refined(well, RadialGrid.default(well, n=8193), levels=2)
    assert abs(lam_rich - lam_shoot) <= 1e-8


def test_lambda0_second_order_convergence(well):
    lams = []
    for n in (4097, 8193, 16385):
        op = assemble_L0(compute_u0(well, RadialGrid.default(well, n=n)))
        lams.append(op.lam0)
    ratio = (lams[0] - lams[1]) / (lams[1] - lams[2])
    assert 3.5 < ratio < 4.5


def test_spectral_gap_and_node_count(op_fast):
    # second eigenvalue ~ 0 (kernel), third strictly negative
    assert abs(op_fast.lam_kernel) <= 1e-5
    below = op_fast.eigenvalues_near(-1.0, 0.9)
    assert len(below) == 0 or below.max() < -0.1
    # Sturm-Liouville node counts: psi0 nodeless, psi1 exactly one sign change
    interior0 = op_fast.psi0[np.abs(op_fast.psi0) > 1e-8 * np.abs(op_fast.psi0).max()]
    assert np.all(interior0 > 0)
    s = np.sign(op_fast.psi1)
    changes = np.count_nonzero(np.diff(s[s != 0]) != 0)
    assert changes == 1


def test_resonant_solve_raises_on_kernel_rhs(op_fast):
    with pytest.raises(ResonantSolveError):
        op_fast.solve_shifted(0.0, op_fast.phik.copy())


def test_eigenvector_solve_at_four_lambda0(op_fast):
    lam0, psi0 = ground_state(op_fast)
    x = op_fast.solve_shifted(4 * lam0, psi0)
    assert np.abs(x + psi0 / (3 * lam0)).max() <= 1e-9


def test_round_trip_generic_shift(op_fast):
    rng = np.random.default_rng(11)
    f = rng.standard_normal(op_fast.grid.n)
    f = 0.5 * (f + f[::-1])
    f *= np.exp(-np.abs(op_fast.grid.r))     # decaying even right side
    x = op_fast.solve_shifted(-1.0, f)
    res = op_fast.apply(x, -1.0) - f
    assert np.linalg.norm(res) <= 1e-8 * np.linalg.norm(f)


def test_ltilde_self_adjoint(bilayer_fast, op_fast):
    from fchpearl.coefficients import _ltilde
    rng = np.random.default_rng(3)
    r = op_fast.grid.r
    n = op_fast.grid.n
    env = np.exp(-np.abs(r))
    f = rng.standard_normal(n)
    g = rng.standard_normal(n)
    f = 0.5 * (f + f[::-1]) * env
    g = 0.5 * (g + g[::-1]) * env
    f /= np.sqrt(np.trapezoid(f ** 2, r))
    g /= np.sqrt(np.trapezoid(g ** 2, r))
    lhs = np.trapezoid(f * _ltilde(op_fast, g), r)
    rhs = np.trapezoid(_ltilde(op_fast, f) * g, r)
    assert abs(lhs - rhs) <= 1e-9


def test_ltilde_eigenvector_closed_form(op_fast):
    # (L0-4lam0)^-2 contributes -lam0/(9 lam0^2) = -1/(9 lam0):
    # <psi0, Ltilde psi0> = (1/3 lam0^2)(1/2 + 2 - 2/3 - 1/(9 lam0))
    from fchpearl.coefficients import _ltilde
    lam0, psi0 = ground_state(op_fast)
    lhs = np.trapezoid(psi0 * _ltilde(op_fast, psi0), op_fast.grid.r)
    rhs = (0.5 + 2.0 - 2.0 / 3.0 - 1.0 / (9.0 * lam0)) / (3.0 * lam0 ** 2)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_not_a_bilayer_guard(well):
    # guard is structural; the default pipeline always has lam0 > 0
    op = assemble_L0(compute_u0(well, RadialGrid.default(well, n=2049)))
    assert op.lam0 > 0.5
