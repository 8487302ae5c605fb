import numpy as np
import pytest

from fchpearl import (WellSpec, RadialGrid, compute_u0, compute_v0, compute_u1,
                      with_corrections, eval_well, NoHomoclinicError,
                      DomainTooSmallError, turning_point)

from oracles import turning_point_bisection, second_derivative_fd4


def test_turning_point_matches_bisection_oracle(well):
    ustar = turning_point(well)
    assert ustar == pytest.approx(turning_point_bisection(1.5), abs=1e-11)
    # for m = 3/2 the turning point is exactly 2/3
    assert ustar == pytest.approx(2.0 / 3.0, abs=1e-13)


def test_u0_center_value_and_evenness(bilayer_fast):
    b = bilayer_fast
    mid = b.grid.n // 2
    assert b.u0[mid] == pytest.approx(b.ustar, abs=1e-15)
    assert np.abs(b.u0 - b.u0[::-1]).max() <= 1e-10
    assert np.abs(b.du0 + b.du0[::-1]).max() <= 1e-10


def test_hamiltonian_identity(bilayer_fast):
    b = bilayer_fast
    ham = 0.5 * b.du0 ** 2 - eval_well(b.well, b.u0, 0)
    assert np.abs(ham[1:-1]).max() <= 1e-8


def test_ode_residual_fd4(bilayer_fast):
    b = bilayer_fast
    d2 = second_derivative_fd4(b.u0, b.grid.h)
    res = d2[2:-2] - eval_well(b.well, b.u0, 1)[2:-2]
    assert np.abs(res).max() <= 1e-6


def test_exponential_tail_slope(bilayer_fast):
    b = bilayer_fast
    r = b.grid.r
    n = b.grid.n
    tail = slice(int(0.75 * n), n - 1)
    slope = np.polyfit(r[tail], np.log(np.abs(b.u0[tail] + 1.0)), 1)[0]
    target = -np.sqrt(b.well.mu_minus)
    assert abs(slope - target) / abs(target) < 0.02


def test_equal_depth_well_is_front_not_pulse():
    with pytest.raises(NoHomoclinicError):
        compute_u0(WellSpec(m=1.0), RadialGrid(12.0, 1025))


def test_domain_too_small():
    well = WellSpec()
    with pytest.raises(DomainTooSmallError):
        compute_u0(well, RadialGrid(2.0, 401))


def test_v0_zero_for_zero_parameters(bilayer_fast, op_fast):
    v0 = compute_v0(bilayer_fast, op_fast, 0.0, 0.0)
    assert np.abs(v0).max() == 0.0


def test_v0_round_trip_constant(bilayer_fast, op_fast):
    v0 = compute_v0(bilayer_fast, op_fast, 1.0, 0.0)
    res = op_fast.apply(v0) - 1.0
    assert np.abs(res[2:-2]).max() <= 1e-8
    # even
    assert np.abs(v0 - v0[::-1]).max() <= 1e-10


def test_v0_linearity(bilayer_fast, op_fast):
    b, op = bilayer_fast, op_fast
    v_a = compute_v0(b, op, 0.7, 0.0)
    v_b = compute_v0(b, op, 0.0, 1.3)
    v_ab = compute_v0(b, op, 0.7, 1.3)
    assert np.abs(v_ab - (v_a + v_b)).max() <= 1e-10 * max(1, np.abs(v_ab).max())


def test_v0_closed_form_eta_part(bilayer_fast, op_fast):
    # L0^{-1} W'(u0) = r u0' / 2 (bounded even solution), an exact identity
    b, op = bilayer_fast, op_fast
    v0 = compute_v0(b, op, 0.0, 1.0)   # = -L0^{-1} W'(u0)
    oracle = -b.grid.r * b.du0 / 2.0
    assert np.abs(v0 - oracle).max() <= 1e-5


def test_u1_zero_for_zero_parameters(bilayer_fast, op_fast):
    u1 = compute_u1(bilayer_fast, op_fast, np.zeros(bilayer_fast.grid.n))
    assert np.abs(u1).max() == 0.0


def test_u1_solves_L0u1_equals_v0(bilayer_fast, op_fast):
    b, op = bilayer_fast, op_fast
    v0 = compute_v0(b, op, 1.0, 0.5)
    u1 = compute_u1(b, op, v0)
    res = op.apply(u1) - v0
    nrm = np.sqrt(np.trapezoid(res[2:-2] ** 2, b.grid.r[2:-2]))
    assert nrm <= 1e-8
    assert np.abs(u1 - u1[::-1]).max() <= 1e-10
    # integral identity: the L0 u1 and v0 pairings against psi0^2 agree
    w3 = eval_well(b.well, b.u0, 3)
    w2 = eval_well(b.well, b.u0, 2)
    lhs = np.trapezoid((w3 * op.apply(u1) - 0.5 * w2) * op.psi0 ** 2, b.grid.r)
    rhs = np.trapezoid((w3 * v0 - 0.5 * w2) * op.psi0 ** 2, b.grid.r)
    assert abs(lhs - rhs) <= 1e-8


def test_u1_refined_grid_oracle(well):
    # dense direct solve on a 2x refined grid, compared at common nodes
    g1 = RadialGrid.default(well, n=8193)
    b1 = compute_u0(well, g1)
    from fchpearl import assemble_L0
    op1 = assemble_L0(b1)
    u1_coarse = compute_u1(b1, op1, compute_v0(b1, op1, 1.0, 0.0))

    g2 = g1.refined()
    b2 = compute_u0(well, g2)
    op2 = assemble_L0(b2)
    u1_fine = compute_u1(b2, op2, compute_v0(b2, op2, 1.0, 0.0))

    diff = np.abs(u1_coarse - u1_fine[::2]).max()
    assert diff <= 1e-5          # h^2 convergence (measured ~5e-6 at this n)
    # and the far field hits gamma/mu_-^2
    assert u1_coarse[-1] == pytest.approx(1.0 / well.mu_minus ** 2, abs=1e-8)


def test_with_corrections_attaches(bilayer_fast, op_fast):
    b = with_corrections(bilayer_fast, op_fast, 1.0, 0.0)
    assert b.v0 is not None and b.u1 is not None
    assert b.gamma == 1.0 and b.eta_d == 0.0


def test_grid_invariants():
    with pytest.raises(ValueError):
        RadialGrid(10.0, 101)       # too few points
    g = RadialGrid(10.0, 2049)
    assert g.h == pytest.approx(20.0 / 2048)
    assert g.refined().n == 4097
    assert np.allclose(g.refined().r[::2], g.r)
