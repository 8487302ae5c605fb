import numpy as np
import pytest

from fchpearl import (coefficient_table, with_corrections, flat_pearl,
                      circular_pearl, circular_radii,
                      supercriticality_bound, pearl_amplitude, pearl_period,
                      default_box, NoPearlingError)
from fchpearl.pearls import ParameterBoxError

EPS = 0.1


@pytest.fixture(scope="module")
def setup(well, bilayer_fast, op_fast):
    # circular-regime parameters: gamma = gamma1, eta_d = 2 gives alpha0 > 0
    table = coefficient_table(well, gamma="circular", eta1=2.0, eta_d=2.0,
                              bilayer=bilayer_fast, op=op_fast)
    b = with_corrections(bilayer_fast, op_fast, table.gamma, table.eta_d)
    return b, op_fast, table


def test_kappa_zero_gives_unmodulated_bilayer(setup):
    b, op, table = setup
    sol = flat_pearl(b, op, table, EPS, 0.0)
    assert sol.amplitude == 0.0
    r = np.linspace(-5, 5, 101)
    line0 = sol.evaluate(0.0, r)
    line1 = sol.evaluate(0.37 * sol.period, r)
    assert np.abs(line0 - line1).max() == 0.0


def test_period_leading_order_scaling(setup):
    _, _, table = setup
    # T_p / eps -> 2 pi / sqrt(lambda0) as eps -> 0
    for eps in (1e-3, 1e-5):
        assert pearl_period(table, eps) / eps == pytest.approx(
            2 * np.pi / np.sqrt(table.lambda0), rel=2e-2 if eps > 1e-4 else 2e-3)


def test_amplitude_scaling_constant(setup):
    _, _, table = setup
    c = 2.0 / table.alpha0 ** 0.25
    for eps, kap in ((0.05, 0.1), (0.1, 0.02), (0.2, 0.15)):
        assert pearl_amplitude(table, eps, kap) / np.sqrt(eps * abs(kap)) == \
            pytest.approx(c, rel=1e-12)


def test_flat_pearl_values_compose(setup):
    b, op, table = setup
    eps0, kappa0 = default_box(table)
    kap = kappa0 / 2
    sol = flat_pearl(b, op, table, EPS, kap)
    assert sol.amplitude == pytest.approx(
        2 * np.sqrt(EPS * kap) / table.alpha0 ** 0.25, rel=1e-13)
    assert sol.period == pytest.approx(
        2 * np.pi * EPS / np.sqrt(table.lambda0)
        * (1 - np.sqrt(table.alpha0 * EPS)), rel=1e-13)
    # peak-to-trough modulation at r = 0 equals 2 A_p psi0(0)
    mid = sol.evaluate(0.0, 0.0) - sol.evaluate(sol.period / 2, 0.0)
    psi0_0 = op.psi0[op.grid.n // 2]
    assert mid == pytest.approx(2 * sol.amplitude * psi0_0, rel=1e-12)


def test_flat_pearl_far_field(setup):
    b, op, table = setup
    sol = flat_pearl(b, op, table, EPS, 0.05)
    expect = -1.0 + EPS * table.gamma / b.well.mu_minus ** 2
    assert sol.evaluate(0.0, 1e9) == pytest.approx(expect, abs=1e-6)


def test_no_pearling_raises(setup, well, bilayer_fast, op_fast):
    table_neg = coefficient_table(well, gamma=-1.0, eta1=2.0, eta_d=0.0,
                                  bilayer=bilayer_fast, op=op_fast)
    assert table_neg.alpha0 < 0
    with pytest.raises(NoPearlingError):
        flat_pearl(bilayer_fast, op_fast, table_neg, EPS, 0.05)


def test_parameter_box_enforced(setup):
    b, op, table = setup
    eps0, kappa0 = default_box(table)
    with pytest.raises(ParameterBoxError):
        flat_pearl(b, op, table, EPS, 2 * kappa0, eps0=eps0, kappa0=kappa0)
    with pytest.raises(ParameterBoxError):
        flat_pearl(b, op, table, 2 * eps0, 0.0, eps0=eps0, kappa0=kappa0)


def test_circular_radii_gaps_exact(setup):
    _, _, table = setup
    radii = circular_radii(table, EPS, 0.02, R_minus=1.0, max_count=10)
    gap = EPS / np.sqrt(table.lambda0) * (1 - np.sqrt(table.alpha0 * EPS))
    ns, Rs = zip(*radii)
    assert all(np.diff(ns) == 1)
    assert np.allclose(np.diff(Rs), gap, rtol=0, atol=1e-14)
    assert all(R >= 1.0 for R in Rs)
    # smallest admissible n cross-checked by inverting the radius formula
    assert ns[0] == int(np.ceil(1.0 / gap))


def test_bead_size_equals_flat_period(setup):
    _, _, table = setup
    radii = circular_radii(table, EPS, 0.02, R_minus=1.0, max_count=3)
    for n, R in radii:
        assert 2 * np.pi * R / n == pytest.approx(pearl_period(table, EPS), rel=1e-12)


def test_circular_pearl_symmetries(setup):
    b, op, table = setup
    sol = circular_pearl(b, op, table, 40, EPS, 0.05)
    th = np.linspace(0, 2 * np.pi, 17)
    r = np.linspace(-3, 3, 11)
    vals = sol.evaluate(th[:, None], r[None, :])
    shifted = sol.evaluate(th[:, None] + 2 * np.pi / 40, r[None, :])
    assert np.abs(vals - shifted).max() <= 1e-12
    mirrored = sol.evaluate(-th[:, None], r[None, :])
    assert np.abs(vals - mirrored).max() == 0.0
    assert sol.evaluate(0.3, 50.0) == pytest.approx(sol.far_field, abs=1e-8)


def test_supercriticality_margin(setup):
    _, _, table = setup
    eps0, kappa0 = default_box(table)
    ok, margin = supercriticality_bound(table, eps0, kappa0)
    assert ok and margin > 0
    # kappa0 = 0 passes with margin alpha0 / (2 |alpha2|)
    ok0, margin0 = supercriticality_bound(table, eps0, 0.0)
    assert ok0 and margin0 == pytest.approx(table.alpha0 / (2 * abs(table.alpha2)))
    # r1 radicand positive on the box corners
    for s in (+1, -1):
        assert table.alpha0 - 2 * table.alpha2 * np.sqrt(eps0) * s * kappa0 > 0


def test_alpha2_zero_guard(setup):
    _, _, table = setup
    import dataclasses
    t0 = dataclasses.replace(table, alpha2=0.0)
    ok, margin = supercriticality_bound(t0, 0.2, 123.0)
    assert ok and margin == np.inf


def test_amplitude_bounded_on_admissible_box(setup, well, bilayer_fast, op_fast):
    # sup over the kappa box of A_p / alpha0^{1/4} stays bounded as alpha0 -> 0+
    sups = []
    for eta_d in (1.6, 1.3, 1.2):   # alpha0(gamma="circular") decreasing to 0+
        t = coefficient_table(well, gamma="circular", eta1=2.0, eta_d=eta_d,
                              bilayer=bilayer_fast, op=op_fast)
        assert t.alpha0 > 0
        eps0, kappa0 = default_box(t)
        kaps = np.linspace(-kappa0, kappa0, 21)
        sups.append(max(pearl_amplitude(t, eps0, k) / t.alpha0 ** 0.25
                        for k in kaps))
    assert max(sups) < 10.0
