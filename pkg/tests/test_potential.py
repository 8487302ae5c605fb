import numpy as np
import pytest

from fchpearl import WellSpec, eval_well, validate_well, WellError

from oracles import well_antiderivative, well_derivative


def test_default_well_invariants():
    report = validate_well(WellSpec())
    assert report.passed, [c.name for c in report.failures()]


def test_wprime_vanishes_at_minus_one():
    assert eval_well(WellSpec(m=1.5), -1.0, 1) == 0.0


def test_mu0_negative():
    assert eval_well(WellSpec(m=1.5), 0.0, 2) < 0


def test_matches_horner_antiderivative_oracle():
    spec = WellSpec(m=1.5)
    for u in (0.7, -0.3, 1.2, -0.999999):
        assert eval_well(spec, u, 0) == pytest.approx(
            well_antiderivative(u, 1.5), abs=1e-14)
    for order in (1, 2, 3, 4):
        got = eval_well(spec, 0.7, order)
        assert got == pytest.approx(well_derivative(0.7, 1.5, order), abs=1e-13)


def test_equal_depth_well_fails_wm_check():
    report = validate_well(WellSpec(m=1.0))
    failed = [c.name for c in report.failures()]
    assert "W(m) < 0" in failed


def test_user_polynomial_bad_curvature_fails_mu0():
    # W = (u+1)^2 (u^2 + 1/2): convex at u = 0, so mu_0 = W''(0) > 0
    coeffs = (0.5, 1.0, 1.5, 2.0, 1.0)
    report = validate_well(WellSpec(family="poly", m=1.0, coeffs=coeffs))
    assert not report.passed
    assert "mu_0 < 0" in [c.name for c in report.failures()]


def test_eval_well_rejects_bad_order():
    with pytest.raises(ValueError):
        eval_well(WellSpec(), 0.1, 5)
    with pytest.raises(ValueError):
        eval_well(WellSpec(), 0.1, -1)


def test_well_spec_validation():
    with pytest.raises(WellError):
        WellSpec(m=-1.0)
    with pytest.raises(WellError):
        WellSpec(scale=0.0)
    with pytest.raises(WellError):
        WellSpec(family="poly")  # missing coeffs
    with pytest.raises(WellError):
        WellSpec(family="mystery")


def test_antiderivative_pins_w_at_minus_one():
    # integration constant fixed by construction, to machine precision
    for m in (1.2, 1.5, 2.0, 3.0):
        assert abs(eval_well(WellSpec(m=m), -1.0, 0)) < 1e-16


def test_derivative_consistency_fd():
    # centered differences of order k match order k+1 to O(h^2)
    spec = WellSpec(m=1.5)
    h = 1e-5
    us = np.linspace(-0.9, 1.4, 11)
    for k in range(4):
        fd = (eval_well(spec, us + h, k) - eval_well(spec, us - h, k)) / (2 * h)
        assert np.abs(fd - eval_well(spec, us, k + 1)).max() < 1e-8


def test_factored_form_is_cancellation_free_near_minus_one():
    spec = WellSpec(m=1.5)
    w = 1e-10
    val = eval_well(spec, -1.0 + w, 0)
    expect = 0.5 * spec.mu_minus * w ** 2   # leading term of the double root
    assert val == pytest.approx(expect, rel=1e-5)


def test_scale_scales_everything():
    a = eval_well(WellSpec(m=1.5, scale=1.0), 0.4, 0)
    b = eval_well(WellSpec(m=1.5, scale=2.5), 0.4, 0)
    assert b == pytest.approx(2.5 * a, rel=1e-14)
