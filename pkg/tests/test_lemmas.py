from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from annuli import Annulus, CurveModel, RadiusGrid, parse_function
from annuli.errors import DomainError
from annuli.lemmas import (
    BOREL_SLACK,
    admissibility_index,
    borel_check,
    fit_envelope,
    log_plus,
    logderiv_check,
    logderiv_curve_check,
    parse_phi,
    tail_window,
)


def geo(R0, n=80, margin=1e-2):
    return RadiusGrid.geometric(Annulus(R0), n, 1.01, margin)


# ---------------------------------------------------------------- helpers


def test_log_plus():
    assert list(log_plus([0.0, 0.5, 1.0, math.e])) == [0.0, 0.0, 0.0, 1.0]


def test_tail_window():
    assert list(tail_window(5)) == [2, 3, 4]


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31))
def test_envelope_dominates_target(seed):
    rng = np.random.default_rng(seed)
    n = 40
    F = np.column_stack((rng.uniform(0, 3, n), np.ones(n)))
    target = rng.normal(size=n)
    rows = tail_window(n)
    c = fit_envelope(target, F, rows)
    assert c[0] >= 0 and c[1] >= 0
    assert np.all((F @ c)[rows] >= target[rows])


def test_envelope_free_column_may_be_negative():
    F = np.column_stack((np.linspace(0, 1, 10), np.ones(10)))
    c = fit_envelope(np.full(10, -5.0), F, np.arange(10), free=(1,))
    assert c[1] == pytest.approx(-5.0) and c[0] == 0.0


# ---------------------------------------------------------------- growth lemma


@pytest.mark.parametrize("phi", ["const", "const:3", "recip", "exp_recip", "staircase",
                                 "staircase:1.3,2,0.01;1.7,4,0.02"])
@pytest.mark.parametrize("R0", [2.0, 3.0])
def test_borel_battery(phi, R0):
    rep = borel_check(parse_phi(phi, R0), 1.0, geo(R0, 400))
    assert math.isfinite(rep.delta_weight_value)
    assert rep.delta_weight_value <= BOREL_SLACK * rep.bound
    assert rep.consistent


def test_borel_constant_has_empty_exceptional_set():
    rep = borel_check(parse_phi("const:2", 3.0), 0.5, geo(3.0))
    assert not rep.exceptional and rep.delta_weight_value == 0.0
    assert rep.bound == pytest.approx(2 ** -0.5 / 0.5)
    assert np.allclose(rep.lhs, 0.0, atol=1e-10)


def test_borel_accepts_samples():
    grid = geo(2.0, 50)
    r = grid.as_array()
    rep = borel_check(1.0 / (2.0 - r), 1.0, grid)
    assert rep.consistent


def test_borel_rejections():
    grid = geo(2.0, 20)
    with pytest.raises(DomainError):
        borel_check(lambda r: 3.0 - np.asarray(r), 1.0, grid)
    with pytest.raises(DomainError):
        borel_check(parse_phi("recip", 2.0), 0.0, grid)
    with pytest.raises(DomainError):
        borel_check(np.ones(3), 1.0, grid)
    for bad in ("const:-1", "sine", "staircase:1.5,2"):
        with pytest.raises(DomainError):
            parse_phi(bad, 2.0)


@settings(max_examples=25)
@given(st.floats(1.1, 2.8), st.floats(0.0, 50.0), st.floats(0.01, 0.2), st.floats(0.5, 2.0))
def test_borel_staircase_property(center, height, width, lam):
    phi = parse_phi(f"staircase:{center},{height},{width}", 3.0)
    rep = borel_check(phi, lam, geo(3.0, 400))
    assert rep.delta_weight_value <= BOREL_SLACK * rep.bound


# ---------------------------------------------------------------- log-derivative lemmas


def test_logderiv_exp_is_trivial():
    rep = logderiv_check(parse_function("exp(z)", Annulus(3.0)), 1.0, geo(3.0, 40))
    assert np.all(rep.lhs == 0.0)
    assert rep.consistent and rep.delta_weight_value == 0.0


def test_logderiv_identity_closed_form():
    rep = logderiv_check(parse_function("z", Annulus(3.0)), 1.0, geo(3.0, 40))
    assert np.allclose(rep.lhs, np.log(rep.radii), atol=1e-13)
    assert rep.consistent


@pytest.mark.parametrize("spec", ["exp(1/(R0-z)^2)", "rational([(1.5,2)];[(-0.6,1)];1;0)",
                                  "mul(exp(2/(R0-z));rational([(1.5,1)];[];1;0))", "2/(R0-z)^3"])
def test_logderiv_fitted_constants(spec):
    rep = logderiv_check(parse_function(spec, Annulus(3.0)), 1.0, geo(3.0, 60))
    c = rep.fitted_constants
    assert c["C1"] == 5.0 and 0 <= c["C2"] <= 100 and c["C0"] >= 0
    assert math.isfinite(rep.delta_weight_value) and rep.consistent
    assert rep.details["weak_subset"]
    assert rep.columns() == ["r", "lhs", "rhs", "in_E", "warnings"]


def test_logderiv_rejects_non_multiplicative_and_bad_epsilon():
    with pytest.raises(DomainError):
        logderiv_check(parse_function("0", Annulus(3.0)), 1.0, geo(3.0, 10))
    with pytest.raises(DomainError):
        logderiv_check(parse_function("z", Annulus(3.0)), 0.0, geo(3.0, 10))


def test_logderiv_curve():
    A = Annulus(3.0)
    lin = logderiv_curve_check(CurveModel("torus", parse_function("z", A), (1, 1j)), geo(3.0, 40))
    assert np.all(lin.lhs == 0.0) and lin.consistent
    bp = logderiv_curve_check(CurveModel("torus", parse_function("2/(R0-z)", A), (1, 0.5 + 1j)), geo(3.0, 40))
    assert bp.consistent and bp.fitted_constants["C2"] <= 100
    with pytest.raises(DomainError):
        logderiv_curve_check(CurveModel("c_star", parse_function("exp(z)", A)), geo(3.0, 10))


# ---------------------------------------------------------------- admissibility


def test_admissibility_index():
    A = Annulus(3.0)
    grid = geo(3.0, 60, 1e-4)
    fast = admissibility_index(parse_function("exp(1/(R0-z)^2)", A), grid)
    assert fast.tail_increasing and fast.index > 1
    flat = admissibility_index(parse_function("exp(1/(R0-z))", A), grid)
    assert np.all(np.abs(flat.T) < 1e-9) and not flat.tail_increasing
    rat = admissibility_index(parse_function("rational([(1.5,2)];[(-0.6,1)];1;0)", A), grid)
    assert not rat.tail_increasing
    assert set(fast.summary()) == {"index", "tail_increasing"}
