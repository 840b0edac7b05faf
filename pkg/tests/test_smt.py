from __future__ import annotations

import math

import numpy as np
import pytest

from annuli import Annulus, CurveModel, RadiusGrid, jensen_weight, parse_function
from annuli.errors import DomainError
from annuli.lemmas import tail_window
from annuli.smt import double_zero_curve, residual_gap, smt_scan


@pytest.fixture(scope="module")
def exp_report():
    A = Annulus(10.0)
    grid = RadiusGrid.geometric(A, 60, 1.05, 0.05)
    return smt_scan(parse_function("exp(z)", A), 1.0, k_max=4, grid=grid)


@pytest.fixture(scope="module")
def double_report():
    curve = double_zero_curve()
    grid = RadiusGrid.geometric(curve.domain, 60, 1.05, 0.05)
    return smt_scan(curve, 2.0, k_max=4, grid=grid)


def test_exp_simple_preimages_give_k0_one(exp_report):
    assert exp_report.k0 == 1
    assert exp_report.divisor.degree() > 0
    assert set(exp_report.divisor.multiplicities) == {1}


def test_bookkeeping_identity(exp_report):
    rep = exp_report
    for k in range(1, rep.k_max + 1):
        assert np.allclose(rep.residual(k) - rep.T + rep.N[k], 0.0, atol=1e-12)
    # with only simple preimages every truncation level counts the same
    assert np.allclose(rep.N[1], rep.N_full, atol=1e-12)


def test_residual_nonincreasing_in_k(double_report):
    rep = double_report
    for k in range(1, rep.k_max):
        assert np.all(rep.residual(k + 1) <= rep.residual(k) + 1e-15)


def test_double_zero_curve(double_report):
    rep = double_report
    assert rep.k0 == 2
    assert list(rep.divisor.multiplicities) == [2]
    z0 = rep.divisor.locations[0]
    assert abs(z0 - 1.5) < 1e-7
    gap = rep.residual(1) - rep.residual(2)
    expect = np.array([jensen_weight(z0, r) for r in rep.radii])
    assert np.allclose(gap, expect, atol=1e-9)
    assert np.all(residual_gap(rep, 2)[tail_window(rep.radii.size)] <= 1e-9)


def test_report_tables(double_report):
    rep = double_report
    cols = rep.columns()
    assert cols[:3] == ["r", "T", "N_k1"] and cols[-2:] == ["envelope", "warnings"]
    assert len(rep.rows()) == rep.radii.size and all(len(r) == len(cols) for r in rep.rows())
    s = rep.summary()
    assert s["k0"] == 2 and s["verdict"] == "k0=2" and s["upper_holds_k0"]


def test_rejections():
    A = Annulus(3.0)
    grid = RadiusGrid.linear(A, 5, 1.1, 0.1)
    with pytest.raises(DomainError):
        smt_scan(parse_function("exp(z)", A), 0, grid=grid)
    with pytest.raises(DomainError):
        smt_scan(parse_function("exp(z)", A), "inf", grid=grid)
    with pytest.raises(DomainError):
        smt_scan(parse_function("exp(z)-2", A), 1.0, grid=grid)
    with pytest.raises(DomainError):
        smt_scan(parse_function("2", A), 1.0, grid=grid)
    with pytest.raises(DomainError):
        smt_scan(CurveModel("torus", parse_function("z", A), (1, 1j)), 1.0, grid=grid)
    with pytest.raises(DomainError):
        residual_gap(smt_scan(parse_function("exp(z)", A), 1.0, k_max=2, grid=grid), 3)


def test_degenerate_constant_curve_reported():
    A = Annulus(3.0)
    rep = smt_scan(parse_function("2", A), 1.0, k_max=2, grid=RadiusGrid.linear(A, 6, 1.1, 0.1),
                   allow_degenerate=True)
    assert rep.degenerate and rep.k0 is None and rep.verdict.startswith("degenerate")
    assert np.all(rep.T == 0.0)
