from __future__ import annotations

import math

import numpy as np
import pytest

from annuli.quadrature import (
    adaptive_gk,
    adaptive_gk_vec,
    gl_nodes,
    level_crossings,
    periodic_mean,
    periodic_mean_rows,
)


@pytest.mark.parametrize("deg", range(0, 22, 3))
def test_gauss_kronrod_exact_on_polynomials(deg):
    res = adaptive_gk(lambda x: x ** deg, 0.0, 1.0)
    assert res.value == pytest.approx(1 / (deg + 1), rel=1e-14)


def test_adaptive_handles_kink_with_breakpoint():
    f = lambda x: np.abs(x - 0.3)
    exact = (0.3 ** 2 + 0.7 ** 2) / 2
    assert adaptive_gk(f, 0, 1, breakpoints=[0.3]).value == pytest.approx(exact, abs=1e-15)
    assert adaptive_gk(f, 0, 1).value == pytest.approx(exact, abs=1e-11)


def test_adaptive_reports_nonconvergence():
    res = adaptive_gk(lambda x: 1 / x, 0.0, 1.0, max_panels=50)
    assert not res.converged


def test_adaptive_endpoint_singularity():
    res = adaptive_gk(lambda x: 1 / np.sqrt(x), 0.0, 1.0, abstol=1e-10, reltol=1e-10)
    assert res.value == pytest.approx(2.0, abs=1e-8)


def test_gl_nodes_integrate_exponential():
    s, w = gl_nodes(3)
    assert w.sum() == pytest.approx(1.0)
    assert np.dot(w, np.exp(s)) == pytest.approx(math.e - 1, rel=1e-15)


def test_periodic_mean_exponential_convergence():
    f = lambda th: np.exp(np.cos(th))
    from scipy.special import i0
    res = periodic_mean(f)
    assert res.value == pytest.approx(i0(1.0), rel=1e-14)
    assert res.nodes <= 256


def test_periodic_mean_rows():
    a = np.array([0.0, 0.5, 1.0, 2.0])
    from scipy.special import i0
    means, errs, n, ok = periodic_mean_rows(lambda th: np.exp(a[:, None] * np.cos(th[None, :])), 4)
    assert ok and np.allclose(means, i0(a), rtol=1e-13)


def test_level_crossings():
    roots = level_crossings(np.sin, 0.5, 10.0)
    assert roots == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], abs=1e-12)


def test_adaptive_vector():
    f = lambda x: np.vstack((np.cos(x), x ** 2))
    vals, errs, nodes, ok = adaptive_gk_vec(f, 0.0, 1.0)
    assert ok and vals == pytest.approx([math.sin(1.0), 1 / 3], rel=1e-14)
