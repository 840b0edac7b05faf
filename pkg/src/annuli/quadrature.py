"""Vectorised quadrature rules used by the functionals and the locator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi

# Kronrod 15-point extension of the 7-point Gauss rule (QUADPACK qk15 table).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
# Gauss nodes sit at the odd positions of the 15-point layout.
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate((_WG[:-1], _WG[::-1]))


@dataclass
class QuadResult:
    value: float
    error: float
    nodes: int
    converged: bool = True

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value, self.error + other.error,
                          self.nodes + other.nodes, self.converged and other.converged)

    def scaled(self, c: float) -> "QuadResult":
        return QuadResult(c * self.value, abs(c) * self.error, self.nodes, self.converged)


def _gk_panels(func, a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * KRONROD_NODES[None, :]
    fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    k = half * (fx @ KRONROD_WEIGHTS)
    g = half * (fx @ GAUSS_WEIGHTS)
    return k, np.abs(k - g), fx.size


def adaptive_gk(func, a: float, b: float, breakpoints=(), abstol: float = 1e-12,
                reltol: float = 1e-12, max_panels: int = 4000) -> QuadResult:
    """Globally adaptive G7-K15 quadrature of a vectorised real function.

    All panels whose local error exceeds their share of the tolerance are
    bisected together, so every iteration costs one vectorised call.
    """
    pts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    lo = np.array(pts[:-1])
    hi = np.array(pts[1:])
    vals, errs, nodes = _gk_panels(func, lo, hi)
    done_val = 0.0
    done_err = 0.0
    total_len = b - a
    while True:
        total = done_val + vals.sum()
        tol = max(abstol, reltol * abs(total))
        err = done_err + errs.sum()
        if err <= tol or lo.size == 0:
            return QuadResult(float(total), float(err), nodes, True)
        if lo.size + 1 > max_panels:
            return QuadResult(float(total), float(err), nodes, False)
        # Panels within their length-proportional share of the tolerance are retired.
        share = tol * (hi - lo) / total_len
        keep = errs > 0.5 * share
        if not keep.any():
            keep = errs >= errs.max()
        done_val += vals[~keep].sum()
        done_err += errs[~keep].sum()
        lo, hi = lo[keep], hi[keep]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))
        vals, errs, n = _gk_panels(func, lo, hi)
        nodes += n


_GL_CACHE: dict = {}


def gl_nodes(n_panels: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite Gauss-Legendre rule on [0, 1]."""
    key = (n_panels, order)
    if key not in _GL_CACHE:
        x, w = leggauss(order)
        h = 1.0 / n_panels
        mid = h * (np.arange(n_panels) + 0.5)
        s = (mid[:, None] + 0.5 * h * x[None, :]).ravel()
        ws = np.tile(0.5 * h * w, n_panels)
        _GL_CACHE[key] = (s, ws)
    return _GL_CACHE[key]


def periodic_mean(func, n0: int = 64, tol: float = 1e-13, max_n: int = 2 ** 18) -> QuadResult:
    """Mean over [0, 2pi) of a smooth periodic function by trapezoid doubling."""
    n = n0
    theta = TWO_PI * np.arange(n) / n
    s = np.sum(func(theta))
    prev = s / n
    while n < max_n:
        theta = TWO_PI * (np.arange(n) + 0.5) / n
        s = s + np.sum(func(theta))
        n *= 2
        cur = s / n
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return QuadResult(float(cur), float(err), n)
        prev = cur
    return QuadResult(float(prev), float(err), n, False)


def level_crossings(func, a: float, b: float, samples: int = 512) -> list[float]:
    """Roots of a continuous real function on [a, b] found by sampling and Brent refinement."""
    x = np.linspace(a, b, samples + 1)
    y = np.asarray(func(x), dtype=float)
    out = []
    sgn = np.sign(y)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        if np.isfinite(y[i]) and np.isfinite(y[i + 1]):
            out.append(brentq(lambda t: float(func(np.array([t]))[0]), x[i], x[i + 1], xtol=1e-14))
    return out


def adaptive_gk_vec(func, a: float, b: float, abstol: float = 1e-12, reltol: float = 1e-12,
                    max_panels: int = 4000):
    """Adaptive G7-K15 for a vector-valued integrand ``func(x) -> (m, len(x))``.

    Panels are refined until the worst component meets the tolerance.
    Returns ``(values, errors, nodes, converged)`` with one entry per component.
    """
    def panels(lo, hi):
        half = 0.5 * (hi - lo)
        x = (0.5 * (hi + lo))[:, None] + half[:, None] * KRONROD_NODES[None, :]
        fx = np.asarray(func(x.ravel()), dtype=float)
        fx = fx.reshape(fx.shape[0], *x.shape)
        k = half[None, :] * (fx @ KRONROD_WEIGHTS)
        g = half[None, :] * (fx @ GAUSS_WEIGHTS)
        return k, np.abs(k - g), x.size

    lo, hi = np.array([float(a)]), np.array([float(b)])
    vals, errs, nodes = panels(lo, hi)
    done_val = np.zeros(vals.shape[0])
    done_err = np.zeros(vals.shape[0])
    total_len = b - a
    while True:
        total = done_val + vals.sum(axis=1)
        tol = np.maximum(abstol, reltol * np.abs(total))
        err = done_err + errs.sum(axis=1)
        if np.all(err <= tol) or lo.size == 0:
            return total, err, nodes, True
        if 2 * lo.size > max_panels:
            return total, err, nodes, False
        share = tol[:, None] * ((hi - lo) / total_len)[None, :]
        keep = np.any(errs > 0.5 * share, axis=0)
        if not keep.any():
            keep = np.any(errs >= errs.max(axis=1, keepdims=True), axis=0)
        done_val += vals[:, ~keep].sum(axis=1)
        done_err += errs[:, ~keep].sum(axis=1)
        lo, hi = lo[keep], hi[keep]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))
        vals, errs, n = panels(lo, hi)
        nodes += n


def periodic_mean_rows(func, n_rows: int, n0: int = 64, tol: float = 1e-13, max_n: int = 2 ** 17):
    """Row-wise means over [0, 2pi) of ``func(theta) -> (n_rows, len(theta))``.

    Trapezoid doubling continues until every row has settled; returns
    ``(means, errors, n, converged)``.
    """
    n = n0
    s = np.sum(func(TWO_PI * np.arange(n) / n), axis=1)
    prev = s / n
    err = np.full(n_rows, np.inf)
    while n < max_n:
        s = s + np.sum(func(TWO_PI * (np.arange(n) + 0.5) / n), axis=1)
        n *= 2
        cur = s / n
        err = np.abs(cur - prev)
        if np.all(err <= tol * np.maximum(1.0, np.abs(cur))):
            return cur, err, n, True
        prev = cur
    return prev, err, n, False
