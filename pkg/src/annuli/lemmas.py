"""Statement-level checks of growth and logarithmic-derivative bounds.

Each check computes a left-hand side and a right-hand side on a radius grid,
extracts the exceptional set ``E = {r : lhs(r) > rhs(r)}`` and measures its
weight ``integral over E of dr / (R0 - r)^(lambda + 1)``.

Where a bound contains unspecified constants, the smallest nonnegative
constants are fitted by a linear program on the tail window (the outer half
of the grid): the envelope must dominate the lhs there, and the summed
envelope is minimised.  The exceptional set then lies in the inner part of
the grid and its weight is finite by construction, so the content of a
check is the size of the constants it needed.

Exceptional intervals are built from grid midpoints (see
:meth:`ExceptionalSet.from_mask`); they resolve ``E`` only to grid spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .annulus import INF, Annulus, ExceptionalSet, RadiusGrid, delta_weight
from .errors import DomainError
from .functions import CurveModel, DerivativeModel, FunctionModel, LogDerivativeModel
from .nevanlinna import (
    TargetForm,
    _moduli,
    _nudged_radii,
    _pos_log_abs,
    _three_circle,
    characteristic_area_profile,
    function_divisors,
)
from .parallel import pmap

BOREL_SLACK = 1.1


def log_plus(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 1.0, np.log(np.maximum(x, 1.0)), 0.0)


def tail_window(n: int) -> np.ndarray:
    """Indices of the outer half of an ``n``-point grid."""
    return np.arange(n // 2, n)


def fit_envelope(target, features, rows, free=()) -> np.ndarray:
    """Smallest linear envelope ``features @ c >= target`` on ``rows``.

    ``features`` has one column per constant; constants are nonnegative
    except for the column indices in ``free``.  The objective is the summed
    envelope over ``rows``.  The result is shifted (through the last
    column, the additive constant) so that the constraint holds exactly in
    floating point.
    """
    target = np.asarray(target, dtype=float)
    F = np.asarray(features, dtype=float)
    Fr, tr = F[rows], target[rows]
    ncol = F.shape[1]
    bounds = [(None, None) if j in free else (0, None) for j in range(ncol)]
    res = linprog(Fr.sum(axis=0), A_ub=-Fr, b_ub=-tr, bounds=bounds, method="highs")
    if not res.success:
        raise DomainError(f"envelope fit failed: {res.message}")
    c = np.where(np.abs(res.x) < 1e-14, 0.0, res.x)
    viol = float(np.max(tr - Fr @ c)) if rows.size else 0.0
    if viol > 0:
        c[-1] += viol
    return c


@dataclass
class BoundReport:
    """Grid comparison of a bound, with its exceptional set and fitted constants."""

    name: str
    radii: np.ndarray
    R0: float
    lhs: np.ndarray
    rhs: np.ndarray
    exceptional: ExceptionalSet
    delta_weight_value: float
    fitted_constants: dict
    lam: float = 1.0
    bound: float | None = None
    verdict: str = ""
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def in_E(self) -> np.ndarray:
        return self.lhs > self.rhs

    @property
    def consistent(self) -> bool:
        return self.verdict.startswith("consistent")

    def columns(self) -> list[str]:
        return ["r", "lhs", "rhs", "in_E", "warnings"]

    def rows(self) -> list[list]:
        w = self.warnings or [""] * len(self.radii)
        return [[float(r), float(a), float(b), int(e), wi]
                for r, a, b, e, wi in zip(self.radii, self.lhs, self.rhs, self.in_E, w)]

    def summary(self) -> dict:
        c = self.fitted_constants
        out = {"C0": c.get("C0", 0.0), "C1": c.get("C1", 0.0), "C2": c.get("C2", 0.0),
               "lambda": self.lam, "delta_weight": self.delta_weight_value, "verdict": self.verdict}
        if self.bound is not None:
            out["bound"] = self.bound
        out.update(self.details)
        return out


def _finish(name, radii, R0, lhs, rhs, lam, constants, bound=None, details=None, warnings=None):
    E = ExceptionalSet.from_mask(radii, lhs > rhs, R0, lam)
    w = delta_weight(E, Annulus(R0))
    if bound is None:
        verdict = "consistent" if math.isfinite(w) else "inconsistent: exceptional set reaches R0"
    else:
        ok = math.isfinite(w) and w <= BOREL_SLACK * bound
        verdict = "consistent" if ok else "inconsistent: weight exceeds the bound"
    return BoundReport(name, np.asarray(radii), R0, lhs, rhs, E, w, constants, lam, bound, verdict,
                       details or {}, warnings or [])


# ---------------------------------------------------------------- growth lemma

def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def parse_phi(text: str, R0: float):
    """Named test functions for the growth lemma.

    ``const[:c]``, ``recip`` (``1/(R0-r)``), ``exp_recip``
    (``exp(1/(R0-r))``), ``staircase[:c1,h1,w1[;c2,h2,w2...]]`` (``1`` plus
    smooth logistic steps).
    """
    name, _, args = text.strip().partition(":")
    if name == "const":
        c = float(args) if args else 1.0
        if c <= 0:
            raise DomainError("constant phi must be positive")
        return lambda r: np.full_like(np.asarray(r, dtype=float), c)
    if name == "recip":
        return lambda r: 1.0 / (R0 - np.asarray(r, dtype=float))
    if name == "exp_recip":
        return lambda r: np.exp(1.0 / (R0 - np.asarray(r, dtype=float)))
    if name == "staircase":
        if args:
            steps = [tuple(float(v) for v in s.split(",")) for s in args.split(";")]
        else:
            steps = [(1.0 + 0.3 * (R0 - 1.0), 5.0, 0.005)]
        for s in steps:
            if len(s) != 3 or s[1] < 0 or s[2] <= 0:
                raise DomainError(f"staircase step {s} must be (center, height >= 0, width > 0)")

        def phi(r):
            r = np.asarray(r, dtype=float)
            return 1.0 + sum(h * _sigmoid((r - c) / w) for c, h, w in steps)
        return phi
    raise DomainError(f"unknown phi {text!r}; expected const, recip, exp_recip or staircase")


def borel_check(phi, lam: float, grid: RadiusGrid) -> BoundReport:
    """Growth lemma: ``phi' <= (phi/(R0-r))^(lam+1)`` outside a set of bounded weight.

    Parameters
    ----------
    phi : callable or array_like
        Positive nondecreasing function on ``[1, R0)`` (vectorised callable,
        evaluated at 1 and on the grid) or its samples on the grid.
    lam : float
        Exponent ``lambda > 0``.
    grid : RadiusGrid
        Evaluation radii.

    Returns
    -------
    BoundReport
        ``lhs`` is the centred-difference derivative, ``rhs`` the bound, and
        ``bound`` the closed-form limit ``phi(1)^(-lam) / lam`` on the weight.
    """
    if lam <= 0:
        raise DomainError("lambda must be > 0")
    r = grid.as_array()
    R0 = grid.annulus.R0
    if callable(phi):
        vals = np.asarray(phi(r), dtype=float)
        phi1 = float(np.asarray(phi(np.array([1.0])), dtype=float)[0])
    else:
        vals = np.asarray(phi, dtype=float)
        if vals.shape != r.shape:
            raise DomainError("phi samples must match the grid")
        phi1 = float(vals[0])
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0) or phi1 <= 0:
        raise DomainError("phi must be positive and finite on the grid")
    if np.any(np.diff(vals) < -1e-12 * np.abs(vals[1:])):
        raise DomainError("phi samples are not monotone nondecreasing")
    deriv = np.gradient(vals, r, edge_order=2)
    rhs = (vals / (R0 - r)) ** (lam + 1)
    bound = phi1 ** (-lam) / lam
    return _finish("borel", r, R0, deriv, rhs, lam, {}, bound=bound)


# ---------------------------------------------------------------- log-derivative lemmas

def _statement_fit(lhs, logT, boundary, radii, coeff, rows):
    target = lhs - coeff * logT
    F = np.column_stack((boundary, np.ones_like(boundary)))
    C2, C0 = fit_envelope(target, F, rows)
    return C2, C0


def _log_deriv_report(name, radii, R0, lhs, T, eps, lam, warnings, linear_form=True):
    n = radii.size
    rows = tail_window(n)
    ok = np.array([not w for w in warnings]) if warnings else np.ones(n, bool)
    rows = rows[ok[rows]]
    coeff = 4.0 + eps
    logT = log_plus(T)
    boundary = log_plus(1.0 / (R0 - radii))
    C2, C0 = _statement_fit(lhs, logT, boundary, radii, coeff, rows)
    rhs = coeff * logT + C2 * boundary + C0
    details = {}
    if linear_form:
        # The same constants with T in place of log+ T give a weaker bound,
        # whose exceptional set must be contained in the statement's.  T0 can
        # dip below zero at quadrature level, where log+ T0 = 0 exceeds it.
        weak = coeff * np.maximum(T, 0.0) + C2 * boundary + C0
        E_weak = lhs > weak
        details["weak_subset"] = bool(np.all(~E_weak | (lhs > rhs)))
        # Bound linear in T, with its own fitted O(log r) + O(1) constants.
        F = np.column_stack((np.log(radii), np.ones_like(radii)))
        Cl, Cp = fit_envelope(lhs - coeff * T, F, rows)
        linear_rhs = coeff * T + Cl * np.log(radii) + Cp
        Ep = ExceptionalSet.from_mask(radii, lhs > linear_rhs, R0, lam)
        wp = delta_weight(Ep, Annulus(R0))
        details.update({"linear_C_log": float(Cl), "linear_C0": float(Cp), "linear_delta_weight": wp,
                        "linear_verdict": "consistent" if math.isfinite(wp) else "inconsistent"})
    warn_strings = ["; ".join(w) for w in warnings] if warnings else []
    return _finish(name, radii, R0, lhs, rhs, lam, {"C0": float(C0), "C1": coeff, "C2": float(C2)},
                   details=details, warnings=warn_strings)


def logderiv_check(f: FunctionModel, epsilon: float, grid: RadiusGrid, lam: float = 1.0,
                   threads: int | None = None) -> BoundReport:
    """Logarithmic-derivative lemma for a multiplicative meromorphic model.

    ``lhs = m0(r, f'/f)``; ``rhs = (4 + eps) log+ T0(r, f) + C2 log+ 1/(R0 - r) + C0``
    with fitted ``C2, C0 >= 0``.  The summary also carries the linear-in-T
    bound ``(4 + eps) T0 + C_log log r + C0'`` and its verdict.
    """
    if not f.is_multiplicative:
        raise DomainError(f"{f.spec} is not flagged multiplicative")
    if epsilon <= 0:
        raise DomainError("epsilon must be > 0")
    R0 = grid.annulus.R0
    t_max = min(R0, grid.radii[-1] * (1 + 1e-3) + 1e-3)
    zeros, poles = function_divisors(f, t_max)
    radii, warns = _nudged_radii(grid.radii, R0, _moduli(zeros, poles))
    g = LogDerivativeModel(f)

    def one(r):
        m_g = _three_circle(_pos_log_abs(g), r, level=g.log_abs)
        m_f = _three_circle(_pos_log_abs(f), r, level=f.log_abs)
        return m_g, m_f

    res = pmap(one, radii, threads)
    lhs = np.array([a.value for a, _ in res])
    T = np.array([b.value + poles.counting_N(r) for (_, b), r in zip(res, radii)])
    warnings = [list(w) for w in warns]
    for w, (a, b) in zip(warnings, res):
        if not (a.converged and b.converged):
            w.append("quadrature did not converge")
    return _log_deriv_report("logderiv", radii, R0, lhs, T, epsilon, lam, warnings)


def logderiv_curve_check(curve: CurveModel, grid: RadiusGrid, epsilon: float = 1.0, lam: float = 1.0,
                         threads: int | None = None) -> BoundReport:
    """Logarithmic-derivative lemma for a torus curve with invariant form ``dw``.

    ``lhs = m0(r, F')`` for the lift ``F``; ``T`` is the flat-form area
    characteristic; the rhs has the same shape as in :func:`logderiv_check`.
    """
    if not isinstance(curve, CurveModel) or curve.target != "torus":
        raise DomainError("logderiv-curve needs a torus curve")
    R0 = grid.annulus.R0
    radii = grid.as_array()
    xi = DerivativeModel(curve.lift)
    res = pmap(lambda r: _three_circle(_pos_log_abs(xi), r, level=xi.log_abs), radii, threads)
    lhs = np.array([m.value for m in res])
    T_est = characteristic_area_profile(curve, TargetForm.flat_torus(curve.lattice), radii, threads)
    T = np.array([t.value for t in T_est])
    warnings = [[] if (m.converged and t.converged) else ["quadrature did not converge"]
                for m, t in zip(res, T_est)]
    return _log_deriv_report("logderiv-curve", radii, R0, lhs, T, epsilon, lam, warnings, linear_form=False)


# ---------------------------------------------------------------- admissibility

@dataclass
class AdmissibilityReport:
    radii: np.ndarray
    T: np.ndarray
    ratio: np.ndarray
    index: float
    tail_increasing: bool

    def columns(self) -> list[str]:
        return ["r", "T0", "ratio"]

    def rows(self) -> list[list]:
        return [[float(r), float(t), float(q)] for r, t, q in zip(self.radii, self.T, self.ratio)]

    def summary(self) -> dict:
        return {"index": self.index, "tail_increasing": self.tail_increasing}


def admissibility_index(f, grid: RadiusGrid, threads: int | None = None) -> AdmissibilityReport:
    """``max T(r) / (-log(R0 - r))`` over the grid points with ``R0 - r < 1``.

    ``T`` is ``T0`` for a function model and the area characteristic for a
    curve.  ``tail_increasing`` reports whether the ratio grows along the
    tail window, the empirical sign of admissibility.
    """
    R0 = grid.annulus.R0
    if isinstance(f, CurveModel):
        radii = grid.as_array()
        T = np.array([t.value for t in characteristic_area_profile(f, None, radii, threads)])
    else:
        t_max = min(R0, grid.radii[-1] * (1 + 1e-3) + 1e-3)
        zeros, poles = function_divisors(f, t_max)
        radii, _ = _nudged_radii(grid.radii, R0, _moduli(zeros, poles))
        ms = pmap(lambda r: _three_circle(_pos_log_abs(f), r, level=f.log_abs), radii, threads)
        T = np.array([m.value + poles.counting_N(r) for m, r in zip(ms, radii)])
    gap = R0 - radii
    ratio = np.full(radii.size, np.nan)
    near = gap < 1.0
    ratio[near] = T[near] / (-np.log(gap[near]))
    valid = ratio[near]
    index = float(np.max(valid)) if valid.size else 0.0
    tail = ratio[tail_window(radii.size)]
    tail = tail[np.isfinite(tail)]
    increasing = bool(tail.size > 1 and np.all(np.diff(tail) > 0))
    return AdmissibilityReport(radii, T, ratio, max(index, 0.0) if np.isfinite(index) else index, increasing)


__all__ = [
    "BoundReport", "AdmissibilityReport", "borel_check", "logderiv_check", "logderiv_curve_check",
    "admissibility_index", "parse_phi", "fit_envelope", "tail_window", "log_plus", "INF",
]
