"""Truncation-level scan for curves into C* compactified to the sphere.

For a nonvanishing curve ``f`` and a point ``a != 0`` we compare the
Fubini-Study area characteristic ``T(r)`` with the truncated counting
functions ``N^[k](r)`` of ``f*{a}`` and look for the smallest truncation
level ``k0`` at which counting still accounts for the characteristic up to an
error term ``C1 log+ T + C2 log+ 1/(R0 - r) + C0``.

Selection rule: the envelope is fitted once, on the untruncated residual
``T - N`` (the chordal proximity, by the first main theorem), as the
smallest such envelope dominating it on the tail window.  ``k0`` is the
smallest ``k`` whose residual ``T - N^[k]`` stays below that same envelope
(within ``tol``) on the whole tail window.  Fitting a separate envelope per
level would let the additive constant absorb any bounded truncation loss and
make every level pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .annulus import INF, Annulus, Divisor, ExceptionalSet, RadiusGrid, delta_weight
from .errors import DomainError
from .functions import CurveModel, FunctionModel, compose_exp, hermite_exponent
from .lemmas import fit_envelope, log_plus, tail_window
from .nevanlinna import (
    TargetForm,
    _divisor_of_value,
    _moduli,
    _nudged_radii,
    _point_target,
    characteristic_area_profile,
)

DEFAULT_K_MAX = 8
SELECTION_TOL = 1e-9


@dataclass
class SmtReport:
    curve: CurveModel
    a: complex
    radii: np.ndarray
    R0: float
    k_max: int
    T: np.ndarray
    N: dict
    N_full: np.ndarray
    divisor: Divisor
    envelope: np.ndarray
    constants: dict
    lower_envelope: np.ndarray
    lower_constants: dict
    k0: int | None
    upper_holds: dict
    lower_holds: dict
    exceptional: dict
    delta_weights: dict
    tol: float = SELECTION_TOL
    degenerate: bool = False
    warnings: list = field(default_factory=list)

    def residual(self, k: int) -> np.ndarray:
        """``T - N^[k]``."""
        return self.T - self.N[k]

    @property
    def verdict(self) -> str:
        if self.degenerate:
            return "degenerate: constant curve"
        if self.k0 is None:
            return f"not found at k_max={self.k_max}"
        return f"k0={self.k0}"

    def columns(self) -> list[str]:
        ks = range(1, self.k_max + 1)
        return (["r", "T"] + [f"N_k{k}" for k in ks] + [f"residual_k{k}" for k in ks]
                + ["envelope", "warnings"])

    def rows(self) -> list[list]:
        ks = range(1, self.k_max + 1)
        out = []
        for i, r in enumerate(self.radii):
            row = [float(r), float(self.T[i])] + [float(self.N[k][i]) for k in ks]
            row += [float(self.T[i] - self.N[k][i]) for k in ks]
            row += [float(self.envelope[i]), self.warnings[i] if self.warnings else ""]
            out.append(row)
        return out

    def summary(self) -> dict:
        c, lc = self.constants, self.lower_constants
        out = {"k0": self.k0 if self.k0 is not None else "none", "C0": c["C0"], "C1": c["C1"], "C2": c["C2"],
               "lower_C0": lc["C0"], "lower_C1": lc["C1"], "lower_C2": lc["C2"], "verdict": self.verdict}
        if self.k0 is not None:
            out["upper_holds_k0"] = self.upper_holds[self.k0]
            out["lower_holds_k0"] = self.lower_holds[self.k0]
            out["delta_weight_k0"] = self.delta_weights[self.k0]
        return out


def _as_cstar(curve) -> CurveModel:
    if isinstance(curve, CurveModel):
        if curve.target != "c_star":
            raise DomainError("smt scan needs a C*-valued curve")
        return curve
    return CurveModel("c_star", curve)


def smt_scan(curve, a, k_max: int = DEFAULT_K_MAX, grid: RadiusGrid | None = None,
             threads: int | None = None, tol: float = SELECTION_TOL,
             allow_degenerate: bool = False) -> SmtReport:
    """Scan truncation levels ``k = 1..k_max`` for a C*-valued curve and the divisor ``{a}``.

    Parameters
    ----------
    curve : CurveModel or FunctionModel
        Nonvanishing holomorphic curve (a bare model is wrapped and checked).
    a : complex
        Target point, nonzero and finite.
    k_max : int
        Largest truncation level scanned.
    grid : RadiusGrid
        Radii, typically geometric towards ``R0``.
    allow_degenerate : bool
        Report constant curves instead of rejecting them.

    Returns
    -------
    SmtReport
        Tables of ``T`` and ``N^[k]``, the fitted envelope and the selected
        ``k0`` (``None`` if no level up to ``k_max`` qualifies).
    """
    c = _as_cstar(curve)
    f: FunctionModel = c.lift
    a = _point_target(a)
    if a is None or a == 0:
        raise DomainError("the divisor point must be finite and nonzero")
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    if grid is None:
        raise DomainError("a radius grid is required")
    degenerate = f.is_constant()
    if degenerate and not allow_degenerate:
        raise DomainError("constant curve: the scan needs a nonconstant curve")
    R0 = grid.annulus.R0
    t_max = min(R0, grid.radii[-1] * (1 + 1e-3) + 1e-3)
    D = Divisor((), 1) if degenerate else _divisor_of_value(f, a, t_max)
    radii, warns = _nudged_radii(grid.radii, R0, _moduli(D))
    T_est = characteristic_area_profile(f, TargetForm.fubini_study(), radii, threads)
    T = np.array([t.value for t in T_est])
    N = {k: np.array([D.counting_N(r, k) for r in radii]) for k in range(1, k_max + 1)}
    N_full = np.array([D.counting_N(r) for r in radii])
    rows = tail_window(radii.size)
    F = np.column_stack((log_plus(T), log_plus(1.0 / (R0 - radii)), np.ones_like(radii)))
    reference = T - N_full
    up = fit_envelope(reference, F, rows, free=(2,))
    lo = fit_envelope(-reference, F, rows, free=(2,))
    env = F @ up
    low_env = F @ lo
    upper, lower, exc, weights = {}, {}, {}, {}
    k0 = None
    for k in range(1, k_max + 1):
        res = T - N[k]
        upper[k] = bool(np.all(res[rows] <= env[rows] + tol))
        lower[k] = bool(np.all(res[rows] >= -low_env[rows] - tol))
        E = ExceptionalSet.from_mask(radii, res > env + tol, R0, 1.0)
        exc[k] = E
        weights[k] = delta_weight(E, Annulus(R0))
        if k0 is None and upper[k]:
            k0 = k
    warn_strings = []
    for w, t in zip(warns, T_est):
        w = list(w) + ([] if t.converged else ["area quadrature did not converge"])
        warn_strings.append("; ".join(w))
    return SmtReport(c, a, radii, R0, k_max, T, N, N_full, D, env,
                     {"C1": float(up[0]), "C2": float(up[1]), "C0": float(up[2])}, low_env,
                     {"C1": float(lo[0]), "C2": float(lo[1]), "C0": float(lo[2])},
                     None if degenerate else k0, upper, lower, exc, weights, tol, degenerate, warn_strings)


def residual_gap(report: SmtReport, k: int) -> np.ndarray:
    """``T - N^[k] - envelope``; nonpositive where the fitted bound holds."""
    if not 1 <= k <= report.k_max:
        raise DomainError(f"k must lie in 1..{report.k_max}")
    return report.T - report.N[k] - report.envelope


def double_zero_curve(a: complex = 2.0, z0: complex = 1.5, curvature: complex = 0.1,
                      R0: float = 3.0) -> CurveModel:
    """``exp(g)`` with ``exp(g) - a`` vanishing to order exactly two at ``z0``.

    ``g`` is the quadratic with ``g(z0) = Log a``, ``g'(z0) = 0``; the other
    solutions of ``exp(g) = a`` lie at ``z0 +- sqrt(2 pi i k / curvature)``,
    which the defaults keep outside the annulus.
    """
    dom = Annulus(R0)
    f = compose_exp(hermite_exponent(a, z0, curvature, dom))
    return CurveModel("c_star", f)


__all__ = ["SmtReport", "smt_scan", "residual_gap", "double_zero_curve", "DEFAULT_K_MAX", "INF"]
