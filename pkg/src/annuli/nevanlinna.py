"""Value-distribution functionals on an annulus.

Conventions used throughout (all values in nats):

* circle terms enter with weights ``+1, +1, -2`` on ``|z| = r, 1/r, 1``;
* ``f*Omega = s(z) (i/2pi) dz ^ dzbar = s(z) dA / pi`` for a target form with
  density ``s``; the Fubini-Study form has total mass 1;
* ``d^c = (i/4pi)(dbar - d)``, so ``dd^c log|f| = (zeros - poles) / 2`` as
  currents.  The boundary flux term of the annulus Green-Jensen identity then
  carries the constant :data:`DC_FLUX_CONSTANT`, calibrated on ``log|z|``.

Area characteristics use the Jensen kernel,

    T(r) = (1/pi) * integral over A(r) of (log r - |log|z||) s(z) dA
         = integral_{-log r}^{log r} (log r - |rho|) a(rho) d rho,

with ring density ``a(rho) = (1/pi) * integral s(e^{rho + i theta}) e^{2 rho} d theta``,
which is the two-level ``int dt/t int_{A(t)}`` form after exchanging the order
of integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .annulus import INF, Divisor, RadiusGrid
from .errors import BoundaryProximityError, DomainError, UnsupportedFunctionError
from .functions import CurveModel, FunctionModel, ShiftModel
from .locator import DIVISOR_MARGIN, divisors_upto, nudge_radius
from .parallel import pmap
from .quadrature import QuadResult, adaptive_gk, adaptive_gk_vec, level_crossings, periodic_mean_rows

TWO_PI = 2.0 * math.pi
#: Coefficient of the unit-circle flux term; ``calibrate_flux_constant`` reproduces it.
DC_FLUX_CONSTANT = 0.0
#: Records whose error estimate exceeds this are flagged.
FLAG_TOL = 1e-6
CIRCLE_TOL = 1e-13
RING_ROWS = 32


@dataclass(frozen=True)
class Estimate:
    """A computed functional value with its quadrature bookkeeping."""

    value: float
    error: float = 0.0
    radius: float = math.nan
    nodes: int = 0
    converged: bool = True
    warnings: tuple = ()

    def __float__(self):
        return float(self.value)

    @property
    def flagged(self) -> bool:
        return (not self.converged) or self.error > FLAG_TOL


# ---------------------------------------------------------------- circle means

def _circle_mean(h, r: float, level=None) -> QuadResult:
    """``(1/2pi) * integral h(r e^{i theta}) d theta``.

    ``level`` is a real function of z whose sign changes mark kinks of the
    integrand (e.g. ``log|f|`` for ``log+|f|``); they become panel breakpoints.
    """
    g = lambda th: h(r * np.exp(1j * th))
    bps = ()
    if level is not None:
        bps = level_crossings(lambda th: level(r * np.exp(1j * th)), 0.0, TWO_PI)
    with np.errstate(all="ignore"):
        res = adaptive_gk(g, 0.0, TWO_PI, bps, abstol=CIRCLE_TOL, reltol=CIRCLE_TOL, max_panels=20000)
    if not math.isfinite(res.value):
        raise BoundaryProximityError(f"integrand not finite on |z| = {r}")
    return res.scaled(1.0 / TWO_PI)


def _three_circle(h, r: float, level=None) -> QuadResult:
    outer = _circle_mean(h, r, level)
    inner = _circle_mean(h, 1.0 / r, level)
    unit = _circle_mean(h, 1.0, level)
    return outer + inner + unit.scaled(-2.0)


def _pos_log_abs(f: FunctionModel):
    return lambda z: np.maximum(f.log_abs(z), 0.0)


# ---------------------------------------------------------------- divisors

def _moduli(*divisors: Divisor) -> np.ndarray:
    parts = [np.abs(D.locations) for D in divisors if len(D)]
    return np.concatenate(parts) if parts else np.zeros(0)


def function_divisors(f: FunctionModel, t: float) -> tuple[Divisor, Divisor]:
    """Zero and pole divisors of ``f`` in ``A(t)``, exact when known, otherwise located."""
    if f.is_constant():
        return Divisor((), 1), Divisor((), -1)
    zeros, poles, _ = divisors_upto(f, t)
    return zeros, poles


def _check_unit_circle(mods: np.ndarray):
    if mods.size and np.any(np.abs(mods - 1.0) < DIVISOR_MARGIN):
        raise UnsupportedFunctionError("function has a zero or pole on the unit circle")


def _prepare_radius(r: float, R0: float, mods: np.ndarray) -> tuple[float, tuple]:
    if not 1.0 < r < R0:
        raise DomainError(f"radius {r} outside (1, R0)")
    _check_unit_circle(mods)
    rr = nudge_radius(r, mods, R0)
    return rr, ((f"radius nudged from {r!r} to {rr!r}",) if rr != r else ())


def _known_moduli(f: FunctionModel) -> np.ndarray:
    if f.exact_divisors is not None:
        return _moduli(*f.exact_divisors)
    lp = getattr(f, "lattice_poles", None)
    return _moduli(lp) if lp is not None else np.zeros(0)


# ---------------------------------------------------------------- functionals

def proximity_m0(f: FunctionModel, r: float, divisors: tuple | None = None) -> Estimate:
    """Three-circle proximity function of ``f`` at radius ``r``.

    Parameters
    ----------
    f : FunctionModel
        Meromorphic (or multiplicative) model on the annulus.
    r : float
        Radius in ``(1, R0)``; nudged outward when a known zero or pole lies
        within ``1e-6`` of ``|z| = r`` or ``|z| = 1/r``.
    divisors : (Divisor, Divisor), optional
        Zeros and poles used for the proximity check.  Defaults to the
        model's exact divisors when it has them.

    Returns
    -------
    Estimate
        ``m0`` with the summed quadrature error of the three circle means.
    """
    mods = _moduli(*divisors) if divisors is not None else _known_moduli(f)
    rr, warn = _prepare_radius(r, f.domain.R0, mods)
    res = _three_circle(_pos_log_abs(f), rr, level=f.log_abs)
    return Estimate(res.value, res.error, rr, res.nodes, res.converged, warn)


def counting_N0(source, r: float, k=INF, kind: str = "zeros") -> float:
    """Integrated truncated counting function ``N^[k](r)``.

    ``source`` is a :class:`Divisor` or a model; for a model ``kind``
    selects its zero or pole divisor (located numerically when no exact
    divisor is attached).
    """
    if isinstance(source, Divisor):
        return source.counting_N(r, k)
    if kind not in ("zeros", "poles"):
        raise ValueError("kind must be 'zeros' or 'poles'")
    if not 1.0 < r < source.domain.R0:
        raise DomainError(f"radius {r} outside (1, R0)")
    zeros, poles = function_divisors(source, min(source.domain.R0, r * (1 + 1e-3)))
    return (zeros if kind == "zeros" else poles).counting_N(r, k)


def characteristic_T0(f: FunctionModel, r: float, divisors: tuple | None = None) -> Estimate:
    """``T0 = m0 + N0(poles)`` at radius ``r`` (after any nudge of ``r``)."""
    if divisors is None:
        divisors = function_divisors(f, min(f.domain.R0, r * (1 + 1e-3)))
    m = proximity_m0(f, r, divisors)
    N = divisors[1].counting_N(m.radius)
    return Estimate(m.value + N, m.error, m.radius, m.nodes, m.converged, m.warnings)


# ---------------------------------------------------------------- target forms

@dataclass(frozen=True)
class TargetForm:
    """Kahler form on the target, given by its density ``s`` against ``dA / pi``."""

    kind: str
    lattice: tuple | None = None
    a: complex | None = None

    KINDS = ("fubini_study_sphere", "flat_torus", "chern_point_divisor")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"unknown target form {self.kind!r}")
        if self.kind == "flat_torus" and self.lattice is None:
            raise DomainError("flat torus form needs lattice generators")

    @classmethod
    def fubini_study(cls) -> "TargetForm":
        return cls("fubini_study_sphere")

    @classmethod
    def flat_torus(cls, lattice) -> "TargetForm":
        return cls("flat_torus", lattice=tuple(complex(w) for w in lattice))

    @classmethod
    def point_divisor(cls, a) -> "TargetForm":
        return cls("chern_point_divisor", a=a)

    def density(self, f: FunctionModel, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "flat_torus":
            w1, w2 = self.lattice
            area = abs((w1.conjugate() * w2).imag)
            return math.pi * np.abs(f.deriv(z)) ** 2 / area
        # |f'|^2 / (1 + |f|^2)^2 written through L = f'/f and log|f| so that it
        # stays finite when |f| overflows or f has a pole.
        with np.errstate(all="ignore"):
            la = np.abs(f.log_abs(z))
            q = np.exp(-la)
            s = (np.abs(f.logderiv(z)) * q / (1.0 + q * q)) ** 2
            bad = ~np.isfinite(s)
            if np.any(bad):
                zb = z[bad]
                s[bad] = np.abs(f.deriv(zb)) ** 2 / (1.0 + np.abs(f.value(zb)) ** 2) ** 2
        return np.nan_to_num(s, nan=0.0, posinf=0.0)


def _as_model(curve) -> FunctionModel:
    return curve.lift if isinstance(curve, CurveModel) else curve


def _default_form(curve) -> TargetForm:
    if isinstance(curve, CurveModel) and curve.target == "torus":
        return TargetForm.flat_torus(curve.lattice)
    return TargetForm.fubini_study()


def _ring_density(f: FunctionModel, form: TargetForm, rho: np.ndarray, status: list) -> np.ndarray:
    """``a(rho)`` for a batch of log-radii (rows processed in chunks)."""
    out = np.empty(rho.size)
    for i in range(0, rho.size, RING_ROWS):
        rr = rho[i:i + RING_ROWS]
        func = lambda th: form.density(f, np.exp(rr[:, None] + 1j * th[None, :]))
        mean, _, _, ok = periodic_mean_rows(func, rr.size, tol=1e-14)
        if not ok:
            status.append(False)
        out[i:i + RING_ROWS] = 2.0 * np.exp(2.0 * rr) * mean
    return out


def characteristic_area_profile(curve, form: TargetForm | None, radii, threads: int | None = None) -> list[Estimate]:
    """Area characteristic at every radius in ``radii`` (any order).

    The rho axis is cut at ``0`` and at every ``+-log r``; each panel is
    integrated once (moments of ``a`` and ``|rho| a``) and the per-radius
    values are assembled from the panel moments.  Panels are independent
    work items for the thread pool.
    """
    f = _as_model(curve)
    form = form or _default_form(curve)
    radii = np.asarray(list(radii), dtype=float)
    if radii.size == 0:
        return []
    if np.any(radii <= 1.0) or np.any(radii >= f.domain.R0):
        raise DomainError("radii must lie in (1, R0)")
    if f.is_constant():
        return [Estimate(0.0, 0.0, float(r)) for r in radii]
    L = np.log(radii)
    cuts = np.unique(np.concatenate(([0.0], L, -L)))
    panels = list(zip(cuts[:-1], cuts[1:]))

    def work(panel):
        a, b = panel
        status: list = []

        def integrand(rho):
            dens = _ring_density(f, form, rho, status)
            return np.vstack((dens, np.abs(rho) * dens))

        vals, errs, nodes, ok = adaptive_gk_vec(integrand, a, b, abstol=1e-13, reltol=1e-12)
        return vals, errs, nodes, ok and not status

    results = pmap(work, panels, threads)
    lo = cuts[:-1]
    hi = cuts[1:]
    out = []
    for r, Lr in zip(radii, L):
        inside = (lo >= -Lr - 1e-15) & (hi <= Lr + 1e-15)
        val = err = 0.0
        nodes = 0
        ok = True
        for j in np.nonzero(inside)[0]:
            (i0, i1), (e0, e1), n, conv = results[j]
            val += Lr * i0 - i1
            err += Lr * e0 + e1
            nodes += n
            ok &= conv
        warn = () if ok else ("area quadrature did not converge",)
        out.append(Estimate(val, err, float(r), nodes, ok, warn))
    return out


def characteristic_area(curve, form: TargetForm | None, r: float) -> Estimate:
    """Area characteristic ``int_1^r dt/t int_{A(t)} f*Omega`` at one radius.

    Parameters
    ----------
    curve : CurveModel or FunctionModel
        A bare model is treated as a curve into the Riemann sphere.
    form : TargetForm or None
        Target form; ``None`` picks Fubini-Study for sphere and C* targets
        and the flat form for torus targets.
    r : float
        Radius in ``(1, R0)``.
    """
    return characteristic_area_profile(curve, form, [r], threads=1)[0]


# ---------------------------------------------------------------- curve proximity

def _chordal_log_inverse(f: FunctionModel, a):
    """``z -> log 1/||sigma(f(z))||`` for the point divisor ``{a}`` with the chordal metric."""
    if a is None or (isinstance(a, float) and math.isinf(a)):
        return lambda z: 0.5 * np.logaddexp(0.0, 2.0 * f.log_abs(z))
    a = complex(a)
    g = ShiftModel(f, a) if a != 0 else f
    ca = 0.5 * math.log1p(abs(a) ** 2)
    return lambda z: -g.log_abs(z) + 0.5 * np.logaddexp(0.0, 2.0 * f.log_abs(z)) + ca


def _point_target(a):
    if a is None:
        return None
    if isinstance(a, str):
        return None if a.strip().lower() in ("inf", "infinity", "oo") else complex(a.replace("i", "j"))
    if isinstance(a, (int, float)) and math.isinf(a):
        return None
    return complex(a)


def curve_proximity(curve, a, r: float, divisors: tuple | None = None) -> Estimate:
    """Proximity of a sphere or C*-valued curve to the point ``a`` (``None`` or inf for infinity).

    The section norm is the chordal distance, whose curvature form is the
    Fubini-Study form, so the first main theorem holds without an O(1) term.
    """
    if isinstance(curve, CurveModel) and curve.target == "torus":
        raise UnsupportedFunctionError("point-divisor proximity on a torus target is not implemented")
    f = _as_model(curve)
    a = _point_target(a)
    if divisors is None:
        divisors = (_divisor_of_value(f, a, min(f.domain.R0, r * (1 + 1e-3))), Divisor((), -1))
    rr, warn = _prepare_radius(r, f.domain.R0, _moduli(*divisors))
    res = _three_circle(_chordal_log_inverse(f, a), rr)
    return Estimate(res.value, res.error, rr, res.nodes, res.converged, warn)


def _divisor_of_value(f: FunctionModel, a, t: float) -> Divisor:
    """Preimage divisor ``f*{a}`` in ``A(t)`` (``a = None`` means infinity)."""
    if f.is_constant():
        return Divisor((), 1)
    if a is None:
        return function_divisors(f, t)[1]
    g = f if a == 0 else ShiftModel(f, a)
    z = function_divisors(g, t)[0]
    return Divisor(z.points, 1)


# ---------------------------------------------------------------- Green-Jensen

@dataclass(frozen=True)
class GreenJensen:
    lhs: float
    rhs: float
    gap: float
    flux: float
    error: float
    radius: float


def _green_jensen_parts(f: FunctionModel, r: float, divisors):
    if f.is_constant() and f.log_abs(np.array([1.0 + 0j]))[0] == -np.inf:
        raise UnsupportedFunctionError("log|f| is identically -inf")
    rr, _ = _prepare_radius(r, f.domain.R0, _moduli(*divisors))
    zeros, poles = divisors
    lhs = 0.5 * (zeros.counting_N(rr) - poles.counting_N(rr))
    outer = _circle_mean(f.log_abs, rr)
    inner = _circle_mean(f.log_abs, 1.0 / rr)
    unit = _circle_mean(f.log_abs, 1.0)
    circles = outer.scaled(0.5) + inner.scaled(0.5) + unit.scaled(-1.0)
    if f.is_constant():
        flux = QuadResult(0.0, 0.0, 0)
    else:
        flux = _circle_mean(lambda z: np.real(z * f.logderiv(z)), 1.0)
    return rr, lhs, circles, flux


def green_jensen_check(f: FunctionModel, r: float, kappa: float = DC_FLUX_CONSTANT,
                       divisors: tuple | None = None) -> GreenJensen:
    """Both sides of the annulus Green-Jensen identity for ``xi = log|f|``.

    ``lhs = (N(zeros) - N(poles)) / 2`` from the divisor;
    ``rhs`` = half the outer and inner circle means, minus the unit-circle
    mean, minus ``2 kappa log(r) * flux`` with
    ``flux = (1/2pi) * integral over |z|=1 of d log|f| / d rho``.
    """
    if divisors is None:
        divisors = function_divisors(f, min(f.domain.R0, r * (1 + 1e-3)))
    rr, lhs, circles, flux = _green_jensen_parts(f, r, divisors)
    rhs = circles.value - 2.0 * kappa * math.log(rr) * flux.value
    err = circles.error + 2.0 * abs(kappa) * math.log(rr) * flux.error
    return GreenJensen(lhs, rhs, abs(lhs - rhs), flux.value, err, rr)


def calibrate_flux_constant(R0: float = 3.0, r: float = 2.0) -> float:
    """Solve the Green-Jensen identity for the flux coefficient on ``f(z) = z``."""
    from .annulus import Annulus
    from .functions import identity

    f = identity(Annulus(R0))
    rr, lhs, circles, flux = _green_jensen_parts(f, r, f.exact_divisors)
    return (circles.value - lhs) / (2.0 * math.log(rr) * flux.value)


# ---------------------------------------------------------------- first main theorem

@dataclass
class FmtTable:
    radii: np.ndarray
    T_area: np.ndarray
    N: np.ndarray
    m: np.ndarray
    residual: np.ndarray
    error: np.ndarray
    warnings: list

    @property
    def variation(self) -> float:
        return float(np.max(self.residual) - np.min(self.residual))


def _nudged_radii(grid_radii, R0, mods):
    _check_unit_circle(mods)
    radii, warns = [], []
    for r in grid_radii:
        rr = nudge_radius(float(r), mods, R0)
        radii.append(rr)
        warns.append((f"radius nudged from {r!r} to {rr!r}",) if rr != r else ())
    return np.array(radii), warns


def fmt_residual(f, a, grid: RadiusGrid, threads: int | None = None) -> FmtTable:
    """``T_area - N(f*{a}) - m(a)`` over the grid (Fubini-Study form, chordal metric).

    ``a`` may be ``None``/``inf`` for the point at infinity.
    """
    model = _as_model(f)
    if model.is_constant():
        raise DomainError("first main theorem check needs a nonconstant function")
    a = _point_target(a)
    R0 = grid.annulus.R0
    D = _divisor_of_value(model, a, min(R0, grid.radii[-1] * (1 + 1e-3) + 1e-3))
    radii, warns = _nudged_radii(grid.radii, R0, _moduli(D))
    T = characteristic_area_profile(model, TargetForm.fubini_study(), radii, threads)
    h = _chordal_log_inverse(model, a)
    ms = pmap(lambda r: _three_circle(h, r), radii, threads)
    N = np.array([D.counting_N(r) for r in radii])
    Tv = np.array([t.value for t in T])
    mv = np.array([m.value for m in ms])
    err = np.array([t.error + m.error for t, m in zip(T, ms)])
    return FmtTable(radii, Tv, N, mv, Tv - N - mv, err, [list(w) for w in warns])


# ---------------------------------------------------------------- profile

def _level_name(k) -> str:
    return "inf" if k == INF else str(int(k))


@dataclass
class NevanlinnaRecord:
    r: float
    m0: float
    N0: dict
    T0: float
    T_area: float | None
    fmt_residual: float | None
    err_estimate: float
    nodes: int
    warnings: list = field(default_factory=list)


@dataclass
class NevanlinnaProfile:
    """Per-radius table of the functionals of one model.

    ``N0_k{level}`` columns count the pole divisor, so ``T0 = m0 + N0_kinf``.
    """

    grid: RadiusGrid
    levels: tuple
    records: list

    def columns(self) -> list[str]:
        return (["r", "m0"] + [f"N0_k{_level_name(k)}" for k in self.levels]
                + ["T0", "T_area", "fmt_residual", "err_estimate", "warnings"])

    def rows(self) -> list[list]:
        out = []
        for rec in self.records:
            out.append([rec.r, rec.m0] + [rec.N0[k] for k in self.levels]
                       + [rec.T0, _opt(rec.T_area), _opt(rec.fmt_residual), rec.err_estimate,
                          "; ".join(rec.warnings)])
        return out

    def column(self, name: str) -> np.ndarray:
        i = self.columns().index(name)
        return np.array([row[i] for row in self.rows()], dtype=float)


def _opt(x):
    return math.nan if x is None else x


def nevanlinna_profile(f: FunctionModel, grid: RadiusGrid, levels=(1, INF), a="inf",
                       area: bool = True, threads: int | None = None) -> NevanlinnaProfile:
    """Compute ``m0``, truncated ``N0`` of the poles, ``T0``, ``T_area`` and the FMT residual on a grid."""
    levels = tuple(sorted(set(levels) | {INF}))
    R0 = grid.annulus.R0
    t_max = min(R0, grid.radii[-1] * (1 + 1e-3) + 1e-3)
    zeros, poles = function_divisors(f, t_max)
    target = _point_target(a)
    Da = _divisor_of_value(f, target, t_max) if (area and not f.is_constant()) else Divisor((), 1)
    radii, warns = _nudged_radii(grid.radii, R0, np.concatenate((_moduli(zeros, poles), _moduli(Da))))
    ms = pmap(lambda r: _three_circle(_pos_log_abs(f), r, level=f.log_abs), radii, threads)
    T_area = fmt = None
    if area:
        T_area = characteristic_area_profile(f, TargetForm.fubini_study(), radii, threads)
        if not f.is_constant():
            h = _chordal_log_inverse(f, target)
            fmt = pmap(lambda r: _three_circle(h, r), radii, threads)
    records = []
    for i, r in enumerate(radii):
        m = ms[i]
        N0 = {k: poles.counting_N(r, k) for k in levels}
        err = m.error
        nodes = m.nodes
        w = list(warns[i])
        ok = m.converged
        ta = fr = None
        if T_area is not None:
            ta = T_area[i].value
            err += T_area[i].error
            nodes += T_area[i].nodes
            ok &= T_area[i].converged
            if fmt is not None:
                fr = ta - Da.counting_N(r) - fmt[i].value
                err += fmt[i].error
                ok &= fmt[i].converged
            else:
                fr = 0.0
        if not ok:
            w.append("quadrature did not converge")
        if err > FLAG_TOL:
            w.append(f"error estimate {err:.3g} exceeds {FLAG_TOL:g}")
        records.append(NevanlinnaRecord(float(r), m.value, N0, m.value + N0[INF], ta, fr, err, nodes, w))
    return NevanlinnaProfile(grid, levels, records)
