"""Zero/pole location by the argument principle on log-polar boxes.

A box is a rectangle ``[rho1, rho2] x [theta1, theta2]`` in ``w = log z``
coordinates.  Along its boundary we integrate

    M_j = 1/(2 pi i) * contour integral of ((z - c)/h)^j f'(z)/f(z) dz,   j = 0..4

with composite Gauss-Legendre panels doubled until the moments settle.  ``M_0``
is the net winding (zeros minus poles); the higher moments are power sums of
the enclosed points, which tell a single point of multiplicity ``|M_0|`` apart
from a cluster.  Boxes that fail the single-point test are quartered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .annulus import Divisor, RadiusGrid
from .errors import BoundaryProximityError, DomainError, UnresolvedBoxError
from .functions import FunctionModel
from .quadrature import gl_nodes

TWO_PI = 2.0 * math.pi
N_MOMENTS = 5
WINDING_TOL = 1e-3
MOMENT_TOL = 1e-12
ISOLATION_TOL = 1e-7
MIN_PANELS = 4
MAX_PANELS = 8192
MAX_DEPTH = 60
MIN_DIAMETER = 1e-9
DIVISOR_MARGIN = 1e-6
# Deterministic sequence of split fractions tried when a cut passes near a point.
SPLIT_FRACTIONS = (0.5, 0.4619, 0.5381, 0.4237, 0.5763, 0.3852, 0.6148)


@dataclass(frozen=True)
class LogPolarBox:
    rho: tuple[float, float]
    theta: tuple[float, float]
    net_winding: int | None = None
    depth: int = 0

    @property
    def center(self) -> complex:
        return complex(np.exp(0.5 * (self.rho[0] + self.rho[1]) + 0.5j * (self.theta[0] + self.theta[1])))

    @property
    def scale(self) -> float:
        """Half the larger side, measured in the z-plane at the box centre."""
        d = max(self.rho[1] - self.rho[0], self.theta[1] - self.theta[0])
        return 0.5 * d * math.exp(0.5 * (self.rho[0] + self.rho[1]))

    @property
    def diameter(self) -> float:
        return math.exp(self.rho[1]) * math.hypot(self.rho[1] - self.rho[0], self.theta[1] - self.theta[0])

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        rho, th = math.log(abs(z)), math.atan2(z.imag, z.real)
        # Bring the angle into the box's window.
        th = self.theta[0] + ((th - self.theta[0]) % TWO_PI)
        s = slack * max(self.rho[1] - self.rho[0], self.theta[1] - self.theta[0])
        return (self.rho[0] - s <= rho <= self.rho[1] + s) and (self.theta[0] - s <= th <= self.theta[1] + s)

    def split(self, frac_rho: float = 0.5, frac_theta: float = 0.5) -> list["LogPolarBox"]:
        r0, r1 = self.rho
        t0, t1 = self.theta
        rm = r0 + frac_rho * (r1 - r0)
        tm = t0 + frac_theta * (t1 - t0)
        d = self.depth + 1
        return [LogPolarBox((r0, rm), (t0, tm), depth=d), LogPolarBox((rm, r1), (t0, tm), depth=d),
                LogPolarBox((r0, rm), (tm, t1), depth=d), LogPolarBox((rm, r1), (tm, t1), depth=d)]

    def with_winding(self, w: int) -> "LogPolarBox":
        return LogPolarBox(self.rho, self.theta, w, self.depth)


def _edges(box: LogPolarBox) -> list[tuple[complex, complex]]:
    (r0, r1), (t0, t1) = box.rho, box.theta
    a, b, c, d = complex(r0, t0), complex(r1, t0), complex(r1, t1), complex(r0, t1)
    return [(a, b), (b, c), (c, d), (d, a)]


def _edge_moments(f: FunctionModel, a: complex, b: complex, c: complex, h: float, powers) -> np.ndarray:
    """Moments contributed by the straight log-polar edge ``w = a -> b``, refined by panel doubling."""
    prev = None
    n_panels = MIN_PANELS
    while n_panels <= MAX_PANELS:
        s, ws = gl_nodes(n_panels)
        z = np.exp(a + (b - a) * s)
        with np.errstate(all="ignore"):
            base = f.logderiv(z) * z * (b - a) * ws
            u = (z - c) / h
            M = np.array([np.sum(base * u ** j) for j in powers]) / (2j * math.pi)
        if not np.all(np.isfinite(M)):
            raise BoundaryProximityError(f"integrand not finite on the edge {a} -> {b}")
        if prev is not None:
            scale = max(1.0, float(np.max(np.abs(M))))
            if np.max(np.abs(M - prev)) <= MOMENT_TOL * scale:
                return M
        prev = M
        n_panels *= 2
    raise BoundaryProximityError(f"contour quadrature did not settle on the edge {a} -> {b}")


def box_moments(f: FunctionModel, box: LogPolarBox, n_moments: int = N_MOMENTS) -> np.ndarray:
    """Scaled argument-principle moments ``M_0..M_{n-1}`` of ``f`` on the box boundary.

    ``M_j = (1/2 pi i) * contour integral of (f'/f) ((z - c)/h)^j dz`` with
    ``c`` the box centre and ``h`` its scale.  Each edge is refined on its
    own.  Raises :class:`BoundaryProximityError` if an edge does not settle,
    which happens when a zero or pole sits (nearly) on it.
    """
    c, h = box.center, box.scale
    powers = np.arange(n_moments)
    return sum(_edge_moments(f, a, b, c, h, powers) for a, b in _edges(box))


def winding_count(f: FunctionModel, box: LogPolarBox) -> int:
    """Net number of zeros minus poles of ``f`` inside the box."""
    M0 = box_moments(f, box, 1)[0]
    w = round(M0.real)
    if abs(M0 - w) > WINDING_TOL:
        raise BoundaryProximityError(f"winding {M0:.6g} is not an integer on {box}")
    return int(w)


@dataclass
class LocatedDivisor:
    zeros: Divisor
    poles: Divisor
    t: float
    residual_winding: int = 0
    boxes_evaluated: int = 0
    nudges: list = field(default_factory=list)

    def rows(self):
        """(re, im, multiplicity, kind) rows sorted by modulus then argument."""
        out = [(p.real, p.imag, m, "zero") for p, m in self.zeros.points]
        out += [(p.real, p.imag, m, "pole") for p, m in self.poles.points]
        out.sort(key=lambda r: (math.hypot(r[0], r[1]), math.atan2(r[1], r[0]), r[3]))
        return out


class _Locator:
    def __init__(self, f: FunctionModel):
        self.f = f
        self.evaluated = 0
        self.found: list[tuple[complex, int]] = []

    def moments(self, box):
        self.evaluated += 1
        M = box_moments(self.f, box)
        w = round(M[0].real)
        if abs(M[0] - w) > WINDING_TOL:
            raise BoundaryProximityError(f"winding {M[0]:.6g} is not an integer on {box}")
        return int(w), M

    def isolated_point(self, box, W, M):
        if W == 0:
            return None
        mu = M[1] / W
        for j in range(2, len(M)):
            if abs(M[j] / W - mu ** j) > ISOLATION_TOL * max(1.0, abs(mu) ** j):
                return None
        z0 = box.center + box.scale * mu
        if z0 == 0 or not box.contains(z0, slack=1e-6):
            return None
        return complex(z0)

    def is_empty(self, W, M):
        return W == 0 and np.all(np.abs(M[1:]) <= ISOLATION_TOL)

    def process(self, box, W, M):
        stack = [(box, W, M)]
        while stack:
            box, W, M = stack.pop()
            if self.is_empty(W, M):
                continue
            z0 = self.isolated_point(box, W, M)
            if z0 is not None:
                self.found.append((z0, W))
                continue
            if box.depth >= MAX_DEPTH or box.diameter < MIN_DIAMETER:
                raise UnresolvedBoxError(
                    f"could not isolate divisor in {box} (net winding {W}); zero-pole collision or tight cluster",
                    box=box.with_winding(W))
            stack.extend(self.split(box, W))

    def split(self, box, W):
        last = None
        for fr in SPLIT_FRACTIONS:
            for ft in SPLIT_FRACTIONS[:3]:
                try:
                    kids = box.split(fr, ft)
                    res = [(k,) + self.moments(k) for k in kids]
                except BoundaryProximityError as exc:
                    last = exc
                    continue
                if sum(r[1] for r in res) != W:
                    last = BoundaryProximityError(f"child windings do not sum to {W} for {box}")
                    continue
                return [(k.with_winding(w), w, M) for k, w, M in res]
        raise last


def _initial_boxes(t: float, rotation: float) -> list[LogPolarBox]:
    L = math.log(t)
    th = rotation + TWO_PI * np.arange(5) / 4
    return [LogPolarBox((-L, L), (float(th[i]), float(th[i + 1]))) for i in range(4)]


def _ranked_rotations(f: FunctionModel, t: float, n_candidates: int = 16, n_tries: int = 6,
                      samples: int = 1024) -> list[float]:
    """Sector rotations ordered by how far their rays stay from the divisor.

    A ray passing near a zero or pole shows up as a large ``|z f'/f|``;
    candidates are ranked by the peak of that quantity over their four rays.
    """
    L = math.log(t)
    rho = np.linspace(-L, L, samples)
    cands = 0.1234 + (math.pi / 2) * np.arange(n_candidates) / n_candidates
    scores = []
    for rot in cands:
        th = rot + (math.pi / 2) * np.arange(4)
        z = np.exp(rho[None, :] + 1j * th[:, None]).ravel()
        with np.errstate(all="ignore"):
            q = np.abs(z * f.logderiv(z))
        scores.append(float(np.max(np.where(np.isfinite(q), q, np.inf))))
    order = np.argsort(np.array(scores), kind="stable")
    return [float(cands[i]) for i in order[:n_tries]]


def locate_divisor(f: FunctionModel, t: float) -> LocatedDivisor:
    """Locate all zeros and poles of ``f`` in ``A(t) = {1/t < |z| < t}``.

    Parameters
    ----------
    f : FunctionModel
        Model evaluated through ``f.logderiv``.
    t : float
        Outer radius of the searched sub-annulus, ``1 < t <= R0``.  The
        circles ``|z| = t`` and ``|z| = 1/t`` must avoid the divisor.

    Returns
    -------
    LocatedDivisor
        Zeros and poles with multiplicities, plus the residual winding
        (total boundary winding minus located zeros plus located poles),
        which is 0 on success.
    """
    if not 1.0 < t <= f.domain.R0:
        raise DomainError(f"locate radius {t} outside (1, R0]")
    if f.is_constant():
        return LocatedDivisor(Divisor((), 1), Divisor((), -1), t)
    last = None
    for rotation in _ranked_rotations(f, t):
        loc = _Locator(f)
        try:
            start = [(b,) + loc.moments(b) for b in _initial_boxes(t, rotation)]
        except BoundaryProximityError as exc:
            last = exc
            continue
        for b, W, M in start:
            loc.process(b.with_winding(W), W, M)
        total = sum(W for _, W, _ in start)
        zeros = Divisor(tuple((z, m) for z, m in loc.found if m > 0), 1, merge_tol=1e-9)
        poles = Divisor(tuple((z, -m) for z, m in loc.found if m < 0), -1, merge_tol=1e-9)
        resid = total - (zeros.degree() - poles.degree())
        return LocatedDivisor(zeros, poles, t, resid, loc.evaluated)
    raise BoundaryProximityError(f"circles |z| = {t}, {1 / t} pass too close to the divisor of {f.spec}") from last


def nudge_radius(r: float, moduli, R0: float, margin: float = DIVISOR_MARGIN, guard_unit=False):
    """Push ``r`` outward until both ``|z| = r`` and ``|z| = 1/r`` clear every modulus by ``margin``.

    Returns the (possibly unchanged) radius.  ``guard_unit`` additionally
    rejects divisor points on the unit circle, which cannot be moved.
    """
    mods = np.asarray(list(moduli), dtype=float)
    if mods.size == 0:
        return r
    if guard_unit and np.any(np.abs(mods - 1.0) < margin):
        from .errors import UnsupportedFunctionError
        raise UnsupportedFunctionError("function has a zero or pole on the unit circle")
    step = 10 * margin
    for _ in range(1000):
        if r >= R0:
            break
        if np.all(np.abs(mods - r) >= margin) and np.all(np.abs(mods - 1.0 / r) >= margin):
            return r
        r += step
    raise DomainError(f"cannot nudge radius {r!r} clear of the divisor inside the annulus")


#: relative radius offsets tried when the locate circles hit the divisor;
#: outward first, then a few small inward steps as a last resort
NUDGE_OFFSETS = (0.0, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, -1e-5, -1e-4, -1e-3)


def divisors_upto(f: FunctionModel, t: float, prefer_exact: bool = True):
    """(zeros, poles, located) of ``f`` in ``A(t)``, located numerically when not known exactly.

    When the circles ``|z| = t, 1/t`` pass too close to the divisor the
    search radius is moved by the offsets in :data:`NUDGE_OFFSETS` (capped
    at ``R0``); the move is recorded in ``located.nudges``.  An inward move
    can miss points in the thin shell it gives up.
    """
    if prefer_exact and f.exact_divisors is not None:
        z, p = f.exact_divisors
        return z.within(t), p.within(t), None
    R0 = f.domain.R0
    tried = []
    last = None
    for d in NUDGE_OFFSETS:
        tt = min(t * (1.0 + d), R0)
        if tt in tried or tt <= 1.0:
            continue
        tried.append(tt)
        try:
            located = locate_divisor(f, tt)
            break
        except BoundaryProximityError as exc:
            last = exc
    else:
        raise last
    if tt != t:
        located.nudges.append((t, tt))
    return located.zeros.within(t), located.poles.within(t), located


@dataclass
class CountingTable:
    """Unintegrated counting data on a radius grid for both branches of t."""

    radii: np.ndarray
    k: float
    zeros_outer: np.ndarray
    zeros_inner: np.ndarray
    poles_outer: np.ndarray
    poles_inner: np.ndarray
    nudged: list


def counting_sequence(f: FunctionModel, grid: RadiusGrid, k=math.inf, prefer_exact: bool = True) -> CountingTable:
    """``n^[k](t)`` of the zero and pole divisors at ``t = r`` and at the mirror ``t = 1/r``."""
    R0 = grid.annulus.R0
    t_max = min(R0, grid.radii[-1] * (1 + 1e-3) + 1e-3)
    zeros, poles, _ = divisors_upto(f, t_max, prefer_exact)
    mods = np.concatenate((np.abs(zeros.locations), np.abs(poles.locations)))
    radii, nudged = [], []
    for r in grid.radii:
        rr = nudge_radius(r, mods, R0)
        if rr != r:
            nudged.append((r, rr))
        radii.append(rr)
    zo = np.array([zeros.counting(r, k) for r in radii])
    zi = np.array([zeros.counting(1 / r, k) for r in radii])
    po = np.array([poles.counting(r, k) for r in radii])
    pi = np.array([poles.counting(1 / r, k) for r in radii])
    return CountingTable(np.array(radii), k, zo, zi, po, pi, nudged)
