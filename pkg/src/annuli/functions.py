"""Evaluatable meromorphic function models on an annulus.

Models are immutable.  The vectorised methods (``value``, ``deriv``,
``deriv2``, ``logderiv``, ``log_abs``) take and return numpy arrays and
produce ``inf`` at exact poles; the scalar methods ``evaluate`` and
``derivative`` return the :data:`POLE` marker instead so callers can branch
on it deterministically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .annulus import Annulus, Divisor
from .elliptic import Lattice
from .errors import DomainError


class _PoleMarker:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"

    def __reduce__(self):
        return (_PoleMarker, ())


POLE = _PoleMarker()


def _arr(z):
    return np.asarray(z, dtype=complex)


class FunctionModel:
    """Interface shared by every model.

    Subclasses implement ``value`` and ``deriv`` and usually override
    ``logderiv`` and ``log_abs`` with closed forms that stay finite where
    the plain quotient would overflow.
    """

    domain: Annulus
    #: (zeros, poles) inside the domain when known in closed form, else None
    exact_divisors: tuple[Divisor, Divisor] | None = None
    is_multiplicative: bool = False
    #: True when the model is known to have no poles in the domain
    holomorphic: bool = False
    spec: str = "?"

    def value(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError

    def deriv2(self, z):
        raise NotImplementedError(f"{type(self).__name__} has no second derivative")

    def logderiv(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.deriv(z) / self.value(z)

    def log_abs(self, z):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.value(z)))

    def is_constant(self) -> bool:
        return False

    def _at_known_pole(self, z: complex) -> bool:
        if self.exact_divisors is None:
            return False
        poles = self.exact_divisors[1]
        return any(z == p for p, _ in poles.points)

    def evaluate(self, z: complex):
        z = complex(z)
        if self._at_known_pole(z):
            return POLE
        with np.errstate(all="ignore"):
            v = complex(self.value(np.array([z]))[0])
        return v if cmath.isfinite(v) else POLE

    def derivative(self, z: complex):
        z = complex(z)
        if self._at_known_pole(z):
            return POLE
        with np.errstate(all="ignore"):
            v = complex(self.deriv(np.array([z]))[0])
        return v if cmath.isfinite(v) else POLE

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"


def _same_domain(f: FunctionModel, g: FunctionModel) -> Annulus:
    if f.domain != g.domain:
        raise DomainError("models live on different annuli")
    return f.domain


def _signed_merge(parts, tol=1e-12):
    """Combine signed (location, multiplicity) lists, cancelling coincident points."""
    acc: list[list] = []
    for loc, mult in parts:
        for e in acc:
            if abs(e[0] - loc) <= tol:
                e[1] += mult
                break
        else:
            acc.append([complex(loc), mult])
    zeros = Divisor(tuple((p, m) for p, m in acc if m > 0), 1)
    poles = Divisor(tuple((p, -m) for p, m in acc if m < 0), -1)
    return zeros, poles


class RationalModel(FunctionModel):
    """``coeff * z**offset * prod (z-a)^m / prod (z-b)^n`` in factored form."""

    def __init__(self, zeros, poles, coeff, offset: int, domain: Annulus, spec: str | None = None):
        self.domain = domain
        self.zeros = tuple((complex(a), int(m)) for a, m in zeros)
        self.poles = tuple((complex(b), int(n)) for b, n in poles)
        self.coeff = complex(coeff)
        self.offset = int(offset)
        for _, m in self.zeros + self.poles:
            if m < 1:
                raise DomainError("root multiplicities must be >= 1")
        for a, _ in self.zeros:
            for b, _ in self.poles:
                if abs(a - b) <= 1e-12:
                    raise DomainError(f"zeros and poles share the root {a}")
        if any(a == 0 for a, _ in self.zeros + self.poles):
            raise DomainError("use the Laurent offset for roots at the origin")
        self._za = np.array([a for a, _ in self.zeros], dtype=complex)
        self._zm = np.array([m for _, m in self.zeros], dtype=float)
        self._pa = np.array([b for b, _ in self.poles], dtype=complex)
        self._pm = np.array([n for _, n in self.poles], dtype=float)
        self.exact_divisors = (
            Divisor(self.zeros, 1).restrict(domain) if self.coeff != 0 else Divisor((), 1),
            Divisor(self.poles, -1).restrict(domain),
        )
        self.is_multiplicative = self.coeff != 0
        self.holomorphic = len(self.exact_divisors[1]) == 0
        self.spec = spec or f"rational({list(self.zeros)};{list(self.poles)};{self.coeff};{self.offset})"

    def is_constant(self) -> bool:
        return self.coeff == 0 or (not self.zeros and not self.poles and self.offset == 0)

    def _factors(self, z):
        z = _arr(z)[..., None]
        return z, z - self._za, z - self._pa

    def value(self, z):
        z = _arr(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            num = np.prod((z[..., None] - self._za) ** self._zm, axis=-1)
            den = np.prod((z[..., None] - self._pa) ** self._pm, axis=-1)
            return self.coeff * z ** self.offset * num / den

    def logderiv(self, z):
        z = _arr(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.offset / z
            out = out + np.sum(self._zm / (z[..., None] - self._za), axis=-1)
            out = out - np.sum(self._pm / (z[..., None] - self._pa), axis=-1)
        return out

    def deriv(self, z):
        # Product rule over the factors so exact zeros stay finite.
        z = _arr(z)
        if self.coeff == 0:
            return np.zeros_like(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = z[..., None] - np.concatenate((self._za, self._pa))
            e = np.concatenate((self._zm, -self._pm))
            F = d ** e
            D = e * d ** (e - 1)
            # Laurent factor z**offset
            F = np.concatenate((F, (z ** self.offset)[..., None]), axis=-1)
            D = np.concatenate((D, (self.offset * z ** (self.offset - 1.0))[..., None]), axis=-1)
            n = F.shape[-1]
            pre = np.ones_like(F)
            suf = np.ones_like(F)
            for j in range(1, n):
                pre[..., j] = pre[..., j - 1] * F[..., j - 1]
                suf[..., n - 1 - j] = suf[..., n - j] * F[..., n - j]
            return self.coeff * np.sum(D * pre * suf, axis=-1)

    def deriv2(self, z):
        z = _arr(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            L = self.logderiv(z)
            dL = -self.offset / z ** 2
            dL = dL - np.sum(self._zm / (z[..., None] - self._za) ** 2, axis=-1)
            dL = dL + np.sum(self._pm / (z[..., None] - self._pa) ** 2, axis=-1)
            return self.value(z) * (L * L + dL)

    def log_abs(self, z):
        z = _arr(z)
        with np.errstate(divide="ignore"):
            out = math.log(abs(self.coeff)) if self.coeff != 0 else -np.inf
            out = out + self.offset * np.log(np.abs(z))
            out = out + np.sum(self._zm * np.log(np.abs(z[..., None] - self._za)), axis=-1)
            out = out - np.sum(self._pm * np.log(np.abs(z[..., None] - self._pa)), axis=-1)
        return out


def make_rational(zeros: Sequence, poles: Sequence, coeff: complex, laurent_offset: int,
                  domain: Annulus) -> RationalModel:
    """Rational model from factored zero and pole lists of ``(root, multiplicity)``."""
    return RationalModel(zeros, poles, coeff, laurent_offset, domain)


def constant(c: complex, domain: Annulus) -> RationalModel:
    return RationalModel((), (), c, 0, domain, spec=repr(complex(c)))


def identity(domain: Annulus) -> RationalModel:
    return RationalModel((), (), 1, 1, domain, spec="z")


class PolynomialModel(FunctionModel):
    """Polynomial from ascending coefficients."""

    def __init__(self, coeffs, domain: Annulus, spec: str | None = None):
        self.domain = domain
        self.coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1, dtype=complex)
        P = np.polynomial.Polynomial
        self._p = P(self.coeffs)
        self._d1 = self._p.deriv(1)
        self._d2 = self._p.deriv(2)
        self.holomorphic = True
        self.is_multiplicative = bool(np.any(self.coeffs != 0))
        self.spec = spec or "poly(" + ",".join(repr(complex(c)) for c in self.coeffs) + ")"

    def is_constant(self) -> bool:
        return self.coeffs.size <= 1

    def value(self, z):
        return self._p(_arr(z))

    def deriv(self, z):
        return self._d1(_arr(z)) + 0j

    def deriv2(self, z):
        return self._d2(_arr(z)) + 0j


class BoundaryPowerModel(FunctionModel):
    """``c / (R0 - z)**p``, holomorphic on the annulus and singular at ``z = R0``."""

    def __init__(self, c: complex, p: int, domain: Annulus, spec: str | None = None):
        if int(p) != p or p < 1:
            raise DomainError("boundary power must be a positive integer")
        self.domain = domain
        self.c = complex(c)
        self.p = int(p)
        self.holomorphic = True
        self.is_multiplicative = self.c != 0
        self.exact_divisors = (Divisor((), 1), Divisor((), -1)) if self.c != 0 else None
        self.spec = spec or (f"{self.c!r}/(R0-z)" + (f"^{self.p}" if self.p != 1 else ""))

    def is_constant(self) -> bool:
        return self.c == 0

    def value(self, z):
        return self.c / (self.domain.R0 - _arr(z)) ** self.p

    def deriv(self, z):
        return self.c * self.p / (self.domain.R0 - _arr(z)) ** (self.p + 1)

    def deriv2(self, z):
        return self.c * self.p * (self.p + 1) / (self.domain.R0 - _arr(z)) ** (self.p + 2)

    def logderiv(self, z):
        return self.p / (self.domain.R0 - _arr(z))

    def log_abs(self, z):
        return math.log(abs(self.c)) - self.p * np.log(np.abs(self.domain.R0 - _arr(z)))


class ExpModel(FunctionModel):
    """``exp(g)`` for a holomorphic exponent ``g``; never zero, never a pole."""

    def __init__(self, g: FunctionModel, spec: str | None = None):
        if not g.holomorphic:
            raise DomainError(f"exponent {g.spec} must be holomorphic on the annulus")
        self.g = g
        self.domain = g.domain
        self.holomorphic = True
        self.is_multiplicative = True
        self.exact_divisors = (Divisor((), 1), Divisor((), -1))
        self.spec = spec or f"exp({g.spec})"

    def is_constant(self) -> bool:
        return self.g.is_constant()

    def value(self, z):
        with np.errstate(over="ignore"):
            return np.exp(self.g.value(z))

    def deriv(self, z):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.g.deriv(z) * np.exp(self.g.value(z))

    def deriv2(self, z):
        gp = self.g.deriv(z)
        with np.errstate(over="ignore", invalid="ignore"):
            return (self.g.deriv2(z) + gp * gp) * np.exp(self.g.value(z))

    def logderiv(self, z):
        return self.g.deriv(z)

    def log_abs(self, z):
        return np.real(self.g.value(z))


def compose_exp(g: FunctionModel) -> ExpModel:
    """Model of ``exp(g)``; rejects exponents that may have poles."""
    return ExpModel(g)


class PowerModel(FunctionModel):
    """``z**alpha`` for real alpha: multiplicative, single-valued modulus.

    The value uses the principal branch, so it jumps across the negative
    real axis when alpha is not an integer; ``log_abs`` and ``logderiv``
    are single-valued.
    """

    def __init__(self, alpha: float, domain: Annulus, spec: str | None = None):
        self.alpha = float(alpha)
        self.domain = domain
        self.holomorphic = self.alpha == int(self.alpha)
        self.is_multiplicative = True
        self.exact_divisors = (Divisor((), 1), Divisor((), -1))
        self.spec = spec or f"zpow({self.alpha!r})"

    def is_constant(self) -> bool:
        return self.alpha == 0

    def value(self, z):
        return np.exp(self.alpha * np.log(_arr(z)))

    def deriv(self, z):
        z = _arr(z)
        return self.alpha * np.exp((self.alpha - 1) * np.log(z))

    def deriv2(self, z):
        z = _arr(z)
        return self.alpha * (self.alpha - 1) * np.exp((self.alpha - 2) * np.log(z))

    def logderiv(self, z):
        return self.alpha / _arr(z)

    def log_abs(self, z):
        return self.alpha * np.log(np.abs(_arr(z)))


class WeierstrassModel(FunctionModel):
    """Weierstrass ``wp`` of a lattice, restricted to the annulus."""

    def __init__(self, w1: complex, w2: complex, domain: Annulus, spec: str | None = None):
        self.lattice = Lattice(w1, w2)
        self.domain = domain
        self.is_multiplicative = True
        self.lattice_poles = Divisor(
            tuple((w, 2) for w in self.lattice.points_within(1 / domain.R0, domain.R0)), -1)
        self.holomorphic = len(self.lattice_poles) == 0
        self.spec = spec or f"wp({complex(w1)!r},{complex(w2)!r})"

    def _at_known_pole(self, z: complex) -> bool:
        return self.lattice.is_lattice_point(z)

    def value(self, z):
        return self.lattice.wp(z)

    def deriv(self, z):
        return self.lattice.wp_prime(z)

    def deriv2(self, z):
        p = self.lattice.wp(z)
        return 6 * p * p - self.lattice.g2 / 2

    def logderiv(self, z):
        p, dp = self.lattice.wp_both(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return dp / p


def weierstrass_p(lattice: tuple[complex, complex], z: complex):
    """``wp(z)`` for the lattice spanned by ``lattice``, or :data:`POLE` at lattice points."""
    L = Lattice(*lattice)
    if L.is_lattice_point(z):
        return POLE
    return complex(L.wp(np.array([complex(z)]))[0])


class SumModel(FunctionModel):
    def __init__(self, f: FunctionModel, g: FunctionModel, spec: str | None = None):
        self.f, self.g = f, g
        self.domain = _same_domain(f, g)
        self.holomorphic = f.holomorphic and g.holomorphic
        self.is_multiplicative = f.is_multiplicative and g.is_multiplicative
        self.spec = spec or f"({f.spec})+({g.spec})"

    def is_constant(self) -> bool:
        return self.f.is_constant() and self.g.is_constant()

    def value(self, z):
        return self.f.value(z) + self.g.value(z)

    def deriv(self, z):
        return self.f.deriv(z) + self.g.deriv(z)

    def deriv2(self, z):
        return self.f.deriv2(z) + self.g.deriv2(z)


class ShiftModel(FunctionModel):
    """``f - a``; keeps ``log_abs`` finite where ``|f|`` overflows."""

    def __init__(self, f: FunctionModel, a: complex, spec: str | None = None):
        self.f = f
        self.a = complex(a)
        self.domain = f.domain
        self.holomorphic = f.holomorphic
        self.is_multiplicative = f.is_multiplicative
        if self.a == 0:
            self.exact_divisors = f.exact_divisors
        elif f.exact_divisors is not None:
            self.exact_divisors = None
        self.spec = spec or f"shift({f.spec};{self.a!r})"

    def is_constant(self) -> bool:
        return self.f.is_constant()

    def value(self, z):
        return self.f.value(z) - self.a

    def deriv(self, z):
        return self.f.deriv(z)

    def deriv2(self, z):
        return self.f.deriv2(z)

    def logderiv(self, z):
        with np.errstate(all="ignore"):
            la = self.f.log_abs(z)
            big = la > 40.0
            if not np.any(big):
                return self.f.deriv(z) / (self.f.value(z) - self.a)
            # f'/(f - a) = (f'/f) / (1 - a/f) and a/f is negligible when |f| > e^40
            return np.where(big, self.f.logderiv(z),
                            self.f.deriv(z) / (self.f.value(z) - self.a))

    def log_abs(self, z):
        with np.errstate(all="ignore"):
            la = self.f.log_abs(z)
            big = la > 40.0
            direct = np.log(np.abs(np.where(big, 0.0, self.f.value(z)) - self.a))
            return np.where(big, la, direct)


class ProductModel(FunctionModel):
    def __init__(self, f: FunctionModel, g: FunctionModel, spec: str | None = None):
        self.f, self.g = f, g
        self.domain = _same_domain(f, g)
        self.holomorphic = f.holomorphic and g.holomorphic
        self.is_multiplicative = f.is_multiplicative and g.is_multiplicative
        if f.exact_divisors is not None and g.exact_divisors is not None:
            parts = [(p, m) for D in (f.exact_divisors[0], g.exact_divisors[0]) for p, m in D.points]
            parts += [(p, -m) for D in (f.exact_divisors[1], g.exact_divisors[1]) for p, m in D.points]
            self.exact_divisors = _signed_merge(parts)
        self.spec = spec or f"mul({f.spec};{g.spec})"

    def is_constant(self) -> bool:
        return self.f.is_constant() and self.g.is_constant()

    def value(self, z):
        return self.f.value(z) * self.g.value(z)

    def deriv(self, z):
        return self.f.deriv(z) * self.g.value(z) + self.f.value(z) * self.g.deriv(z)

    def deriv2(self, z):
        return (self.f.deriv2(z) * self.g.value(z) + 2 * self.f.deriv(z) * self.g.deriv(z)
                + self.f.value(z) * self.g.deriv2(z))

    def logderiv(self, z):
        return self.f.logderiv(z) + self.g.logderiv(z)

    def log_abs(self, z):
        return self.f.log_abs(z) + self.g.log_abs(z)


class QuotientModel(FunctionModel):
    def __init__(self, f: FunctionModel, g: FunctionModel, spec: str | None = None):
        self.f, self.g = f, g
        self.domain = _same_domain(f, g)
        self.is_multiplicative = f.is_multiplicative and g.is_multiplicative
        if f.exact_divisors is not None and g.exact_divisors is not None:
            parts = [(p, m) for p, m in f.exact_divisors[0].points]
            parts += [(p, m) for p, m in g.exact_divisors[1].points]
            parts += [(p, -m) for p, m in f.exact_divisors[1].points]
            parts += [(p, -m) for p, m in g.exact_divisors[0].points]
            self.exact_divisors = _signed_merge(parts)
            self.holomorphic = len(self.exact_divisors[1]) == 0
        self.spec = spec or f"div({f.spec};{g.spec})"

    def is_constant(self) -> bool:
        return self.f.is_constant() and self.g.is_constant()

    def value(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.f.value(z) / self.g.value(z)

    def deriv(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            gv = self.g.value(z)
            return (self.f.deriv(z) * gv - self.f.value(z) * self.g.deriv(z)) / gv ** 2

    def deriv2(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            fv, f1, f2 = self.f.value(z), self.f.deriv(z), self.f.deriv2(z)
            gv, g1, g2 = self.g.value(z), self.g.deriv(z), self.g.deriv2(z)
            return (f2 * gv ** 2 - 2 * f1 * g1 * gv - fv * g2 * gv + 2 * fv * g1 ** 2) / gv ** 3

    def logderiv(self, z):
        return self.f.logderiv(z) - self.g.logderiv(z)

    def log_abs(self, z):
        return self.f.log_abs(z) - self.g.log_abs(z)


class LogDerivativeModel(FunctionModel):
    """``f'/f`` as a model in its own right (its second derivative is not provided)."""

    def __init__(self, f: FunctionModel, spec: str | None = None):
        self.f = f
        self.domain = f.domain
        self.is_multiplicative = True
        if f.exact_divisors is not None:
            pts = {p for D in f.exact_divisors for p, _ in D.points}
            self.exact_divisors = None
            self.holomorphic = not pts
        self.spec = spec or f"logderiv({f.spec})"

    def is_constant(self) -> bool:
        return self.f.is_constant()

    def value(self, z):
        if self.f.is_constant():
            return np.zeros_like(_arr(z))
        return self.f.logderiv(z)

    def deriv(self, z):
        if self.f.is_constant():
            return np.zeros_like(_arr(z))
        L = self.f.logderiv(z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if isinstance(self.f, ExpModel):
                return self.f.g.deriv2(z)
            return self.f.deriv2(z) / self.f.value(z) - L * L


class DerivativeModel(FunctionModel):
    """``F'`` as a model; used for the pulled-back invariant form of a torus curve."""

    def __init__(self, F: FunctionModel, spec: str | None = None):
        self.F = F
        self.domain = F.domain
        self.holomorphic = F.holomorphic
        self.is_multiplicative = True
        self.spec = spec or f"deriv({F.spec})"

    def is_constant(self) -> bool:
        return self.F.is_constant() or (
            isinstance(self.F, (RationalModel, PolynomialModel)) and _is_affine(self.F))

    def value(self, z):
        return self.F.deriv(z)

    def deriv(self, z):
        return self.F.deriv2(z)


def _is_affine(F) -> bool:
    if isinstance(F, PolynomialModel):
        return F.coeffs.size <= 2
    return not F.zeros and not F.poles and F.offset in (0, 1)


def hermite_exponent(a: complex, z0: complex, curvature: complex, domain: Annulus) -> PolynomialModel:
    """Quadratic ``g`` with ``g(z0) = Log a``, ``g'(z0) = 0`` and ``g''(z0) = 2*curvature``.

    ``exp(g) - a`` then has a double zero at ``z0``; its other zeros sit at
    ``z0 +- sqrt(2*pi*i*k / curvature)`` for nonzero integers k.
    """
    if a == 0:
        raise DomainError("target value must be nonzero")
    la = cmath.log(a)
    c = complex(curvature)
    z0 = complex(z0)
    return PolynomialModel([la + c * z0 * z0, -2 * c * z0, c], domain,
                           spec=f"hermite({complex(a)!r},{z0!r},{c!r})")


def central_difference(model: FunctionModel, z, h: float = 1e-5):
    """Fourth-order central difference of ``model.value``; a test probe only."""
    z = _arr(z)
    v = model.value
    return (-v(z + 2 * h) + 8 * v(z + h) - 8 * v(z - h) + v(z - 2 * h)) / (12 * h)


@dataclass(frozen=True)
class CurveModel:
    """A holomorphic curve from the annulus into the sphere, a 1-d torus or C*.

    For torus and C* targets ``lift`` is the lift to C (resp. the C*-valued
    function itself); for the sphere it is the meromorphic function.
    """

    target: str
    lift: FunctionModel
    lattice: tuple | None = None

    def __post_init__(self):
        if self.target not in ("riemann_sphere", "torus", "c_star"):
            raise DomainError(f"unknown curve target {self.target!r}")
        if self.target == "torus":
            if self.lattice is None:
                raise DomainError("torus target needs lattice generators")
            Lattice(*self.lattice)
            if not self.lift.holomorphic:
                raise DomainError("torus lift must be holomorphic")
        if self.target == "c_star":
            check_nonvanishing(self.lift)

    @property
    def domain(self) -> Annulus:
        return self.lift.domain

    @property
    def lattice_area(self) -> float:
        return Lattice(*self.lattice).area


def check_nonvanishing(f: FunctionModel, n_radial: int = 41, n_angular: int = 256,
                       locate_margin: float = 1e-3) -> None:
    """Reject models that vanish or blow up in the open annulus.

    Exact divisors are used when the model has them; otherwise the
    divisor is located by the argument principle on ``A(R0 (1 - locate_margin))``.
    A sample net of ``log|f|`` guards against non-finite values either way.
    """
    from .errors import AnnuliError
    from .locator import locate_divisor

    if f.exact_divisors is not None:
        if len(f.exact_divisors[0]) or len(f.exact_divisors[1]):
            raise DomainError(f"{f.spec} has zeros or poles in the annulus; not a C*-valued curve")
    else:
        try:
            found = locate_divisor(f, f.domain.R0 * (1.0 - locate_margin))
        except AnnuliError as exc:
            raise DomainError(f"{f.spec}: cannot certify that it is zero-free ({exc})") from exc
        if len(found.zeros) or len(found.poles):
            raise DomainError(f"{f.spec} has zeros or poles in the annulus; not a C*-valued curve")
    R0 = f.domain.R0
    rho = np.linspace(-math.log(R0), math.log(R0), n_radial + 2)[1:-1]
    th = np.linspace(0, 2 * math.pi, n_angular, endpoint=False)
    z = np.exp(rho[:, None] + 1j * th[None, :]).ravel()
    la = f.log_abs(z)
    if not np.all(np.isfinite(la)):
        raise DomainError(f"{f.spec} vanishes or has a pole on the sample net")
