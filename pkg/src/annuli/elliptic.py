"""Weierstrass elliptic function by row-summed lattice series.

Each lattice row ``{n + m*tau : n in Z}`` is summed in closed form with
``sum_n 1/(x+n)^2 = pi^2 / sin^2(pi x)``, which replaces the slowly
converging tail in the ``n`` direction by an exact correction.  Rows are then
added in symmetric pairs ``+-m`` until the last pair contributes less than
``ROW_TOL`` relative; after Gauss reduction ``|q| <= exp(-pi*sqrt(3)/2)`` so a
handful of rows suffice.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

PI = math.pi
ROW_TOL = 1e-17
MAX_ROWS = 200


def reduce_lattice(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Gauss-reduced basis of the lattice, oriented so that Im(w2/w1) > 0."""
    w1, w2 = complex(w1), complex(w2)
    if w1 == 0 or w2 == 0 or abs((w2 / w1).imag) < 1e-12 * abs(w2 / w1):
        raise DomainError("lattice generators must be R-linearly independent")
    for _ in range(1000):
        if abs(w2) < abs(w1):
            w1, w2 = w2, w1
        m = round((w2 * w1.conjugate()).real / abs(w1) ** 2)
        if m == 0:
            break
        w2 -= m * w1
    if (w2 / w1).imag < 0:
        w2 = -w2
    return w1, w2


def _csc2(w):
    return 1.0 / np.sin(w) ** 2


def _reduce_arg(x, tau):
    x = x - np.round(x.imag / tau.imag) * tau
    return x - np.round(x.real)


def _p_unit(x, tau):
    """P(x) for the lattice {1, tau} together with its derivative."""
    x = _reduce_arg(np.asarray(x, dtype=complex), tau)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.sin(PI * x)
        c = np.cos(PI * x)
        val = PI ** 2 / s ** 2 - PI ** 2 / 3
        der = -2 * PI ** 3 * c / s ** 3
        for m in range(1, MAX_ROWS):
            row_val = np.zeros_like(x)
            row_der = np.zeros_like(x)
            base = PI ** 2 * _csc2(PI * m * tau)
            for sgn in (1, -1):
                w = PI * (x - sgn * m * tau)
                sw = np.sin(w)
                row_val += PI ** 2 / sw ** 2 - base
                row_der += -2 * PI ** 3 * np.cos(w) / sw ** 3
            val = val + row_val
            der = der + row_der
            scale = np.maximum(np.abs(val), 1.0)
            if np.all(np.abs(row_val) <= ROW_TOL * scale):
                break
    return val, der


class Lattice:
    """A period lattice ``w1*Z + w2*Z`` with cached invariants."""

    def __init__(self, w1: complex, w2: complex):
        self.generators = (complex(w1), complex(w2))
        self.w1, self.w2 = reduce_lattice(w1, w2)
        self.tau = self.w2 / self.w1
        self.g2, self.g3 = invariants(self.w1, self.w2)

    @property
    def area(self) -> float:
        return abs((self.w1.conjugate() * self.w2).imag)

    def points_within(self, lo: float, hi: float) -> list[complex]:
        """Lattice points with ``lo < |w| < hi``."""
        bound = int(math.ceil(hi / (self.area / max(abs(self.w1), abs(self.w2))))) + 2
        pts = []
        for m in range(-bound, bound + 1):
            for n in range(-bound, bound + 1):
                w = m * self.w1 + n * self.w2
                if lo < abs(w) < hi:
                    pts.append(w)
        return pts

    def is_lattice_point(self, z: complex, tol: float = 1e-14) -> bool:
        x = complex(z) / self.w1
        m = round(x.imag / self.tau.imag)
        y = x - m * self.tau
        return abs(y - round(y.real)) <= tol * max(1.0, abs(x))

    def wp(self, z):
        val, _ = _p_unit(np.asarray(z, dtype=complex) / self.w1, self.tau)
        return val / self.w1 ** 2

    def wp_both(self, z):
        """``(wp(z), wp'(z))`` from one lattice sum."""
        val, der = _p_unit(np.asarray(z, dtype=complex) / self.w1, self.tau)
        return val / self.w1 ** 2, der / self.w1 ** 3

    def wp_prime(self, z):
        _, der = _p_unit(np.asarray(z, dtype=complex) / self.w1, self.tau)
        return der / self.w1 ** 3


def eisenstein_unit(tau: complex) -> tuple[complex, complex]:
    """G4 and G6 of the lattice {1, tau} summed row by row."""
    G4 = PI ** 4 / 45
    G6 = 2 * PI ** 6 / 945
    for m in range(1, MAX_ROWS):
        u = _csc2(PI * m * tau)
        t4 = 2 * PI ** 4 * (u ** 2 - 2 * u / 3)
        t6 = 2 * PI ** 6 * (u ** 3 - u ** 2 + 2 * u / 15)
        G4 += t4
        G6 += t6
        if abs(t4) <= ROW_TOL * abs(G4) and abs(t6) <= ROW_TOL * max(abs(G6), 1.0):
            break
    return G4, G6


def invariants(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Weierstrass invariants ``g2 = 60 G4`` and ``g3 = 140 G6``."""
    w1, w2 = reduce_lattice(w1, w2)
    G4, G6 = eisenstein_unit(w2 / w1)
    return 60 * G4 / w1 ** 4, 140 * G6 / w1 ** 6
