"""Annulus geometry, radius grids, divisors and exceptional radius sets.

Everything in here is an immutable value type or a pure function, so the
objects can be shared freely between worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

INF = math.inf


@dataclass(frozen=True)
class Annulus:
    """The ring ``1/R0 < |z| < R0``."""

    outer_modulus: float

    def __post_init__(self):
        R0 = float(self.outer_modulus)
        if not R0 > 1.0 or not math.isfinite(R0):
            raise DomainError(f"outer modulus must be a finite number > 1, got {self.outer_modulus!r}")
        object.__setattr__(self, "outer_modulus", R0)

    @property
    def R0(self) -> float:
        return self.outer_modulus

    def contains(self, z) -> bool | np.ndarray:
        a = np.abs(z)
        return (a > 1.0 / self.R0) & (a < self.R0)

    def contains_closed(self, z) -> bool | np.ndarray:
        a = np.abs(z)
        return (a >= 1.0 / self.R0) & (a <= self.R0)


@dataclass(frozen=True)
class RadiusGrid:
    """Strictly increasing evaluation radii inside ``(1, R0)``."""

    annulus: Annulus
    radii: tuple

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or r.size == 0:
            raise DomainError("radius grid needs at least one radius")
        if np.any(r <= 1.0) or np.any(r >= self.annulus.R0):
            raise DomainError("grid radii must lie strictly inside (1, R0)")
        if np.any(np.diff(r) <= 0):
            raise DomainError("grid radii must be strictly increasing")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))

    @property
    def boundary_margin(self) -> float:
        return self.annulus.R0 - self.radii[-1]

    def __len__(self):
        return len(self.radii)

    def __iter__(self):
        return iter(self.radii)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.radii)

    @classmethod
    def linear(cls, annulus: Annulus, count: int, start: float, margin: float) -> "RadiusGrid":
        return cls(annulus, tuple(np.linspace(start, annulus.R0 - margin, count)))

    @classmethod
    def geometric(cls, annulus: Annulus, count: int, start: float, margin: float) -> "RadiusGrid":
        """Radii whose gaps ``R0 - r`` decrease geometrically from ``R0 - start`` to ``margin``."""
        R0 = annulus.R0
        if not (1.0 < start < R0 - margin) or margin <= 0:
            raise DomainError("need 1 < start < R0 - margin and margin > 0")
        if count == 1:
            return cls(annulus, (start,))
        radii = R0 - np.geomspace(R0 - start, margin, count)
        radii[0], radii[-1] = start, R0 - margin
        return cls(annulus, tuple(radii))


@dataclass(frozen=True)
class Divisor:
    """Points with positive multiplicities; ``sign`` is +1 for zeros, -1 for poles.

    Points closer than ``merge_tol`` are merged on construction and their
    multiplicities added.
    """

    points: tuple = ()
    sign: int = 1
    merge_tol: float = field(default=1e-12, repr=False, compare=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("divisor sign must be +1 (zeros) or -1 (poles)")
        merged: list[list] = []
        for loc, mult in self.points:
            loc = complex(loc)
            mult = int(mult)
            if mult < 1:
                raise DomainError(f"multiplicity must be >= 1, got {mult}")
            for entry in merged:
                if abs(entry[0] - loc) <= self.merge_tol:
                    entry[1] += mult
                    break
            else:
                merged.append([loc, mult])
        merged.sort(key=lambda e: (abs(e[0]), math.atan2(e[0].imag, e[0].real)))
        object.__setattr__(self, "points", tuple((p, m) for p, m in merged))

    @property
    def locations(self) -> np.ndarray:
        return np.array([p for p, _ in self.points], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.points], dtype=int)

    def degree(self) -> int:
        return int(sum(m for _, m in self.points))

    def __len__(self):
        return len(self.points)

    def restrict(self, annulus: Annulus) -> "Divisor":
        return Divisor(tuple((p, m) for p, m in self.points if annulus.contains(p)), self.sign)

    def within(self, t: float) -> "Divisor":
        """Points of ``A(t)``, i.e. ``1/t < |z| < t``."""
        return Divisor(tuple((p, m) for p, m in self.points if 1.0 / t < abs(p) < t), self.sign)

    def truncated(self, k) -> np.ndarray:
        """Multiplicities capped at ``k`` (``k`` may be ``math.inf``)."""
        mult = self.multiplicities
        return mult if k == INF else np.minimum(mult, int(k))

    def counting(self, t: float, k=INF) -> int:
        """Unintegrated counting function ``n^[k](t)`` for both branches of t."""
        if len(self) == 0:
            return 0
        mods = np.abs(self.locations)
        if t >= 1.0:
            mask = (mods >= 1.0) & (mods <= t)
        else:
            mask = (mods >= t) & (mods < 1.0)
        return int(np.sum(self.truncated(k)[mask]))

    def counting_N(self, r: float, k=INF) -> float:
        """Integrated counting function ``N^[k](r)`` via the closed-form Jensen weight."""
        if len(self) == 0:
            return 0.0
        w = jensen_weights(self.locations, r)
        return float(np.dot(self.truncated(k), w))


def jensen_weights(z, r: float) -> np.ndarray:
    """Vectorised ``max(0, log r - |log|z||)``."""
    a = np.abs(np.asarray(z, dtype=complex))
    if np.any(a == 0):
        raise DomainError("z = 0 never lies in an annulus")
    return np.maximum(0.0, math.log(r) - np.abs(np.log(a)))


def jensen_weight(z: complex, r: float, annulus: Annulus | None = None) -> float:
    """Weight of a divisor point in the integrated counting function.

    Exchanging the counting sum with the ``dt/t`` integrals gives
    ``max(0, log r - |log|z||)``: zero outside ``A(r)``, ``log r`` on the
    unit circle.

    Parameters
    ----------
    z : complex
        Divisor point, nonzero.
    r : float
        Radius with ``1 < r < R0``.
    annulus : Annulus, optional
        When given, ``r`` is checked against its outer modulus.
    """
    if z == 0:
        raise DomainError("z = 0 never lies in an annulus")
    if not r > 1.0 or (annulus is not None and not r < annulus.R0):
        raise DomainError(f"radius {r} outside (1, R0)")
    return max(0.0, math.log(r) - abs(math.log(abs(z))))


@dataclass(frozen=True)
class ExceptionalSet:
    """Disjoint sorted closed intervals of ``[1, R0)`` with a weight exponent."""

    intervals: tuple = ()
    lam: float = 1.0

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError("lambda must be >= 0")
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in iv:
            if b < a:
                raise DomainError(f"empty interval [{a}, {b}]")
        for (_, b0), (a1, _) in zip(iv, iv[1:]):
            if a1 <= b0:
                raise DomainError("intervals must be disjoint and sorted")
        object.__setattr__(self, "intervals", iv)

    def __bool__(self):
        return bool(self.intervals)

    def contains(self, r: float) -> bool:
        return any(a <= r <= b for a, b in self.intervals)

    def measure(self) -> float:
        return sum(b - a for a, b in self.intervals)

    @classmethod
    def from_mask(cls, radii: Sequence[float], mask: Iterable[bool], R0: float, lam: float = 1.0) -> "ExceptionalSet":
        """Intervals between grid midpoints around every flagged radius.

        A flagged first radius starts its interval at the radius itself; a
        flagged last radius extends to ``R0`` (the violation persists up to
        the boundary as far as the grid can tell).
        """
        r = np.asarray(radii, dtype=float)
        m = np.asarray(list(mask), dtype=bool)
        n = r.size
        if n == 0 or not m.any():
            return cls((), lam)
        mids = 0.5 * (r[1:] + r[:-1])
        lo = np.concatenate(([r[0]], mids))
        hi = np.concatenate((mids, [R0]))
        out = []
        i = 0
        while i < n:
            if m[i]:
                j = i
                while j + 1 < n and m[j + 1]:
                    j += 1
                out.append((lo[i], hi[j]))
                i = j + 1
            else:
                i += 1
        return cls(tuple(out), lam)


def delta_weight(E: ExceptionalSet, annulus: Annulus) -> float:
    """Exact ``integral over E of dr / (R0 - r)^(lam + 1)``.

    Returns ``math.inf`` when an interval reaches ``R0``.
    """
    R0 = annulus.R0
    lam = E.lam
    total = 0.0
    for a, b in E.intervals:
        if a < 1.0 or b > R0:
            raise DomainError(f"interval [{a}, {b}] not inside [1, R0]")
        if b >= R0:
            return INF
        if lam == 0:
            total += math.log((R0 - a) / (R0 - b))
        else:
            total += ((R0 - b) ** (-lam) - (R0 - a) ** (-lam)) / lam
    return total
