"""Numerical geometry of the ruled surface P(L + O_C) over a genus-g curve.

Divisor classes are written a*C0 + b*f with C0^2 = -e, C0.f = 1, f^2 = 0.
Sheaf classes are (r, c1, c2).  All pairings return exact Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "RuledSurface",
    "DivisorClass",
    "ChernData",
    "GeometryError",
    "intersect",
    "euler_chi",
    "chi_pair",
    "euler_antisym",
    "discriminant",
    "twist",
    "slope_mu",
    "reduced_hilbert",
    "polarization_divisor",
    "in_positive_cone",
]


class GeometryError(ValueError):
    pass


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RuledSurface:
    g: int
    e: int

    def __post_init__(self):
        if self.g < 0 or self.e < 0:
            raise GeometryError("ruled surface needs g >= 0 and e >= 0")

    @property
    def canonical(self) -> "DivisorClass":
        return DivisorClass(-2, 2 * self.g - 2 - self.e)

    @property
    def chi_structure_sheaf(self) -> int:
        return 1 - self.g


@dataclass(frozen=True, order=True)
class DivisorClass:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _q(self.a))
        object.__setattr__(self, "b", _q(self.b))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a, -self.b)

    def __mul__(self, k) -> "DivisorClass":
        return DivisorClass(self.a * k, self.b * k)

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def as_ints(self) -> tuple[int, int]:
        if not self.is_integral():
            raise GeometryError(f"{self} is not integral")
        return int(self.a), int(self.b)

    def __str__(self):
        return f"({self.a},{self.b})"


ZERO_DIVISOR = DivisorClass(0, 0)


def intersect(d1: DivisorClass, d2: DivisorClass, surface: RuledSurface) -> Fraction:
    return -surface.e * d1.a * d2.a + d1.a * d2.b + d1.b * d2.a


@dataclass(frozen=True)
class ChernData:
    r: int
    c1: DivisorClass
    c2: Fraction

    def __post_init__(self):
        if self.r < 0:
            raise GeometryError("rank must be nonnegative")
        object.__setattr__(self, "c2", _q(self.c2))

    def ch2(self, surface: RuledSurface) -> Fraction:
        return intersect(self.c1, self.c1, surface) / 2 - self.c2


def euler_chi(surface: RuledSurface, gamma: ChernData) -> Fraction:
    k = surface.canonical
    return gamma.ch2(surface) - intersect(k, gamma.c1, surface) / 2 + gamma.r * surface.chi_structure_sheaf


def chi_pair(surface: RuledSurface, g1: ChernData, g2: ChernData) -> Fraction:
    """chi(g1, g2) by Riemann-Roch."""
    k = surface.canonical
    r, rr = g1.r, g2.r
    main = r * g2.ch2(surface) + rr * g1.ch2(surface) - intersect(g1.c1, g2.c1, surface)
    mixed = intersect(k, r * g2.c1 - rr * g1.c1, surface) / 2
    return main - mixed + r * rr * surface.chi_structure_sheaf


def euler_antisym(surface: RuledSurface, g1: ChernData, g2: ChernData) -> Fraction:
    """<g1, g2> = K.(r2 c1 - r1 c1'); equals chi(g1,g2) - chi(g2,g1)."""
    return intersect(surface.canonical, g2.r * g1.c1 - g1.r * g2.c1, surface)


def discriminant(surface: RuledSurface, gamma: ChernData) -> Fraction:
    if gamma.r <= 0:
        raise GeometryError("discriminant needs positive rank")
    r = gamma.r
    return intersect(gamma.c1, gamma.c1, surface) / (2 * r * r) - gamma.ch2(surface) / r


def twist(surface: RuledSurface, gamma: ChernData, line: DivisorClass) -> ChernData:
    """Class of E(L)."""
    r, c1 = gamma.r, gamma.c1
    c2 = (
        gamma.c2
        + (r - 1) * intersect(c1, line, surface)
        + Fraction(r * (r - 1), 2) * intersect(line, line, surface)
    )
    return ChernData(r, c1 + r * line, c2)


def slope_mu(surface: RuledSurface, h: DivisorClass, gamma: ChernData) -> Fraction:
    if gamma.r <= 0:
        raise GeometryError("slope of a rank-zero class")
    return intersect(h, gamma.c1, surface) / gamma.r


def reduced_hilbert(surface: RuledSurface, h: DivisorClass, gamma: ChernData, n) -> Fraction:
    """chi(E(nH))/r as a quadratic in n."""
    n = _q(n)
    hh = intersect(h, h, surface)
    hk = intersect(h, surface.canonical, surface)
    mu = slope_mu(surface, h, gamma)
    return n * n * hh / 2 + n * (mu - hk / 2) + euler_chi(surface, gamma) / gamma.r


def polarization_divisor(surface: RuledSurface, m, n) -> DivisorClass:
    """The ray m*(C0 + e f) + n*f."""
    m, n = _q(m), _q(n)
    return DivisorClass(m, m * surface.e + n)


def in_positive_cone(surface: RuledSurface, h: DivisorClass) -> bool:
    return intersect(h, DivisorClass(1, 0), surface) >= 0 and intersect(h, DivisorClass(0, 1), surface) >= 0
