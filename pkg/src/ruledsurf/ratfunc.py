"""Univariate polynomials and rational functions with Scalar coefficients.

Only what the identity checks need: ring operations, evaluation, the
substitution x -> 1/(c*x), and equality by cross-multiplication.
"""

from __future__ import annotations

from .scalar import ONE, ZERO, Scalar

__all__ = ["Poly", "RationalFunction"]


def _s(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [_s(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls([ZERO, ONE])

    @classmethod
    def monomial(cls, c, k: int) -> "Poly":
        return cls([ZERO] * k + [_s(c)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([ONE])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        x = _s(x)
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def scale_var(self, c) -> "Poly":
        """p(x) -> p(c*x)."""
        c = _s(c)
        out, p = [], ONE
        for a in self.coeffs:
            out.append(a * p)
            p = p * c
        return Poly(out)

    def reversed_scaled(self, c, degree: int | None = None) -> "Poly":
        """x^d * p(1/(c*x)) with d = deg p (or the given degree)."""
        d = self.degree if degree is None else degree
        cinv = _s(c).inverse()
        out = [ZERO] * (d + 1)
        p = ONE
        for k, a in enumerate(self.coeffs):
            out[d - k] = a * p
            p = p * cinv
        return Poly(out)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


class RationalFunction:
    """num/den; no normalization, equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = num if isinstance(num, Poly) else Poly([num])
        self.den = Poly([ONE]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if not self.den:
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def x_power(cls, k: int, c=ONE) -> "RationalFunction":
        if k >= 0:
            return cls(Poly.monomial(c, k))
        return cls(Poly([_s(c)]), Poly.monomial(ONE, -k))

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(other)

    def __add__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den**(-k), self.num**(-k))
        return RationalFunction(self.num**k, self.den**k)

    def __eq__(self, other):
        other = self._lift(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable")

    def __call__(self, x) -> Scalar:
        bottom = self.den(x)
        if not bottom:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / bottom

    def scale_var(self, c) -> "RationalFunction":
        return RationalFunction(self.num.scale_var(c), self.den.scale_var(c))

    def reciprocal_substitute(self, c) -> "RationalFunction":
        """f(x) -> f(1/(c*x))."""
        dn, dd = max(self.num.degree, 0), max(self.den.degree, 0)
        num = self.num.reversed_scaled(c, dn)
        den = self.den.reversed_scaled(c, dd)
        # f(1/(cx)) = x^{dd-dn} * num/den
        return RationalFunction(num, den) * RationalFunction.x_power(dd - dn)

    def is_zero(self) -> bool:
        return not self.num
