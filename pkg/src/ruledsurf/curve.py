"""Curves through their Weil polynomial and zeta function."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .ratfunc import Poly, RationalFunction
from .scalar import ONE, Q, S, ZERO, Scalar
from .series import TruncatedSeries

__all__ = ["CurveData", "CurveError", "ZetaPoleError", "poincare_curve"]


class CurveError(ValueError):
    pass


class ZetaPoleError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class CurveData:
    genus: int
    weil: tuple[Scalar, ...]  # coefficients of P_C, constant term first
    mode: str = "poincare"

    def __post_init__(self):
        if self.genus < 0:
            raise CurveError("genus must be nonnegative")
        if self.mode not in ("poincare", "explicit"):
            raise CurveError(f"unknown curve mode {self.mode!r}")
        w = tuple(c if isinstance(c, Scalar) else Scalar(c) for c in self.weil)
        object.__setattr__(self, "weil", w)
        g = self.genus
        if len(w) != 2 * g + 1 or not w[-1]:
            raise CurveError(f"Weil polynomial must have degree {2 * g}")
        if w[0] != ONE:
            raise CurveError("Weil polynomial must have constant term 1")
        # P(t) = q^g t^{2g} P(1/(qt))  <=>  a_{2g-k} = q^{g-k} a_k
        for k in range(2 * g + 1):
            if w[2 * g - k] != Scalar.q_power(g - k) * w[k]:
                raise CurveError("Weil polynomial fails the functional equation")

    @classmethod
    def explicit(cls, genus: int, weil) -> "CurveData":
        return cls(genus, tuple(weil), "explicit")

    @property
    def weil_poly(self) -> Poly:
        return Poly(self.weil)

    def measure(self) -> Scalar:
        """mu(C) = 1 + q + a_1."""
        a1 = self.weil[1] if len(self.weil) > 1 else ZERO
        return ONE + Q + a1

    def jacobian_measure(self) -> Scalar:
        """P_C(1) = mu(Jac C)."""
        return self.weil_poly(ONE)

    def zeta_function(self) -> RationalFunction:
        """Z_C(t) as a rational function of t."""
        return RationalFunction(self.weil_poly, Poly([ONE, -ONE]) * Poly([ONE, -Q]))

    def functional_equation_holds(self) -> bool:
        """Z_C(t) == (q t^2)^{g-1} Z_C(1/(qt)) as rational functions of t."""
        z = self.zeta_function()
        g = self.genus
        twist = RationalFunction.x_power(2 * (g - 1), Scalar.q_power(g - 1))
        return z == twist * z.reciprocal_substitute(Q)

    def zeta_value(self, a) -> Scalar:
        a = a if isinstance(a, Scalar) else Scalar(a)
        if a == ONE or a * Q == ONE:
            raise ZetaPoleError(f"Z_C has a pole at {a}")
        return self.weil_poly(a) / ((ONE - a) * (ONE - Q * a))

    def zeta_series(self, a, k: int, order, u_power: int = 0) -> TruncatedSeries:
        """Z_C(a * t^k * u^u_power) expanded through t-order ``order``."""
        if k < 1:
            raise CurveError("zeta_series needs k >= 1")
        a = a if isinstance(a, Scalar) else Scalar(a)
        top = {}
        power = ONE
        for i, c in enumerate(self.weil):
            if c:
                top[(i * k, i * u_power)] = c * power
            power = power * a
        num = TruncatedSeries(1, 0, top, order)
        return (
            num
            * TruncatedSeries.geometric(a, k, u_power, order)
            * TruncatedSeries.geometric(a * Q, k, u_power, order)
        )


def poincare_curve(genus: int) -> CurveData:
    """Weil polynomial (1 - s t)^{2g} of the Poincare-polynomial measure."""
    w = [Scalar(comb(2 * genus, i) * (-1) ** i) * S**i for i in range(2 * genus + 1)]
    return CurveData(genus, tuple(w), "poincare")
