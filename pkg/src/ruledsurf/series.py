"""Truncated power series in t (rational exponents) and u over :class:`Scalar`.

A series stores coefficients of ``t**(offset + kt/den) * u**ku`` for integer
``kt, ku >= 0`` and a truncation order ``order``: every coefficient with
t-exponent ``<= order`` is exact, everything above is unknown and dropped.
``order = math.inf`` marks an exact (finite) series.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .scalar import ONE, ZERO, Scalar

__all__ = [
    "TruncatedSeries",
    "SeriesError",
    "mobius",
    "INF",
    "adams",
    "exp_pleth",
    "log_pleth",
    "power_pleth",
    "product",
]

INF = math.inf


class SeriesError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _order(x):
    if x is None or x == INF:
        return INF
    return _frac(x)


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


# u-polynomials as {ku: Scalar}; small helpers for the grade recurrences
def _upoly_mul(a: dict, b: dict) -> dict:
    out: dict[int, Scalar] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            out[k] = out.get(k, ZERO) + x * y
    return {k: v for k, v in out.items() if v}


def _upoly_add_into(acc: dict, a: dict, scale: Scalar = ONE) -> None:
    for k, v in a.items():
        acc[k] = acc.get(k, ZERO) + (v if scale is ONE else v * scale)


def _upoly_clean(a: dict) -> dict:
    return {k: v for k, v in a.items() if v}


class TruncatedSeries:
    """Immutable truncated series; see the module docstring for the encoding."""

    __slots__ = ("den", "offset", "coeffs", "order")

    def __init__(self, den: int, offset, coeffs: Mapping[tuple[int, int], Scalar], order=INF):
        if den < 1:
            raise SeriesError("grading denominator must be positive")
        self.den = int(den)
        self.offset = _frac(offset)
        self.order = _order(order)
        cut = self._max_grade()
        table = {}
        for (kt, ku), c in coeffs.items():
            if kt < 0 or ku < 0:
                raise SeriesError(f"negative exponent index {(kt, ku)}")
            if not isinstance(c, Scalar):
                c = Scalar(c)
            if c and (cut is None or kt <= cut):
                table[(kt, ku)] = c
        self.coeffs = table

    def _max_grade(self):
        if self.order == INF:
            return None
        return math.floor((self.order - self.offset) * self.den)

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, order=INF) -> "TruncatedSeries":
        return cls(1, 0, {}, order)

    @classmethod
    def one(cls, order=INF) -> "TruncatedSeries":
        return cls(1, 0, {(0, 0): ONE}, order)

    @classmethod
    def constant(cls, c, order=INF) -> "TruncatedSeries":
        return cls(1, 0, {(0, 0): c}, order)

    @classmethod
    def monomial(cls, coeff, t_exp=0, u_exp: int = 0, order=INF) -> "TruncatedSeries":
        t_exp = _frac(t_exp)
        return cls(t_exp.denominator, t_exp, {(0, u_exp): coeff}, order)

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, Scalar], order=INF) -> "TruncatedSeries":
        """Build from ``{(t_exponent, u_exponent): coefficient}``."""
        items = [(_frac(te), int(ue), c) for (te, ue), c in terms.items()]
        if not items:
            return cls.zero(order)
        lo = min(te for te, _, _ in items)
        den = _lcm(*(((te - lo).denominator) for te, _, _ in items))
        table: dict[tuple[int, int], Scalar] = {}
        for te, ue, c in items:
            key = (int((te - lo) * den), ue)
            table[key] = table.get(key, ZERO) + c
        return cls(den, lo, table, order)

    @classmethod
    def geometric(cls, coeff, t_exp, u_exp: int, order) -> "TruncatedSeries":
        """1/(1 - coeff * t^t_exp * u^u_exp) expanded through ``order``."""
        t_exp = _frac(t_exp)
        order = _order(order)
        if t_exp <= 0:
            raise SeriesError("geometric series needs a positive t-exponent")
        if order == INF:
            raise SeriesError("geometric series needs a finite order")
        coeff = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
        top = math.floor(order / t_exp) if order >= 0 else -1
        table = {}
        c = ONE
        for k in range(top + 1):
            table[(k * t_exp.numerator, k * u_exp)] = c
            c = c * coeff
        return cls(t_exp.denominator, 0, table, order)

    # -- views -----------------------------------------------------------
    def t_exponent(self, kt: int) -> Fraction:
        return self.offset + Fraction(kt, self.den)

    def terms(self) -> list[tuple[Fraction, int, Scalar]]:
        """(t-exponent, u-exponent, coefficient), ascending in t then u."""
        return [(self.t_exponent(kt), ku, c) for (kt, ku), c in sorted(self.coeffs.items())]

    def term_map(self) -> dict[tuple[Fraction, int], Scalar]:
        return {(self.t_exponent(kt), ku): c for (kt, ku), c in self.coeffs.items()}

    def coefficient(self, t_exp, u_exp: int = 0) -> Scalar:
        t_exp = _frac(t_exp)
        if self.order != INF and t_exp > self.order:
            raise SeriesError(f"t^{t_exp} lies beyond the truncation order {self.order}")
        k = (t_exp - self.offset) * self.den
        if k.denominator != 1:
            return ZERO
        return self.coeffs.get((int(k), u_exp), ZERO)

    def t_slice(self, t_exp) -> dict[int, Scalar]:
        """The u-polynomial multiplying t^t_exp."""
        return {ue: c for te, ue, c in self.terms() if te == t_exp}

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_t(self):
        if not self.coeffs:
            return None
        return self.t_exponent(min(kt for kt, _ in self.coeffs))

    def max_u(self) -> int:
        return max((ku for _, ku in self.coeffs), default=0)

    def valuation(self) -> Fraction:
        """Lowest exponent that may carry a nonzero coefficient."""
        m = self.min_t()
        return m if m is not None else (self.order if self.order != INF else Fraction(0))

    # -- structural ------------------------------------------------------
    def _regraded(self, den: int, offset: Fraction) -> dict[tuple[int, int], Scalar]:
        shift = (self.offset - offset) * den
        if shift.denominator != 1 or shift < 0 or den % self.den:
            raise SeriesError("incompatible regrading")
        shift = int(shift)
        mult = den // self.den
        return {(kt * mult + shift, ku): c for (kt, ku), c in self.coeffs.items()}

    def _common(self, other: "TruncatedSeries") -> tuple[int, Fraction]:
        off = min(self.offset, other.offset)
        den = _lcm(self.den, other.den, (self.offset - other.offset).denominator)
        return den, off

    def truncate(self, order) -> "TruncatedSeries":
        order = _order(order)
        return TruncatedSeries(self.den, self.offset, self.coeffs, min(order, self.order))

    def truncate_u(self, max_u: int) -> "TruncatedSeries":
        """Drop every term with u-exponent above ``max_u``."""
        return TruncatedSeries(
            self.den, self.offset, {k: c for k, c in self.coeffs.items() if k[1] <= max_u}, self.order
        )

    def shift(self, t_exp=0, u_exp: int = 0) -> "TruncatedSeries":
        """Multiply by t^t_exp * u^u_exp (exactly; the order moves with it)."""
        t_exp = _frac(t_exp)
        table = {(kt, ku + u_exp): c for (kt, ku), c in self.coeffs.items()}
        if any(k[1] < 0 for k in table):
            raise SeriesError("negative u-exponent after shift")
        order = self.order + t_exp if self.order != INF else INF
        den = _lcm(self.den, t_exp.denominator)
        mult = den // self.den
        table = {(kt * mult, ku): c for (kt, ku), c in table.items()}
        return TruncatedSeries(den, self.offset + t_exp, table, order)

    def scale(self, c) -> "TruncatedSeries":
        c = c if isinstance(c, Scalar) else Scalar(c)
        if not c:
            return TruncatedSeries.zero(self.order)
        return TruncatedSeries(self.den, self.offset, {k: v * c for k, v in self.coeffs.items()}, self.order)

    def scale_t(self, s_power) -> "TruncatedSeries":
        """Substitute t -> s^s_power * t; every s-exponent produced must be integral."""
        s_power = _frac(s_power)
        table = {}
        for (kt, ku), c in self.coeffs.items():
            e = s_power * self.t_exponent(kt)
            if e.denominator != 1:
                raise SeriesError(f"t -> s^{s_power} t yields s^{e}")
            table[(kt, ku)] = c * Scalar.s_power(int(e))
        return TruncatedSeries(self.den, self.offset, table, self.order)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        return TruncatedSeries(self.den, self.offset, {k: fn(c) for k, c in self.coeffs.items()}, self.order)

    def set_u(self, u_value: Scalar) -> "TruncatedSeries":
        """Specialize u to a scalar."""
        table: dict[tuple[int, int], Scalar] = {}
        for (kt, ku), c in self.coeffs.items():
            table[(kt, 0)] = table.get((kt, 0), ZERO) + c * u_value**ku
        return TruncatedSeries(self.den, self.offset, table, self.order)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        den, off = self._common(other)
        out = self._regraded(den, off)
        for k, c in other._regraded(den, off).items():
            out[k] = out.get(k, ZERO) + c
        return TruncatedSeries(den, off, out, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.den, self.offset, {k: -c for k, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        # the unknown tail of one factor meets the lowest term of the other;
        # positive valuations are not credited, so the order never grows
        order = min(
            self.order + min(other.valuation(), 0),
            other.order + min(self.valuation(), 0),
        )
        return self._product(other, order)

    def mul_sharp(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Product whose order credits the lowest present term of each factor.

        ``*`` never lets the order grow past the operands'; this variant returns
        the largest order at which the product is still exact.
        """
        if (self.is_zero() and self.order == INF) or (other.is_zero() and other.order == INF):
            return TruncatedSeries.zero()
        order = min(self.order + other.valuation(), other.order + self.valuation())
        return self._product(other, order)

    def _product(self, other: "TruncatedSeries", order) -> "TruncatedSeries":
        den = _lcm(self.den, other.den)
        off = self.offset + other.offset
        a = self._regraded(den, self.offset)
        b = other._regraded(den, other.offset)
        cut = None if order == INF else math.floor((order - off) * den)
        out: dict[tuple[int, int], Scalar] = {}
        b_items = sorted(b.items())
        for (i, iu), x in a.items():
            for (j, ju), y in b_items:
                if cut is not None and i + j > cut:
                    break
                key = (i + j, iu + ju)
                out[key] = out.get(key, ZERO) + x * y
        return TruncatedSeries(den, off, out, order)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("series powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries.one(self.order if self.order != INF else INF)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self, order=None) -> "TruncatedSeries":
        """Multiplicative inverse; the lowest t-grade must be a single u^0 monomial."""
        if not self.coeffs:
            raise SeriesError("inverse of the zero series")
        k0 = min(kt for kt, _ in self.coeffs)
        lead = {ku: c for (kt, ku), c in self.coeffs.items() if kt == k0}
        if set(lead) != {0}:
            raise SeriesError("inverse needs the lowest t-term to be a u-free scalar")
        v = self.t_exponent(k0)
        target = self.order - 2 * v if self.order != INF else INF
        if order is not None:
            target = min(target, _order(order))
        if target == INF:
            if len(self.coeffs) == 1:
                return TruncatedSeries.monomial(lead[0].inverse(), -v, 0)
            raise SeriesError("exact non-monomial inverse needs an explicit order")
        grades = self._grades(k0)
        c0inv = lead[0].inverse()
        top = math.floor((target + v) * self.den)
        inv: list[dict] = [{0: c0inv}]
        for d in range(1, top + 1):
            acc: dict[int, Scalar] = {}
            for j in range(1, d + 1):
                fj = grades.get(j)
                if fj and inv[d - j]:
                    _upoly_add_into(acc, _upoly_mul(fj, inv[d - j]))
            inv.append(_upoly_clean({k: -c * c0inv for k, c in acc.items()}))
        table = {(d, ku): c for d, poly in enumerate(inv) for ku, c in poly.items()}
        return TruncatedSeries(self.den, -v, table, target)

    def _grades(self, base: int = 0) -> dict[int, dict[int, Scalar]]:
        out: dict[int, dict[int, Scalar]] = {}
        for (kt, ku), c in self.coeffs.items():
            out.setdefault(kt - base, {})[ku] = c
        return out

    def __truediv__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(Scalar(other).inverse())
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return NotImplemented

    # -- lambda-ring -----------------------------------------------------
    def adams(self, n: int) -> "TruncatedSeries":
        """psi_n: s -> s^n, t -> t^n, u -> u^n; the truncation order is kept."""
        if n < 1:
            raise SeriesError("Adams operations are indexed by n >= 1")
        if n == 1:
            return self
        table = {(kt * n, ku * n): c.adams(n) for (kt, ku), c in self.coeffs.items()}
        return TruncatedSeries(self.den, self.offset * n, table, self.order)

    def _positive_grades(self, what: str):
        """Regrade to offset 0; returns (den, grades) with grades keyed by positive ints."""
        den = _lcm(self.den, self.offset.denominator)
        table = self._regraded(den, Fraction(0)) if self.offset >= 0 else None
        if table is None or any(kt == 0 for kt, _ in table):
            raise SeriesError(f"{what} needs every term to have positive t-exponent")
        grades: dict[int, dict[int, Scalar]] = {}
        for (kt, ku), c in table.items():
            grades.setdefault(kt, {})[ku] = c
        return den, grades

    def _need_order(self, what: str) -> int:
        if self.order == INF:
            raise SeriesError(f"{what} needs a finite truncation order")
        return self.order

    def exp_pleth(self) -> "TruncatedSeries":
        """Exp(f) = exp(sum_n psi_n(f)/n) for f without constant term."""
        order = self._need_order("exp_pleth")
        if not self.coeffs:
            return TruncatedSeries.one(order)
        den, grades = self._positive_grades("exp_pleth")
        top = math.floor(order * den)
        if top < 1:
            return TruncatedSeries.one(order)
        log: dict[int, dict[int, Scalar]] = {}
        for n in range(1, top + 1):
            inv_n = Scalar(Fraction(1, n))
            for g, poly in grades.items():
                if g * n > top:
                    continue
                bucket = log.setdefault(g * n, {})
                for ku, c in poly.items():
                    bucket[ku * n] = bucket.get(ku * n, ZERO) + c.adams(n) * inv_n
        return _exp_grades(log, top, den, order)

    def log_pleth(self) -> "TruncatedSeries":
        """Inverse of :meth:`exp_pleth` on series with constant term 1."""
        order = self._need_order("log_pleth")
        den, grades = self._unit_grades("log_pleth")
        top = math.floor(order * den)
        plain = _log_grades(grades, top)
        out: dict[int, dict[int, Scalar]] = {}
        for n in range(1, top + 1):
            mu = mobius(n)
            if not mu:
                continue
            w = Scalar(Fraction(mu, n))
            for g, poly in plain.items():
                if g * n > top:
                    continue
                bucket = out.setdefault(g * n, {})
                for ku, c in poly.items():
                    bucket[ku * n] = bucket.get(ku * n, ZERO) + c.adams(n) * w
        table = {(g, ku): c for g, poly in out.items() for ku, c in poly.items()}
        return TruncatedSeries(den, 0, table, order)

    def _unit_grades(self, what: str):
        if self.offset < 0 and any(self.t_exponent(kt) < 0 for kt, _ in self.coeffs):
            raise SeriesError(f"{what} needs constant term 1")
        den = _lcm(self.den, self.offset.denominator)
        if self.offset < 0:
            low = min(self.coeffs)[0] if self.coeffs else 0
            trimmed = TruncatedSeries(self.den, self.t_exponent(low),
                                      {(kt - low, ku): c for (kt, ku), c in self.coeffs.items()}, self.order)
            return trimmed._unit_grades(what)
        table = self._regraded(den, Fraction(0))
        grades: dict[int, dict[int, Scalar]] = {}
        for (kt, ku), c in table.items():
            grades.setdefault(kt, {})[ku] = c
        if grades.get(0) != {0: ONE}:
            raise SeriesError(f"{what} needs constant term exactly 1")
        return den, grades

    def power_pleth(self, exponent: "TruncatedSeries | Scalar | int") -> "TruncatedSeries":
        """self^exponent = Exp(exponent * Log(self))."""
        log = self.log_pleth()
        if isinstance(exponent, TruncatedSeries):
            prod = log * exponent
            # Log(self) has no constant term, so prod is known to the order of self
            prod = prod.truncate(self.order)
        else:
            prod = log.scale(exponent)
        return prod.exp_pleth()

    # -- comparison / text -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = _coerce(other)
            if other is NotImplemented:
                return False
        return self.order == other.order and self.term_map() == other.term_map()

    def agrees_with(self, other: "TruncatedSeries", order=None) -> bool:
        """Equal on every t-exponent up to ``order`` (default: both orders)."""
        cap = min(self.order, other.order)
        if order is not None:
            cap = min(cap, _order(order))
        return self.truncate(cap).term_map() == other.truncate(cap).term_map()

    def __hash__(self):
        return hash((self.order, frozenset(self.term_map().items())))

    def __str__(self):
        parts = []
        for te, ue, c in self.terms():
            mono = []
            if te != 0:
                mono.append("t" if te == 1 else f"t^{{{te}}}")
            if ue != 0:
                mono.append("u" if ue == 1 else f"u^{ue}")
            text = str(c)
            if not mono:
                parts.append(text)
                continue
            if text == "1":
                parts.append(" ".join(mono))
            elif text == "-1":
                parts.append("-" + " ".join(mono))
            else:
                if any(ch in text[1:] for ch in "+-/"):
                    text = f"({text})"
                parts.append(text + " " + " ".join(mono))
        body = " + ".join(parts) if parts else "0"
        if self.order != INF:
            body += f" + O(t^{{>{self.order}}})"
        return body

    def __repr__(self):
        return f"TruncatedSeries({self})"


def _coerce(x):
    if isinstance(x, TruncatedSeries):
        return x
    if isinstance(x, (Scalar, int, Fraction)):
        return TruncatedSeries.constant(x)
    return NotImplemented


def _exp_grades(log: dict, top: int, den: int, order) -> TruncatedSeries:
    """E with d*E_d = sum_j j*L_j*E_{d-j}, E_0 = 1, grades are u-polynomials."""
    ex: list[dict] = [{0: ONE}]
    for d in range(1, top + 1):
        acc: dict[int, Scalar] = {}
        for j in range(1, d + 1):
            lj = log.get(j)
            if lj and ex[d - j]:
                _upoly_add_into(acc, _upoly_mul(lj, ex[d - j]), Scalar(j))
        inv_d = Scalar(Fraction(1, d))
        ex.append(_upoly_clean({k: c * inv_d for k, c in acc.items()}))
    table = {(d, ku): c for d, poly in enumerate(ex) for ku, c in poly.items()}
    return TruncatedSeries(den, 0, table, order)


def _log_grades(grades: dict, top: int) -> dict[int, dict[int, Scalar]]:
    """Ordinary logarithm of a unit series given by u-polynomial grades."""
    lg: dict[int, dict[int, Scalar]] = {}
    for d in range(1, top + 1):
        acc = dict(grades.get(d, {}))
        for j in range(1, d):
            lj = lg.get(j)
            gj = grades.get(d - j)
            if lj and gj:
                _upoly_add_into(acc, _upoly_mul(lj, gj), Scalar(Fraction(-j, d)))
        acc = _upoly_clean(acc)
        if acc:
            lg[d] = acc
    return lg


def adams(n: int, f: TruncatedSeries) -> TruncatedSeries:
    return f.adams(n)


def exp_pleth(f: TruncatedSeries) -> TruncatedSeries:
    return f.exp_pleth()


def log_pleth(g: TruncatedSeries) -> TruncatedSeries:
    return g.log_pleth()


def power_pleth(g: TruncatedSeries, e) -> TruncatedSeries:
    return g.power_pleth(e)


def product(factors: Iterable[TruncatedSeries], order=INF) -> TruncatedSeries:
    out = TruncatedSeries.one(order)
    for f in factors:
        out = out * f
    return out
