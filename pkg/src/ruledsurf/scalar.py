"""Exact coefficients: rational functions in s with s^2 = q.

A :class:`Scalar` is stored as ``s**shift * num(s) / den(s)`` where ``num``
and ``den`` are integer polynomials with nonzero constant terms, coprime,
with coprime contents and a positive leading coefficient on ``den``.  That
form is unique, so equality and hashing are structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from flint import fmpz_poly

__all__ = [
    "Scalar",
    "ScalarParseError",
    "parse_scalar",
    "q_int",
    "q_factorial",
    "q_binomial",
    "ZERO",
    "ONE",
    "Q",
    "S",
]

_ONE_POLY = fmpz_poly([1])


def _strip_s(p: fmpz_poly) -> tuple[int, fmpz_poly]:
    """Split off the largest power of s dividing ``p``."""
    c = p.coeffs()
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    if k == 0:
        return 0, p
    return k, fmpz_poly(c[k:])


def _stretch(p: fmpz_poly, n: int) -> fmpz_poly:
    """p(s) -> p(s**n)."""
    if n == 1:
        return p
    c = p.coeffs()
    out = [0] * ((len(c) - 1) * n + 1)
    for i, a in enumerate(c):
        out[i * n] = a
    return fmpz_poly(out)


class Scalar:
    """Element of Q(s), s = q^(1/2)."""

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.shift, self.num, self.den = value.shift, value.num, value.den
            self._hash = value._hash
            return
        if isinstance(value, int):
            num, den = fmpz_poly([value]), _ONE_POLY
        elif isinstance(value, Fraction):
            num, den = fmpz_poly([value.numerator]), fmpz_poly([value.denominator])
        else:
            raise TypeError(f"cannot build a Scalar from {type(value).__name__}")
        self.shift = 0
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, shift: int, num: fmpz_poly, den: fmpz_poly) -> "Scalar":
        obj = object.__new__(cls)
        obj.shift = shift
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def from_polys(cls, shift: int, num: fmpz_poly, den: fmpz_poly) -> "Scalar":
        """Normalize ``s**shift * num / den`` into canonical form."""
        if den.is_zero():
            raise ZeroDivisionError("Scalar denominator is zero")
        if num.is_zero():
            return ZERO
        k, num = _strip_s(num)
        shift += k
        k, den = _strip_s(den)
        shift -= k
        if den != _ONE_POLY:
            g = num.gcd(den)
            if g != _ONE_POLY:
                num = num // g
                den = den // g
            if den.coeffs()[-1] < 0:
                num, den = -num, -den
        return cls._raw(shift, num, den)

    @classmethod
    def laurent(cls, coeffs: dict[int, int]) -> "Scalar":
        """Laurent polynomial ``sum c * s**e`` from an exponent map."""
        items = {e: c for e, c in coeffs.items() if c}
        if not items:
            return ZERO
        lo = min(items)
        out = [0] * (max(items) - lo + 1)
        for e, c in items.items():
            out[e - lo] = c
        return cls._raw(lo, fmpz_poly(out), _ONE_POLY)

    @classmethod
    def s_power(cls, k: int) -> "Scalar":
        return cls._raw(k, _ONE_POLY, _ONE_POLY)

    @classmethod
    def q_power(cls, k) -> "Scalar":
        """q**k for integer or half-integer ``k``."""
        two_k = Fraction(k) * 2
        if two_k.denominator != 1:
            raise ValueError(f"q^{k} is not a half-integral power")
        return cls._raw(int(two_k), _ONE_POLY, _ONE_POLY)

    # -- predicates and views -------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        """True when this is a Laurent polynomial in s."""
        return self.den == _ONE_POLY

    def is_q_polynomial(self) -> bool:
        """Integer polynomial in q (no half powers, no negative powers)."""
        if not self.is_laurent():
            return False
        return all(e >= 0 and e % 2 == 0 for e in self.laurent_terms())

    def laurent_terms(self) -> dict[int, int]:
        """Exponent -> coefficient map for a Laurent polynomial in s."""
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial in s")
        return {self.shift + i: int(c) for i, c in enumerate(self.num.coeffs()) if c}

    def as_fraction(self) -> Fraction:
        if self.num.is_zero():
            return Fraction(0)
        if self.shift or self.num.degree() > 0 or self.den.degree() > 0:
            raise ValueError(f"{self} is not a rational constant")
        return Fraction(int(self.num.coeffs()[0]), int(self.den.coeffs()[0]))

    def evaluate_q(self, q0) -> Fraction:
        """Evaluate at an integer or rational value of q.  Half powers are rejected."""
        if self.is_zero():
            return Fraction(0)
        if self.shift % 2:
            raise ValueError(f"{self} has odd powers of s")
        num, den = self.num.coeffs(), self.den.coeffs()
        if any(c for i, c in enumerate(num) if i % 2) or any(c for i, c in enumerate(den) if i % 2):
            raise ValueError(f"{self} has odd powers of s")
        q0 = Fraction(q0)
        top = sum(Fraction(int(c)) * q0 ** (i // 2) for i, c in enumerate(num))
        bottom = sum(Fraction(int(c)) * q0 ** (i // 2) for i, c in enumerate(den))
        if bottom == 0:
            raise ZeroDivisionError(f"{self} has a pole at q={q0}")
        return top / bottom * q0 ** (self.shift // 2)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        lo = min(self.shift, other.shift)
        a = self.num if self.shift == lo else _mul_s(self.num, self.shift - lo)
        b = other.num if other.shift == lo else _mul_s(other.num, other.shift - lo)
        if self.den == _ONE_POLY and other.den == _ONE_POLY:
            total = a + b
            if total.is_zero():
                return ZERO
            k, total = _strip_s(total)
            return Scalar._raw(lo + k, total, _ONE_POLY)
        if self.den == other.den:
            return Scalar.from_polys(lo, a + b, self.den)
        return Scalar.from_polys(lo, a * other.den + b * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        if self.num.is_zero():
            return self
        return Scalar._raw(self.shift, -self.num, self.den)

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
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        shift = self.shift + other.shift
        if self.den == _ONE_POLY and other.den == _ONE_POLY:
            return Scalar._raw(shift, self.num * other.num, _ONE_POLY)
        # cross-cancel before multiplying keeps the gcd inputs small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        num = (self.num // g1) * (other.num // g2)
        den = (self.den // g2) * (other.den // g1)
        if den.coeffs()[-1] < 0:
            num, den = -num, -den
        return Scalar._raw(shift, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        num, den = self.den, self.num
        if den.coeffs()[-1] < 0:
            num, den = -num, -den
        return Scalar._raw(-self.shift, num, den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("Scalar powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        return Scalar._raw(self.shift * k, self.num**k, self.den**k)

    def adams(self, n: int) -> "Scalar":
        """Adams operation s -> s**n; canonical form is preserved."""
        if n < 1:
            raise ValueError("Adams operations are indexed by n >= 1")
        if n == 1 or self.num.is_zero():
            return self
        return Scalar._raw(self.shift * n, _stretch(self.num, n), _stretch(self.den, n))

    def bar(self) -> "Scalar":
        """The involution s -> 1/s (so q -> 1/q)."""
        if self.num.is_zero():
            return self
        rn = fmpz_poly(self.num.coeffs()[::-1])
        rd = fmpz_poly(self.den.coeffs()[::-1])
        shift = -self.shift - self.num.degree() + self.den.degree()
        return Scalar.from_polys(shift, rn, rd)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.shift == other.shift and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.shift == 0 and self.num.degree() <= 0 and self.den.degree() == 0:
                self._hash = hash(self.as_fraction())
            else:
                self._hash = hash((self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    # -- text ------------------------------------------------------------
    def __str__(self):
        if self.num.is_zero():
            return "0"
        top = {self.shift + i: int(c) for i, c in enumerate(self.num.coeffs()) if c}
        if self.den == _ONE_POLY:
            return _render_laurent(top)
        bottom = {i: int(c) for i, c in enumerate(self.den.coeffs()) if c}
        if top[max(top)] < 0:
            return "-" + f"{_wrap({e: -c for e, c in top.items()})}/{_wrap(bottom)}"
        return f"{_wrap(top)}/{_wrap(bottom)}"

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def _mul_s(p: fmpz_poly, k: int) -> fmpz_poly:
    return fmpz_poly([0] * k + p.coeffs())


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return NotImplemented


def _q_exponent(e: int) -> str:
    if e % 2 == 0:
        k = e // 2
        return "q" if k == 1 else (f"q^{k}" if k > 0 else f"q^({k})")
    return f"q^({e}/2)"


def _render_laurent(terms: dict[int, int]) -> str:
    """Descending powers, e.g. ``q^3-q`` or ``2*q^(1/2)+1``."""
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = _q_exponent(e)
        else:
            body = f"{mag}*{_q_exponent(e)}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts)


def _wrap(terms: dict[int, int]) -> str:
    text = _render_laurent(terms)
    if len(terms) == 1:
        (c,) = terms.values()
        if c > 0:
            return text
    return f"({text})"


ZERO = Scalar._raw(0, fmpz_poly([]), _ONE_POLY)
ONE = Scalar._raw(0, _ONE_POLY, _ONE_POLY)
Q = Scalar._raw(2, _ONE_POLY, _ONE_POLY)
S = Scalar._raw(1, _ONE_POLY, _ONE_POLY)


@lru_cache(maxsize=None)
def q_int(k: int) -> Scalar:
    """[k]_q = 1 + q + ... + q^(k-1)."""
    if k < 0:
        raise ValueError(f"q_int needs k >= 0, got {k}")
    return Scalar.laurent({2 * i: 1 for i in range(k)})


@lru_cache(maxsize=None)
def q_factorial(k: int) -> Scalar:
    if k < 0:
        raise ValueError(f"q_factorial needs k >= 0, got {k}")
    out = ONE
    for i in range(1, k + 1):
        out = out * q_int(i)
    return out


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> Scalar:
    if k < 0 or k > n:
        return ZERO
    return q_factorial(n) / (q_factorial(k) * q_factorial(n - k))


# ---------------------------------------------------------------------------
# parsing


class ScalarParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


class _Parser:
    """Recursive descent over + - * / ^ ( ), integers, q and s."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise ScalarParseError(message, self.text, self.pos)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Scalar:
        if not self.peek():
            self.error("empty expression")
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.error("division by zero")
                value = value / rhs
        return value

    def unary(self) -> Scalar:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.unary()
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def exponent(self) -> Fraction:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            sign = 1
            if self.peek() == "-":
                self.pos += 1
                sign = -1
            value = Fraction(self.integer())
            if self.peek() == "/":
                self.pos += 1
                value /= self.integer()
            self.take(")")
            return sign * value
        if ch == "-":
            self.pos += 1
            return Fraction(-self.integer())
        return Fraction(self.integer())

    def power(self) -> Scalar:
        ch = self.peek()
        if ch == "q" or ch == "s":
            self.pos += 1
            gen = ch
            e = Fraction(1)
            if self.peek() == "^":
                self.pos += 1
                at = self.pos
                e = self.exponent()
                if gen == "s" and e.denominator != 1 or gen == "q" and (2 * e).denominator != 1:
                    self.pos = at
                    self.error(f"unsupported exponent {e} on {gen}")
            return Scalar.s_power(int(e)) if gen == "s" else Scalar.q_power(e)
        if ch == "(":
            self.pos += 1
            base = self.expr()
            self.take(")")
        elif ch.isdigit():
            base = Scalar(self.integer())
        else:
            self.error("expected a number, q, s or '('")
        if self.peek() == "^":
            self.pos += 1
            at = self.pos
            e = self.exponent()
            if e.denominator != 1:
                self.pos = at
                self.error("only q may carry fractional exponents")
            if e < 0 and base.is_zero():
                self.error("zero to a negative power")
            base = base ** int(e)
        return base


def parse_scalar(text: str) -> Scalar:
    """Inverse of ``str(Scalar)``; also accepts any arithmetic expression in q and s."""
    return _Parser(text).parse()
