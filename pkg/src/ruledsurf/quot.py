"""Counting epimorphisms O^alpha -> O(n) on P^1 up to scalars."""

from __future__ import annotations

import itertools

from flint import nmod_poly

from .hall import BundleClass
from .scalar import ONE, Q, Scalar

__all__ = [
    "QuotCount",
    "QuotError",
    "h0_dim",
    "g_count",
    "g_count_generic",
    "g_oracle",
    "ORACLE_BUDGET",
]

ORACLE_BUDGET = 3**12


class QuotError(ArithmeticError):
    pass


class QuotCount:
    __slots__ = ("alpha", "n", "value")

    def __init__(self, alpha: BundleClass, n: int):
        self.alpha = alpha
        self.n = n
        self.value = g_count(alpha, n)

    def __repr__(self):
        return f"QuotCount({self.alpha}, {self.n}, {self.value})"


def h0_dim(alpha: BundleClass, n: int) -> int:
    """dim Hom(O^alpha, O(n))."""
    return sum(n - k + 1 for k in alpha.degrees if k <= n)


def g_count(alpha: BundleClass, n: int) -> Scalar:
    h = h0_dim(alpha, n)
    s = sum(1 for k in alpha.degrees if k <= n)
    top = alpha.multiplicity(n)
    body = ONE - (Q + ONE) * Scalar.q_power(-s) + Scalar.q_power(1 + top - 2 * s)
    value = Scalar.q_power(h) * body / (Q - ONE)
    if not value.is_q_polynomial():
        raise QuotError(f"g({alpha}, {n}) = {value} is not a polynomial in q")
    return value


def g_count_generic(r: int, d: int, n: int) -> Scalar:
    """Closed form valid when n exceeds every summand degree."""
    return Scalar.q_power(n * r - r - d + 1) * (Q**r - ONE) * (Q ** (r - 1) - ONE) / (Q - ONE)


def _is_epimorphism(forms: list[tuple[int, ...]], p: int) -> bool:
    """Forms (coefficients of x^0 y^d, ..., x^d y^0) have no common zero on P^1."""
    nonzero = [f for f in forms if any(f)]
    if not nonzero:
        return False
    # a common factor y means every form lacks its x^d coefficient
    if all(f[-1] == 0 for f in nonzero):
        return False
    g = None
    for f in nonzero:
        poly = nmod_poly(list(f), p)
        g = poly if g is None else g.gcd(poly)
        if g.degree() == 0:
            return True
    return g.degree() == 0


def g_oracle(alpha: BundleClass, n: int, q0: int, budget: int = ORACLE_BUDGET) -> int:
    """Brute-force count over F_q0 of epimorphisms O^alpha -> O(n) modulo F_q0^*."""
    if q0 not in (2, 3):
        raise QuotError("the oracle supports q0 in {2, 3}")
    degs = [n - k for k in alpha.degrees if k <= n]
    h = sum(d + 1 for d in degs)
    if q0**h > budget:
        raise QuotError(f"oracle enumeration of {q0}^{h} tuples exceeds the budget")
    count = 0
    for flat in itertools.product(range(q0), repeat=h):
        forms, pos = [], 0
        for d in degs:
            forms.append(flat[pos:pos + d + 1])
            pos += d + 1
        if _is_epimorphism(forms, q0):
            count += 1
    if count % (q0 - 1):
        raise QuotError("epimorphism count not divisible by |Aut O(n)|")
    return count // (q0 - 1)
