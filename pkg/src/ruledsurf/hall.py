"""Hall algebra of vector bundles on P^1.

Basis elements [O^alpha] are indexed by :class:`BundleClass`, a sorted tuple of
line-bundle degrees.  Products are computed by writing each basis element as
an ascending word of line bundles (divided by q-factorials of the
multiplicities), concatenating, and straightening descending adjacent pairs
with the rank-two commutation relation until the word is ascending.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .scalar import ONE, Q, ZERO, Scalar, parse_scalar, q_factorial

__all__ = [
    "BundleClass",
    "HallElement",
    "HallParseError",
    "StraighteningError",
    "euler_form_p1",
    "hall_mul",
    "skew_derivation",
    "b_sum",
    "straighten",
    "word_weight",
    "parse_bundle_class",
    "parse_hall_element",
]


class HallParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


class StraighteningError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class BundleClass:
    """O^alpha as the sorted tuple of its summand degrees."""

    degrees: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(int(d) for d in self.degrees)))

    @classmethod
    def from_multiplicities(cls, alpha: Mapping[int, int]) -> "BundleClass":
        out = []
        for k, m in alpha.items():
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            out.extend([k] * m)
        return cls(tuple(out))

    @classmethod
    def line(cls, n: int) -> "BundleClass":
        return cls((n,))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    @property
    def mn(self) -> int:
        if not self.degrees:
            raise ValueError("mn of the zero bundle")
        return self.degrees[0]

    @property
    def mx(self) -> int:
        if not self.degrees:
            raise ValueError("mx of the zero bundle")
        return self.degrees[-1]

    def multiplicity(self, k: int) -> int:
        return self.degrees.count(k)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.degrees))

    def __add__(self, other: "BundleClass") -> "BundleClass":
        return BundleClass(self.degrees + other.degrees)

    def twist(self, n: int) -> "BundleClass":
        """alpha[n]: tensor with O(n)."""
        return BundleClass(tuple(d + n for d in self.degrees))

    def dual(self) -> "BundleClass":
        return BundleClass(tuple(-d for d in self.degrees))

    def __str__(self):
        if not self.degrees:
            return "0"
        parts = []
        for k, m in sorted(self.multiplicities().items()):
            parts.append(f"O({k})" if m == 1 else f"{m}O({k})")
        return "+".join(parts)


def euler_form_p1(a: BundleClass, b: BundleClass) -> int:
    """chi(O^a, O^b) = rk a deg b - deg a rk b + rk a rk b."""
    return a.rank * b.degree - a.degree * b.rank + a.rank * b.rank


# -- straightening --------------------------------------------------------

Word = tuple[int, ...]


def word_weight(word: Word) -> int:
    """Sum of inversion gaps; every rewrite strictly lowers it."""
    return sum(max(0, word[i] - word[j]) for i in range(len(word)) for j in range(i + 1, len(word)))


@lru_cache(maxsize=None)
def _pair_rewrite(n: int, m: int) -> tuple[tuple[tuple[int, int], Scalar], ...]:
    """O(n)O(m) for n > m as a combination of ascending two-letter words."""
    gap = n - m
    out = [((m, n), Scalar.q_power(gap + 1))]
    base = Scalar.q_power(gap - 1)
    for i in range(1, gap // 2 + 1):
        a, b = m + i, n - i
        # [O(c)+O(c)] is the word O(c)O(c) divided by [2]_q = 1 + q
        coeff = base * (Q * Q - ONE) if a < b else base * (Q - ONE)
        out.append(((a, b), coeff))
    return tuple(out)


def _first_descent(word: Word) -> int:
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            return i
    return -1


def _rewrite_at(word: Word, i: int):
    n, m = word[i], word[i + 1]
    for (a, b), c in _pair_rewrite(n, m):
        yield word[:i] + (a, b) + word[i + 2:], c


@lru_cache(maxsize=200_000)
def _straighten_cached(word: Word) -> tuple[tuple[Word, Scalar], ...]:
    i = _first_descent(word)
    if i < 0:
        return ((word, ONE),)
    w0 = word_weight(word)
    acc: dict[Word, Scalar] = {}
    for new, c in _rewrite_at(word, i):
        if word_weight(new) >= w0:
            raise StraighteningError(f"rewrite of {word} did not lower the weight")
        for asc, d in _straighten_cached(new):
            acc[asc] = acc.get(asc, ZERO) + c * d
    return tuple((w, c) for w, c in acc.items() if c)


def straighten(word: Iterable[int], rng: random.Random | None = None, fuel: int = 10_000_000) -> dict[Word, Scalar]:
    """Expand a word of line bundles into ascending words.

    With ``rng`` the descending pair to rewrite is picked at random on every
    step (no caching); this exercises independence of the rewrite order.
    """
    word = tuple(word)
    if rng is None:
        return dict(_straighten_cached(word))
    todo: dict[Word, Scalar] = {word: ONE}
    done: dict[Word, Scalar] = {}
    while todo:
        fuel -= 1
        if fuel < 0:
            raise StraighteningError("straightening ran out of fuel")
        w = rng.choice(sorted(todo))
        c = todo.pop(w)
        if not c:
            continue
        descents = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
        if not descents:
            done[w] = done.get(w, ZERO) + c
            continue
        i = rng.choice(descents)
        w0 = word_weight(w)
        for new, d in _rewrite_at(w, i):
            if word_weight(new) >= w0:
                raise StraighteningError(f"rewrite of {w} did not lower the weight")
            todo[new] = todo.get(new, ZERO) + c * d
    return {w: c for w, c in done.items() if c}


def _divided_norm(cls_: BundleClass) -> Scalar:
    """[O^alpha] = (ascending word) / prod [alpha_k]_q!."""
    out = ONE
    for m in cls_.multiplicities().values():
        if m > 1:
            out = out * q_factorial(m)
    return out


@lru_cache(maxsize=100_000)
def _basis_product(a: BundleClass, b: BundleClass) -> tuple[tuple[BundleClass, Scalar], ...]:
    if not a.degrees or not b.degrees:
        return ((a + b, ONE),)
    if a.mx < b.mn:
        return ((a + b, ONE),)
    scale = (_divided_norm(a) * _divided_norm(b)).inverse()
    acc: dict[BundleClass, Scalar] = {}
    for w, c in _straighten_cached(a.degrees + b.degrees):
        cls_ = BundleClass(w)
        acc[cls_] = acc.get(cls_, ZERO) + c * _divided_norm(cls_)
    return tuple(sorted((k, v * scale) for k, v in acc.items() if v))


# -- elements ---------------------------------------------------------------


class HallElement:
    """Finite linear combination of basis classes with Scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[BundleClass, Scalar] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = v if isinstance(v, Scalar) else Scalar(v)
            if v:
                clean[k] = v
        self.terms = clean

    @classmethod
    def basis(cls, cls_: BundleClass | Iterable[int], coeff=ONE) -> "HallElement":
        if not isinstance(cls_, BundleClass):
            cls_ = BundleClass(tuple(cls_))
        return cls({cls_: coeff})

    @classmethod
    def line(cls, n: int) -> "HallElement":
        return cls.basis(BundleClass.line(n))

    def __add__(self, other: "HallElement") -> "HallElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return HallElement(out)

    def __neg__(self):
        return HallElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HallElement":
        return HallElement({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return hall_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, HallElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, cls_: BundleClass) -> Scalar:
        return self.terms.get(cls_, ZERO)

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for k in sorted(self.terms):
            c = self.terms[k]
            text, sign = str(c), "+"
            neg = str(-c)
            if text.startswith("-") and not neg.startswith("-"):
                text, sign = neg, "-"
            if text == "1":
                body = f"[{k}]"
            elif any(ch in text[1:] for ch in "+-/") or text.startswith("-"):
                body = f"({text})*[{k}]"
            else:
                body = f"{text}*[{k}]"
            if not out:
                out = body if sign == "+" else "-" + body
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"HallElement({str(self)!r})"


def hall_mul(x: HallElement, y: HallElement) -> HallElement:
    acc: dict[BundleClass, Scalar] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            cab = ca * cb
            for k, v in _basis_product(a, b):
                acc[k] = acc.get(k, ZERO) + cab * v
    return HallElement(acc)


def skew_derivation(n: int, x: HallElement) -> HallElement:
    """q^{-chi(O(n), F)} F o O(n) - O(n) o F, linearly in F."""
    line = HallElement.line(n)
    ln = BundleClass.line(n)
    out = HallElement()
    for cls_, c in x.terms.items():
        f = HallElement.basis(cls_, c)
        w = Scalar.q_power(-euler_form_p1(ln, cls_))
        out = out + hall_mul(f, line).scale(w) - hall_mul(line, f)
    return out


def _partitions(total: int, parts: int, cap: int | None = None):
    """Non-increasing tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    top = total if cap is None else min(total, cap)
    for first in range(top, -1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def b_sum(r: int, d: int, n: int) -> HallElement:
    """Sum of [O^alpha] over rank r, degree d, every summand degree > n."""
    if r < 1:
        raise ValueError("b_sum needs r >= 1")
    excess = d - r * (n + 1)
    if excess < 0:
        return HallElement()
    terms = {}
    for p in _partitions(excess, r):
        terms[BundleClass(tuple(n + 1 + x for x in p))] = ONE
    return HallElement(terms)


# -- parsing ------------------------------------------------------------------

_SUMMAND = re.compile(r"\s*(\d*)\s*O\(\s*(-?\d+)\s*\)\s*")


def parse_bundle_class(text: str) -> BundleClass:
    """Parse ``O(-1)+2O(0)+O(3)``; ``0`` is the zero bundle."""
    if text.strip() == "0":
        return BundleClass(())
    degrees: list[int] = []
    pos = 0
    while True:
        m = _SUMMAND.match(text, pos)
        if not m or m.end() == pos:
            raise HallParseError("expected a summand like 2O(-1)", text, pos)
        mult = int(m.group(1)) if m.group(1) else 1
        degrees.extend([int(m.group(2))] * mult)
        pos = m.end()
        if pos == len(text):
            return BundleClass(tuple(degrees))
        if text[pos] != "+":
            raise HallParseError("expected '+'", text, pos)
        pos += 1


def parse_hall_element(text: str) -> HallElement:
    """Parse the rendering of :class:`HallElement` or a bare bundle class."""
    if "[" not in text:
        return HallElement.basis(parse_bundle_class(text))
    out = HallElement()
    pos = 0
    while pos < len(text):
        lb = text.find("[", pos)
        if lb < 0:
            if text[pos:].strip():
                raise HallParseError("trailing text", text, pos)
            break
        rb = text.find("]", lb)
        if rb < 0:
            raise HallParseError("unclosed '['", text, lb)
        prefix = text[pos:lb].strip()
        sign = ONE
        if prefix.startswith("+"):
            prefix = prefix[1:].strip()
        elif prefix.startswith("-"):
            sign = -ONE
            prefix = prefix[1:].strip()
        elif out.terms:
            raise HallParseError("expected '+' or '-' between terms", text, pos)
        if prefix.endswith("*"):
            prefix = prefix[:-1].strip()
        elif prefix:
            raise HallParseError("expected '*' before '['", text, lb)
        try:
            coeff = parse_scalar(prefix) if prefix else ONE
        except ValueError as exc:
            raise HallParseError(f"bad coefficient ({exc})", text, pos) from exc
        try:
            cls_ = parse_bundle_class(text[lb + 1:rb])
        except HallParseError as exc:
            raise HallParseError("bad bundle class", text, lb + 1 + exc.pos) from exc
        out = out + HallElement.basis(cls_, coeff * sign)
        pos = rb + 1
    return out
