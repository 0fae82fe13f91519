"""Wall-crossing in the quantum affine plane and blow-up ratios.

A wall is a polarization ray H where classes of equal rank-normalized
H-slope can still differ in H'-slope.  The tables on either side, at
H +/- eps H', are related to the table at H by sums over ordered
slope decompositions; crossing a wall composes one such sum with the
inverse of the other.  Perturbations are never numeric: the sides are
encoded by comparing H-slopes first and H'-slopes second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .genfun import GenSeries, GenSeriesError, pf_from_pfa, pfa_f
from .geometry import (
    ChernData,
    DivisorClass,
    RuledSurface,
    euler_antisym,
    in_positive_cone,
    intersect,
    polarization_divisor,
)
from .curve import CurveData
from .scalar import ONE, Scalar
from .series import TruncatedSeries

__all__ = [
    "QAffineTerm",
    "WallContext",
    "WallError",
    "MissingSeries",
    "EnumerationError",
    "Decomposition",
    "qaffine_mul",
    "decompositions",
    "SeriesTable",
    "rank_one_provider",
    "wall_value",
    "side_value",
    "wallcross",
    "cross_wall",
    "blowup_theta",
    "blowup_ratio_tf",
    "blowup_ratio_lf",
    "pullback_pf",
]


class WallError(ValueError):
    pass


class MissingSeries(WallError):
    pass


class EnumerationError(WallError):
    pass


# -- quantum affine plane ---------------------------------------------------------


@dataclass(frozen=True)
class QAffineTerm:
    r: int
    c: DivisorClass
    d: Fraction
    coeff: Scalar = ONE

    def gamma(self) -> ChernData:
        # only rank and c1 enter the pairing; c2 is irrelevant here
        return ChernData(self.r, self.c, 0)


def qaffine_mul(a: QAffineTerm, b: QAffineTerm, surface: RuledSurface) -> QAffineTerm:
    """x^a o x^b = q^{<a,b>/2} x^{a+b}."""
    pairing = euler_antisym(surface, a.gamma(), b.gamma())
    return QAffineTerm(
        a.r + b.r,
        a.c + b.c,
        Fraction(a.d) + Fraction(b.d),
        a.coeff * b.coeff * Scalar.q_power(pairing / 2),
    )


# -- walls ---------------------------------------------------------------------------


Ray = tuple[Fraction, Fraction]


def _ray(x) -> Ray:
    return (Fraction(x[0]), Fraction(x[1]))


@dataclass(frozen=True)
class WallContext:
    surface: RuledSurface
    wall: Ray  # H = H_{m,n}
    perturb: Ray  # H' = H_{m',n'}
    direction: str = "plus"

    def __post_init__(self):
        object.__setattr__(self, "wall", _ray(self.wall))
        object.__setattr__(self, "perturb", _ray(self.perturb))
        if self.direction not in ("plus", "minus"):
            raise WallError(f"direction must be plus or minus, not {self.direction!r}")
        s = self.surface
        h, hp = self.h_divisor, self.hp_divisor
        if self.wall == (0, 0) or not in_positive_cone(s, h):
            raise WallError(f"wall {self.wall} is not a nonzero ray in the positive cone")
        if not in_positive_cone(s, hp):
            raise WallError(f"perturbation {self.perturb} is not in the positive cone")
        if intersect(h, s.canonical, s) >= 0:
            raise WallError("wall-crossing needs H.K_S < 0")
        if self.direction == "minus" and not self.minus_side_nef():
            raise WallError("H - eps H' is not nef")

    @property
    def h_divisor(self) -> DivisorClass:
        return polarization_divisor(self.surface, *self.wall)

    @property
    def hp_divisor(self) -> DivisorClass:
        return polarization_divisor(self.surface, *self.perturb)

    def minus_side_nef(self) -> bool:
        s, h, hp = self.surface, self.h_divisor, self.hp_divisor
        for gen in (DivisorClass(1, 0), DivisorClass(0, 1)):
            a, b = intersect(h, gen, s), intersect(hp, gen, s)
            if a < 0 or (a == 0 and b > 0):
                return False
        return True

    def mu(self, r: int, c: DivisorClass) -> Fraction:
        return intersect(self.h_divisor, c, self.surface) / r

    def mu_perturb(self, r: int, c: DivisorClass) -> Fraction:
        return intersect(self.hp_divisor, c, self.surface) / r

    def with_direction(self, direction: str) -> "WallContext":
        return WallContext(self.surface, self.wall, self.perturb, direction)


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[tuple[int, DivisorClass], ...]
    weight: Scalar  # q^{1/2 sum_{i<j} <gamma_i, gamma_j>}
    bound: Fraction  # smallest t-exponent the product can reach


def _integral_line(alpha: int, beta: int, value: int):
    """(point, step) with alpha*x + beta*y = value on point + Z*step, or None."""
    g = math.gcd(alpha, beta)
    if value % g:
        return None
    # extended Euclid
    old_r, r = alpha, beta
    old_s, s_ = 1, 0
    old_t, t_ = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s_ = s_, old_s - k * s_
        old_t, t_ = t_, old_t - k * t_
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    scale = value // g
    point = (old_s * scale, old_t * scale)
    step = (beta // g, -alpha // g)
    return point, step


def _ordered_compositions(r: int, min_parts: int = 1):
    if r == 0:
        yield ()
        return
    for first in range(1, r + 1):
        for rest in _ordered_compositions(r - first):
            out = (first,) + rest
            if len(out) >= min_parts:
                yield out


def _sq(surface: RuledSurface, d: DivisorClass) -> Fraction:
    return intersect(d, d, surface)


def decompositions(
    ctx: WallContext,
    r: int,
    c: DivisorClass,
    order,
    extra: int = 0,
    min_parts: int = 1,
) -> list[Decomposition]:
    """Ordered decompositions of (r, c) with equal H-slope and strictly monotone H'-slope.

    Only decompositions whose Bogomolov lower bound on the t-exponent is at
    most ``order + extra`` are returned; the others cannot contribute.
    """
    s = ctx.surface
    order = Fraction(order)
    if r < 1:
        raise WallError("rank must be positive")
    h = ctx.h_divisor
    if r >= 2 and intersect(h, h, s) <= 0:
        raise EnumerationError("decompositions are infinite when H^2 = 0; pick a wall with H^2 > 0")
    alpha, beta = intersect(h, DivisorClass(1, 0), s), intersect(h, DivisorClass(0, 1), s)
    scale = math.lcm(alpha.denominator, beta.denominator)
    a_int, b_int = int(alpha * scale), int(beta * scale)
    hc = a_int * c.a + b_int * c.b
    budget = order + extra + _sq(s, c) / (2 * r)
    out = []
    for ranks in _ordered_compositions(r, min_parts):
        lines = []
        for ri in ranks:
            value = hc * ri / r
            if value.denominator != 1:
                break
            line = _integral_line(a_int, b_int, int(value))
            if line is None:
                break
            lines.append(line)
        else:
            for parts in _enumerate_parts(s, c, r, ranks, lines, budget):
                out.append(parts)
    result = []
    sign = 1 if ctx.direction == "plus" else -1
    for parts in out:
        slopes = [ctx.mu_perturb(ri, ci) for ri, ci in parts]
        if not all(sign * (slopes[i] - slopes[i + 1]) > 0 for i in range(len(slopes) - 1)):
            continue
        w = Fraction(0)
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                gi = ChernData(parts[i][0], parts[i][1], 0)
                gj = ChernData(parts[j][0], parts[j][1], 0)
                w += euler_antisym(s, gi, gj)
        bound = sum(-_sq(s, ci) / (2 * ri) for ri, ci in parts)
        result.append(Decomposition(tuple(parts), Scalar.q_power(w / 2), bound))
    result.sort(key=lambda d: (len(d.parts), [(ri, ci.a, ci.b) for ri, ci in d.parts]))
    return result


def _enumerate_parts(s, c, r, ranks, lines, budget):
    """All (r_i, c_i) with c_i on the given lines, summing to c, within the budget."""
    k = len(ranks)
    step = DivisorClass(*lines[0][1])
    w2 = -_sq(s, step)  # positive on H-perp by Hodge index
    if k == 1:
        if ranks[0] == r:
            yield [(r, c)]
        return

    def j_range(ri, point):
        # -(d0 + j w)^2 / (2 ri) <= budget with d0 = point - (ri/r) c
        d0 = DivisorClass(*point) - c * Fraction(ri, r)
        a2 = w2
        a1 = -2 * intersect(d0, step, s)
        a0 = -_sq(s, d0)
        # a2 j^2 + a1 j + a0 <= 2 ri budget
        rhs = 2 * ri * budget - a0
        disc = a1 * a1 + 4 * a2 * rhs
        if disc < 0:
            return range(0)
        root = math.isqrt(max(0, math.floor(disc))) + 1
        lo = math.floor((-a1 - root) / (2 * a2)) - 1
        hi = math.ceil((-a1 + root) / (2 * a2)) + 1
        return range(lo, hi + 1)

    ranges = []
    for ri, (point, _) in zip(ranks[:-1], lines[:-1]):
        ranges.append([(DivisorClass(*point) + step * j) for j in j_range(ri, point)])

    def rec(i, acc, used):
        if i == k - 1:
            last = c - acc
            ri = ranks[-1]
            if not last.is_integral():
                return
            parts = used + [(ri, last)]
            total = sum(-_sq(s, cj - c * Fraction(rj, r)) / (2 * rj) for rj, cj in parts)
            if total <= budget:
                yield parts
            return
        for ci in ranges[i]:
            yield from rec(i + 1, acc + ci, used + [(ranks[i], ci)])

    yield from rec(0, DivisorClass(0, 0), [])


# -- series tables -------------------------------------------------------------------

Provider = Callable[[int, DivisorClass, Fraction], TruncatedSeries]


def rank_one_provider(surface: RuledSurface, curve: CurveData) -> Provider:
    """pf(1, c) is independent of the polarization; computed from the fibre formula."""
    cache: dict[Fraction, TruncatedSeries] = {}

    def provide(r: int, c: DivisorClass, order: Fraction) -> TruncatedSeries:
        if r != 1:
            raise MissingSeries(f"no series for rank {r}, c1 = {c}")
        # pfa(1, c) is c-independent; only the shift in pf depends on c^2
        csq = intersect(c, c, surface)
        need = order + csq / 2
        need_int = Fraction(max(0, math.ceil(need)))
        base = cache.get(need_int)
        if base is None:
            base = pfa_f(surface, curve, 1, DivisorClass(0, 0), "tf", need_int).series
            cache[need_int] = base
        g = GenSeries(surface, curve, 1, c, (0, 1), "tf", "pfa", base)
        return pf_from_pfa(g).series

    return provide


class SeriesTable:
    """pf-normalized tf series keyed by (rank, c1), with a fallback provider."""

    def __init__(self, entries: Mapping[tuple[int, DivisorClass], TruncatedSeries], fallback: Provider | None = None):
        self.entries = dict(entries)
        self.fallback = fallback

    def get(self, r: int, c: DivisorClass, order: Fraction) -> TruncatedSeries:
        hit = self.entries.get((r, c))
        if hit is not None:
            return hit
        if self.fallback is not None:
            return self.fallback(r, c, order)
        raise MissingSeries(f"no series for rank {r}, c1 = {c}")

    def __contains__(self, key):
        return key in self.entries


def _factor_need(dec: Decomposition, s: RuledSurface, index: int, order: Fraction) -> Fraction:
    """Order factor ``index`` must have so the product is exact through ``order``."""
    others = dec.bound - (-_sq(s, dec.parts[index][1]) / (2 * dec.parts[index][0]))
    return order - others


def _decomposition_sum(
    ctx: WallContext, decs: Iterable[Decomposition], lookup, order: Fraction
) -> TruncatedSeries:
    s = ctx.surface
    total = TruncatedSeries.zero(order)
    for dec in decs:
        prod = TruncatedSeries.constant(dec.weight)
        for i, (ri, ci) in enumerate(dec.parts):
            prod = prod.mul_sharp(lookup(ri, ci, _factor_need(dec, s, i, order)))
        total = total + prod.truncate(order)
    return total


def wall_value(ctx: WallContext, side: SeriesTable, r: int, c: DivisorClass, order, extra: int = 0) -> TruncatedSeries:
    """pf_H(r, c) from the tables at H + eps H' (plus) or H - eps H' (minus)."""
    order = Fraction(order)
    if r == 1:
        return side.get(1, c, order).truncate(order)
    decs = decompositions(ctx, r, c, order, extra)
    return _decomposition_sum(ctx, decs, side.get, order)


def side_value(
    ctx: WallContext,
    at_wall: Callable[[int, DivisorClass, Fraction], TruncatedSeries],
    r: int,
    c: DivisorClass,
    order,
    extra: int = 0,
    memo: dict | None = None,
) -> TruncatedSeries:
    """Invert the decomposition sum: the table on ctx.direction's side from values at H."""
    order = Fraction(order)
    memo = {} if memo is None else memo
    key = (r, c, order)
    if key in memo:
        return memo[key]
    if r == 1:
        out = at_wall(1, c, order).truncate(order)
        memo[key] = out
        return out
    lower = decompositions(ctx, r, c, order, extra, min_parts=2)

    def lookup(ri, ci, need):
        return side_value(ctx, at_wall, ri, ci, need, extra, memo)

    out = (at_wall(r, c, order) - _decomposition_sum(ctx, lower, lookup, order)).truncate(order)
    memo[key] = out
    return out


def wallcross(ctx: WallContext, inputs: Mapping[tuple[int, DivisorClass], GenSeries], r: int, c: DivisorClass, order, extra: int = 0) -> GenSeries:
    """pf_H(r, c) as a GenSeries from pf-normalized inputs on ctx.direction's side."""
    table, _ = _table_from_inputs(ctx, inputs)
    series = wall_value(ctx, table, r, c, order, extra)
    proto = _prototype(inputs, ctx, r, c)
    return proto.with_series(series, polarization=ctx.wall, perturbation=None)


def cross_wall(
    ctx: WallContext,
    inputs: Mapping[tuple[int, DivisorClass], GenSeries],
    targets: Iterable[tuple[int, DivisorClass, Fraction]] | None = None,
    source: str | None = None,
    target: str | None = None,
    extra: int = 0,
) -> dict[tuple[int, DivisorClass], GenSeries]:
    """Move tables between the sides of a wall: source/target in {plus, minus, wall}.

    ``source`` defaults to ctx.direction and ``target`` to the other side.
    """
    source = source or ctx.direction
    target = target or ("minus" if source == "plus" else "plus")
    for side in (source, target):
        if side not in ("plus", "minus", "wall"):
            raise WallError(f"unknown side {side!r}")
    if targets is None:
        targets = [(k[0], k[1], Fraction(g.series.order)) for k, g in inputs.items()]
    targets = list(targets)
    if source == target:
        return {
            (r, c): _label(inputs[(r, c)], ctx, target) for r, c, _ in targets
        }
    plus_ctx, minus_ctx = ctx.with_direction("plus"), None
    if "minus" in (source, target):
        minus_ctx = ctx.with_direction("minus")
    src_ctx = plus_ctx if source == "plus" else minus_ctx if source == "minus" else None
    dst_ctx = plus_ctx if target == "plus" else minus_ctx if target == "minus" else None

    table, _ = _table_from_inputs(ctx, inputs)

    if src_ctx is None:
        def at_wall(ri, ci, need):
            return table.get(ri, ci, need)
    else:
        cache: dict = {}

        def at_wall(ri, ci, need):
            key = (ri, ci, need)
            if key not in cache:
                cache[key] = wall_value(src_ctx, table, ri, ci, need, extra)
            return cache[key]

    out = {}
    memo: dict = {}
    for r, c, order in targets:
        if dst_ctx is None:
            series = at_wall(r, c, order)
        else:
            series = side_value(dst_ctx, at_wall, r, c, order, extra, memo)
        proto = _prototype(inputs, ctx, r, c)
        out[(r, c)] = _label(proto.with_series(series), ctx, target)
    return out


def _label(g: GenSeries, ctx: WallContext, side: str) -> GenSeries:
    if side == "wall":
        return g.with_series(g.series, polarization=ctx.wall, perturbation=None)
    return g.with_series(g.series, polarization=ctx.wall, perturbation=(ctx.perturb, side))


def _table_from_inputs(ctx: WallContext, inputs: Mapping[tuple[int, DivisorClass], GenSeries]):
    entries = {}
    curve = None
    for key, g in inputs.items():
        if g.normalization != "pf" or g.flag != "tf":
            raise WallError("wall-crossing works on pf-normalized torsion-free series")
        if g.surface != ctx.surface:
            raise WallError("input series live on a different surface")
        entries[key] = g.series
        curve = g.curve
    fallback = rank_one_provider(ctx.surface, curve) if curve is not None else None
    return SeriesTable(entries, fallback), fallback


def _prototype(inputs, ctx: WallContext, r: int, c: DivisorClass) -> GenSeries:
    if (r, c) in inputs:
        return inputs[(r, c)]
    some = next(iter(inputs.values()), None)
    if some is None:
        raise MissingSeries("no input series")
    return GenSeries(ctx.surface, some.curve, r, c, ctx.wall, "tf", "pf", TruncatedSeries.zero())


# -- blow-up ----------------------------------------------------------------------------


def blowup_theta(r: int, m: int, order) -> TruncatedSeries:
    """sum over a in Z^r with sum a = -m of q^{(rho,a)} t^{(a,a)/2}, rho_i = (r+1-2i)/2."""
    if r < 1:
        raise WallError("rank must be positive")
    order = Fraction(order)
    rho = [Fraction(r + 1 - 2 * i, 2) for i in range(1, r + 1)]
    box = math.isqrt(max(0, math.floor(2 * order))) + 1
    terms: dict[tuple[Fraction, int], Scalar] = {}

    def rec(prefix):
        if len(prefix) == r - 1:
            a = prefix + [-m - sum(prefix)]
            norm = Fraction(sum(x * x for x in a), 2)
            if norm <= order:
                key = (norm, 0)
                w = sum(ri * ai for ri, ai in zip(rho, a))
                terms[key] = terms.get(key, Scalar(0)) + Scalar.q_power(w)
            return
        for x in range(-box, box + 1):
            rec(prefix + [x])

    rec([])
    return TruncatedSeries.from_terms(terms, order)


def _euler_factor(r: int, order: Fraction) -> TruncatedSeries:
    out = TruncatedSeries.one(order)
    for k in range(1, math.floor(order) + 1):
        g = TruncatedSeries.geometric(1, k, 0, order)
        for _ in range(r):
            out = out * g
    return out


def blowup_ratio_tf(r: int, m: int, order) -> TruncatedSeries:
    order = Fraction(order)
    return _euler_factor(r, order) * blowup_theta(r, m, order)


def blowup_ratio_lf(r: int, m: int, order) -> TruncatedSeries:
    order = Fraction(order)
    out = TruncatedSeries.one(order)
    for k in range(1, math.floor(order) + 1):
        for i in range(1, r):
            out = out * TruncatedSeries(1, 0, {(0, 0): ONE, (k, 0): -Scalar.q_power(-i)}, order)
            out = out * TruncatedSeries.geometric(1, k, 0, order)
    return out * blowup_theta(r, m, order)


def pullback_pf(g: GenSeries, m: int, order=None) -> GenSeries:
    """pf on the one-point blow-up for c1' = pi^* c1 + m E (E the exceptional curve)."""
    if g.normalization != "pf":
        raise GenSeriesError("pullback_pf needs a pf-normalized series")
    order = g.series.order if order is None else Fraction(order)
    if order == math.inf:
        raise WallError("pullback_pf needs a finite order")
    ratio = blowup_ratio_tf(g.rank, -m, order) if g.flag == "tf" else blowup_ratio_lf(g.rank, -m, order)
    series = (g.series * ratio).truncate(order)
    return g.with_series(series, exceptional=g.exceptional + (m,))
