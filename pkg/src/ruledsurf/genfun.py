"""Generating functions of f-semistable sheaves on a ruled surface.

Series are kept in two gradings:

* ``pfa``: t^{r Delta}, invariant under twisting by line bundles;
* ``pf``: q^{chi(E,E)/2} t^{-ch2}, additive under extensions.

Everything is a stack measure; the (q-1) factor relating stacks to coarse
spaces is applied only by :func:`betti_extract` on request.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any

from .curve import CurveData, poincare_curve
from .geometry import DivisorClass, RuledSurface, intersect
from .scalar import ONE, Q, Scalar, parse_scalar
from .series import INF, TruncatedSeries

__all__ = [
    "GenSeries",
    "GenSeriesError",
    "BettiTable",
    "bun_measure",
    "quot_series",
    "pfa_f",
    "pf_from_pfa",
    "pfa_from_pf",
    "tf_lf_consistency",
    "hilbert_points_series",
    "betti_extract",
    "genseries_to_json",
    "genseries_from_json",
]


class GenSeriesError(ValueError):
    pass


def _frac_out(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _frac_in(x) -> Fraction:
    return Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator()


@dataclass(frozen=True)
class GenSeries:
    surface: RuledSurface
    curve: CurveData
    rank: int
    c1: DivisorClass
    polarization: tuple[Fraction, Fraction]
    flag: str  # "lf" | "tf"
    normalization: str  # "pf" | "pfa"
    series: TruncatedSeries
    perturbation: tuple[tuple[Fraction, Fraction], str] | None = None
    exceptional: tuple[int, ...] = ()  # c1 . (exceptional curve) for each blow-up

    def __post_init__(self):
        if self.flag not in ("lf", "tf"):
            raise GenSeriesError(f"unknown flag {self.flag!r}")
        if self.normalization not in ("pf", "pfa"):
            raise GenSeriesError(f"unknown normalization {self.normalization!r}")
        if self.rank < 1:
            raise GenSeriesError("rank must be positive")
        object.__setattr__(
            self, "polarization", (Fraction(self.polarization[0]), Fraction(self.polarization[1]))
        )

    @property
    def blowups(self) -> int:
        return len(self.exceptional)

    @property
    def c1_square(self) -> Fraction:
        return intersect(self.c1, self.c1, self.surface) - sum(m * m for m in self.exceptional)

    @property
    def c2_offset(self) -> Fraction:
        """t-exponent minus c2."""
        r, c1sq = self.rank, self.c1_square
        if self.normalization == "pfa":
            return Fraction(1 - r, 2 * r) * c1sq
        return -c1sq / 2

    @property
    def order(self):
        return self.series.order

    def with_series(self, series: TruncatedSeries, **changes) -> "GenSeries":
        return replace(self, series=series, **changes)


# -- assembly -------------------------------------------------------------------


def bun_measure(curve: CurveData, r: int) -> Scalar:
    """mu(Bun_{C,r}) = P_C(1)/(q-1) prod_{i<r} Z_C(q^i)."""
    if r < 1:
        raise GenSeriesError("rank must be positive")
    out = curve.jacobian_measure() / (Q - ONE)
    for i in range(1, r):
        out = out * curve.zeta_value(Q**i)
    return out


def _kproduct(factor, order) -> TruncatedSeries:
    """prod_{k>=1} factor(k); a factor at index k starts at t^k, so k <= order suffices."""
    out = TruncatedSeries.one(order)
    top = math.floor(order)
    for k in range(1, top + 1):
        out = out * factor(k)
    spare = factor(top + 1)
    if not spare.agrees_with(TruncatedSeries.one(order), order):
        raise GenSeriesError("product factor beyond the truncation order is not trivial")
    return out


def quot_series(curve: CurveData, r: int, order, blowups: int = 0) -> TruncatedSeries:
    """H_r(t) = prod_k prod_{i=1}^r Z_S(q^{kr-i} t^k) with Z_S(t) = Z_C(t) Z_C(qt) / (1-qt)^blowups."""
    order = Fraction(order)

    def factor(k):
        out = TruncatedSeries.one(order)
        for i in range(1, r + 1):
            a = Scalar.q_power(k * r - i)
            out = out * curve.zeta_series(a, k, order) * curve.zeta_series(a * Q, k, order)
            for _ in range(blowups):
                out = out * TruncatedSeries.geometric(a * Q, k, 0, order)
        return out

    return _kproduct(factor, order)


def hilbert_points_series(surface_measure: Scalar, order) -> TruncatedSeries:
    """sum_n mu(Hilb^n S) t^n = prod_k Exp(mu(S) q^{k-1} t^k), built from the plethystic Exp."""
    order = Fraction(order)
    gen = TruncatedSeries.zero(order)
    for k in range(1, math.floor(order) + 1):
        gen = gen + TruncatedSeries.monomial(surface_measure * Scalar.q_power(k - 1), k, 0, order)
    return gen.exp_pleth()


def pfa_f(
    surface: RuledSurface,
    curve: CurveData,
    r: int,
    c1: DivisorClass,
    flag: str,
    order,
) -> GenSeries:
    """pfa_f(r, c1) (tf) or its locally free part (lf) for the fibre polarization."""
    if curve.genus != surface.g:
        raise GenSeriesError("curve genus does not match the surface")
    order = Fraction(order)
    meta = dict(surface=surface, curve=curve, rank=r, c1=c1, polarization=(0, 1), flag=flag, normalization="pfa")
    if c1.a.denominator != 1 or c1.b.denominator != 1:
        raise GenSeriesError("c1 must be integral")
    if c1.a % r:
        return GenSeries(series=TruncatedSeries.zero(order), **meta)
    base = bun_measure(curve, r)
    if flag == "lf":

        def factor(k):
            out = TruncatedSeries.one(order)
            for i in range(1, r):
                up = curve.zeta_series(Scalar.q_power(r * k + i), k, order)
                down = curve.zeta_series(Scalar.q_power(r * k - i), k, order)
                out = out * up * down.inverse()
            return out

    elif flag == "tf":

        def factor(k):
            out = TruncatedSeries.one(order)
            for i in range(-r, r):
                out = out * curve.zeta_series(Scalar.q_power(r * k + i), k, order)
            return out

    else:
        raise GenSeriesError(f"unknown flag {flag!r}")
    return GenSeries(series=_kproduct(factor, order).scale(base), **meta)


def pf_from_pfa(g: GenSeries) -> GenSeries:
    """pf(t) = q^{r^2 chi(O_S)/2} t^{-c1^2/(2r)} pfa(q^{-r} t)."""
    if g.normalization != "pfa":
        raise GenSeriesError("pf_from_pfa needs a pfa-normalized series")
    r = g.rank
    chi_o = g.surface.chi_structure_sheaf
    s = g.series.scale_t(-2 * r).scale(Scalar.s_power(r * r * chi_o)).shift(-g.c1_square / (2 * r))
    return g.with_series(s, normalization="pf")


def pfa_from_pf(g: GenSeries) -> GenSeries:
    """Inverse of :func:`pf_from_pfa`."""
    if g.normalization != "pf":
        raise GenSeriesError("pfa_from_pf needs a pf-normalized series")
    r = g.rank
    chi_o = g.surface.chi_structure_sheaf
    s = g.series.shift(g.c1_square / (2 * r)).scale(Scalar.s_power(-r * r * chi_o)).scale_t(2 * r)
    return g.with_series(s, normalization="pfa")


def tf_lf_consistency(surface: RuledSurface, curve: CurveData, r: int, c1: DivisorClass, order) -> bool:
    """pfa_tf == pfa_lf * H_r(t) through ``order``."""
    tf = pfa_f(surface, curve, r, c1, "tf", order).series
    lf = pfa_f(surface, curve, r, c1, "lf", order).series
    return tf == (lf * quot_series(curve, r, order)).truncate(order)


# -- Betti tables --------------------------------------------------------------------


@dataclass
class BettiTable:
    rows: list[tuple[Fraction, Scalar]]
    problems: list[str]

    def s_exponents(self) -> list[int]:
        exps = set()
        for _, c in self.rows:
            if c.is_laurent():
                exps.update(c.laurent_terms())
        return sorted(exps)

    def to_csv(self) -> str:
        exps = self.s_exponents()
        lines = [",".join(["c2"] + [f"s^{k}" for k in exps])]
        for c2, c in self.rows:
            if not c.is_laurent():
                lines.append(",".join([str(c2)] + ["NA"] * len(exps)))
                continue
            terms = c.laurent_terms()
            lines.append(",".join([str(c2)] + [str(terms.get(k, 0)) for k in exps]))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"c2={c2}: {c}" for c2, c in self.rows]
        lines.extend(f"warning: {p}" for p in self.problems)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = []
        for c2, c in self.rows:
            row: dict[str, Any] = {"c2": _frac_out(c2), "value": str(c)}
            if c.is_laurent():
                row["s_coefficients"] = {str(k): v for k, v in sorted(c.laurent_terms().items())}
            rows.append(row)
        return json.dumps({"rows": rows, "problems": self.problems}, indent=2) + "\n"


def betti_extract(g: GenSeries, gerbe_factor: bool) -> BettiTable:
    """One row per c2: the coefficient (times q-1 if requested) in powers of s."""
    rows, problems = [], []
    for te, ue, c in g.series.terms():
        if ue:
            raise GenSeriesError("series carries u-terms")
        if gerbe_factor:
            c = c * (Q - ONE)
        c2 = te - g.c2_offset
        rows.append((c2, c))
        if not c.is_laurent():
            problems.append(f"c2={c2}: coefficient {c} is not a polynomial in s")
    return BettiTable(rows, problems)


# -- JSON --------------------------------------------------------------------------


def genseries_to_json(g: GenSeries) -> dict:
    s = g.series
    den = 1
    for te, _, _ in s.terms():
        den = den * (te.denominator // math.gcd(den, te.denominator))
    curve: dict[str, Any] = {"mode": g.curve.mode, "g": g.curve.genus}
    if g.curve.mode == "explicit":
        curve["weil"] = [str(c) for c in g.curve.weil]
    surface: dict[str, Any] = {"g": g.surface.g, "e": g.surface.e}
    if g.exceptional:
        surface["exceptional"] = list(g.exceptional)
    obj: dict[str, Any] = {
        "surface": surface,
        "curve": curve,
        "rank": g.rank,
        "c1": [_frac_out(g.c1.a), _frac_out(g.c1.b)],
        "polarization": [_frac_out(g.polarization[0]), _frac_out(g.polarization[1])],
        "flag": g.flag,
        "normalization": g.normalization,
        "offset": str(g.c2_offset),
        "denominator": den,
        "order": None if s.order == INF else str(s.order),
        "terms": [[int(te * den), str(c)] for te, ue, c in s.terms()],
    }
    if g.perturbation is not None:
        ray, side = g.perturbation
        obj["perturbation"] = {"ray": [_frac_out(ray[0]), _frac_out(ray[1])], "side": side}
    return obj


def genseries_from_json(obj: dict) -> GenSeries:
    try:
        surf = obj["surface"]
        surface = RuledSurface(int(surf["g"]), int(surf["e"]))
        cv = obj["curve"]
        if cv["mode"] == "explicit":
            curve = CurveData.explicit(int(cv["g"]), [parse_scalar(x) for x in cv["weil"]])
        else:
            curve = poincare_curve(int(cv["g"]))
        den = int(obj["denominator"])
        order = INF if obj.get("order") is None else Fraction(obj["order"])
        terms = {}
        for num, coeff in obj["terms"]:
            terms[(Fraction(int(num), den), 0)] = parse_scalar(coeff)
        series = TruncatedSeries.from_terms(terms, order)
        perturbation = None
        if obj.get("perturbation"):
            p = obj["perturbation"]
            perturbation = ((_frac_in(p["ray"][0]), _frac_in(p["ray"][1])), p["side"])
        g = GenSeries(
            surface=surface,
            curve=curve,
            rank=int(obj["rank"]),
            c1=DivisorClass(_frac_in(obj["c1"][0]), _frac_in(obj["c1"][1])),
            polarization=(_frac_in(obj["polarization"][0]), _frac_in(obj["polarization"][1])),
            flag=obj["flag"],
            normalization=obj["normalization"],
            series=series,
            perturbation=perturbation,
            exceptional=tuple(int(m) for m in surf.get("exceptional", ())),
        )
    except GenSeriesError:
        raise
    except (KeyError, TypeError, IndexError, ValueError, ZeroDivisionError) as exc:
        raise GenSeriesError(f"malformed series object: {exc}") from exc
    if "offset" in obj and Fraction(obj["offset"]) != g.c2_offset:
        raise GenSeriesError("offset field disagrees with rank and c1")
    return g
