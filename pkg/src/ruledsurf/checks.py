"""Invariant suites behind ``ruledsurf verify``.

Each suite returns a list of :class:`CheckResult`; on failure the detail
names the first counterexample found.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .curve import poincare_curve
from .genfun import hilbert_points_series, pf_from_pfa, pfa_f, tf_lf_consistency
from .geometry import DivisorClass, RuledSurface
from .hall import BundleClass, HallElement, b_sum, hall_mul, skew_derivation
from .phi import heine_gauss_verify, phi_partial_sum, phi_product_rhs, phi_solve_linear
from .quot import g_count, g_oracle
from .scalar import ONE, Q, Scalar
from .series import TruncatedSeries
from .wallcross import (
    WallContext,
    blowup_ratio_tf,
    blowup_theta,
    cross_wall,
    wall_value,
    SeriesTable,
    rank_one_provider,
)

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        tail = f": {self.detail}" if self.detail else ""
        return f"[{tag}] {self.suite}/{self.name}{tail}"


def _first_failure(items, test) -> str | None:
    for item in items:
        bad = test(item)
        if bad:
            return bad
    return None


# -- hall -----------------------------------------------------------------------------


def _hall_suite() -> list[CheckResult]:
    out = []
    basis = {r: [BundleClass(c) for c in itertools.combinations_with_replacement(range(-3, 4), r)] for r in (1, 2, 3)}

    def triples():
        for r1, r2, r3 in itertools.product((1, 2, 3), repeat=3):
            if r1 + r2 + r3 <= 4:
                yield from itertools.product(basis[r1], basis[r2], basis[r3])

    def assoc(triple):
        x, y, z = (HallElement.basis(c) for c in triple)
        if hall_mul(hall_mul(x, y), z) != hall_mul(x, hall_mul(y, z)):
            return "(x y) z != x (y z) for " + ", ".join(str(c) for c in triple)
        return None

    bad = _first_failure(triples(), assoc)
    out.append(CheckResult("hall", "associativity", bad is None, bad or ""))

    o = HallElement.line
    prod = hall_mul(o(2), o(0))
    want = HallElement({BundleClass((0, 2)): Q**3, BundleClass((1, 1)): Q**3 - Q})
    out.append(CheckResult("hall", "straightening", prod == want, "" if prod == want else str(prod)))

    def skew(case):
        r, d, n = case
        f_r = Scalar.q_power(-2 * r) * (Q**r - ONE) * (Q ** (r + 1) - ONE) / (Q - ONE)
        lhs = skew_derivation(n, b_sum(r, d, n))
        rhs = b_sum(r + 1, d + n, n).scale(f_r)
        return None if lhs == rhs else f"r={r} d={d} n={n}"

    bad = _first_failure(itertools.product((1, 2, 3), range(-4, 5), (-1, 0, 1)), skew)
    out.append(CheckResult("hall", "skew-derivation", bad is None, bad or ""))
    return out


# -- quot -----------------------------------------------------------------------------


def _quot_suite() -> list[CheckResult]:
    classes = [BundleClass(c) for r in (1, 2) for c in itertools.combinations_with_replacement(range(-2, 1), r)]

    def oracle(case):
        alpha, n, q0 = case
        want = g_count(alpha, n).evaluate_q(q0)
        got = g_oracle(alpha, n, q0)
        return None if want == got else f"alpha={alpha} n={n} q={q0}: formula {want}, oracle {got}"

    bad = _first_failure(itertools.product(classes, (0, 1), (2, 3)), oracle)
    return [CheckResult("quot", "oracle-equivalence", bad is None, bad or "")]


# -- phi ------------------------------------------------------------------------------


def _phi_suite() -> list[CheckResult]:
    out = []
    order = 3
    for r in (2, 3):
        table = phi_solve_linear(r, order, order)
        lhs = table.total().truncate_u(r)
        mid = phi_partial_sum(r, order, order).truncate_u(r)
        rhs = phi_product_rhs(r, order).truncate_u(r)
        ok = lhs == mid == rhs and table.kernel_dim == 1
        out.append(CheckResult("phi", f"three-way r={r}", ok, "" if ok else f"solver {lhs} / recursion {mid} / product {rhs}"))
    bad = [r for r in range(1, 7) if not heine_gauss_verify(r)]
    out.append(CheckResult("phi", "heine-gauss", not bad, f"fails for r={bad}" if bad else ""))
    return out


# -- genfun ---------------------------------------------------------------------------


def _genfun_suite() -> list[CheckResult]:
    out = []
    bad = []
    for g in (0, 1):
        curve = poincare_curve(g)
        surf = RuledSurface(g, 0)
        mu_s = curve.measure() * (ONE + Q)
        series = pfa_f(surf, curve, 1, DivisorClass(0, 0), "tf", 4).series.scale(Q - ONE)
        want = hilbert_points_series(mu_s, 4).scale(curve.jacobian_measure())
        if series != want:
            bad.append(f"g={g}")
    out.append(CheckResult("genfun", "rank-one hilbert", not bad, ", ".join(bad)))

    bad = []
    for g, e, r in itertools.product((0, 1), (0, 1), (1, 2, 3)):
        surf = RuledSurface(g, e)
        if not tf_lf_consistency(surf, poincare_curve(g), r, DivisorClass(0, 0), 5):
            bad.append(f"g={g} e={e} r={r}")
    out.append(CheckResult("genfun", "tf-lf consistency", not bad, ", ".join(bad)))

    bad = []
    for e in (0, 1):
        s = pfa_f(RuledSurface(0, e), poincare_curve(0), 2, DivisorClass(1, 0), "tf", 4).series
        if not s.is_zero():
            bad.append(f"e={e}")
    out.append(CheckResult("genfun", "divisibility emptiness", not bad, ", ".join(bad)))

    bad = [g for g in range(4) if not poincare_curve(g).functional_equation_holds()]
    out.append(CheckResult("genfun", "zeta functional equation", not bad, f"g={bad}" if bad else ""))
    return out


# -- wallcross ------------------------------------------------------------------------


def wallcross_round_trip(surface: RuledSurface, wall, perturb, r: int, c: DivisorClass, order: int) -> str | None:
    """Cross plus -> minus -> plus from the fibre tables; None if the seed comes back."""
    curve = poincare_curve(surface.g)
    ctx = WallContext(surface, wall, perturb, "plus")
    seed = {(r, c): pf_from_pfa(pfa_f(surface, curve, r, c, "tf", order + 2))}
    target = [(r, c, Fraction(order))]
    minus = cross_wall(ctx, seed, target, source="plus", target="minus")
    back = cross_wall(ctx, minus, target, source="minus", target="plus")
    if not back[(r, c)].series.agrees_with(seed[(r, c)].series, order):
        return f"round trip changes the table for r={r}, c1={c}"
    return None


def wallcross_self_check(surface: RuledSurface, wall, perturb, r: int, c: DivisorClass, order: int) -> str | None:
    curve = poincare_curve(surface.g)
    ctx = WallContext(surface, wall, perturb, "plus")
    entry = pf_from_pfa(pfa_f(surface, curve, r, c, "tf", order + 2)).series
    table = SeriesTable({(r, c): entry}, rank_one_provider(surface, curve))
    a = wall_value(ctx, table, r, c, order, extra=0)
    b = wall_value(ctx, table, r, c, order, extra=1)
    return None if a == b else f"enlarging the bound changes pf_H({r}, {c})"


def _wallcross_suite() -> list[CheckResult]:
    out = []
    s1 = RuledSurface(0, 1)
    cases = [
        (s1, (2, 1), (0, 1), 2, DivisorClass(0, 1), 3),
        (s1, (1, 1), (0, 1), 2, DivisorClass(0, 0), 3),
        (RuledSurface(0, 0), (1, 2), (1, 0), 2, DivisorClass(0, 0), 4),
    ]
    bad = _first_failure(cases, lambda cs: wallcross_round_trip(*cs))
    out.append(CheckResult("wallcross", "round trip", bad is None, bad or ""))
    bad = _first_failure(cases, lambda cs: wallcross_self_check(*cs))
    out.append(CheckResult("wallcross", "enumeration self-check", bad is None, bad or ""))

    curve = poincare_curve(0)
    c = DivisorClass(1, 2)
    seed = {(1, c): pf_from_pfa(pfa_f(s1, curve, 1, c, "tf", 6))}
    ctx = WallContext(s1, (2, 1), (0, 1), "plus")
    moved = cross_wall(ctx, seed, [(1, c, Fraction(4))], source="plus", target="minus")
    ok = moved[(1, c)].series.agrees_with(seed[(1, c)].series, 4)
    out.append(CheckResult("wallcross", "rank-one identity", ok))
    return out


# -- blowup ---------------------------------------------------------------------------


def _blowup_suite() -> list[CheckResult]:
    out = []
    euler = TruncatedSeries.one(6)
    for k in range(1, 7):
        euler = euler * TruncatedSeries.geometric(1, k, 0, 6)
    ok = blowup_ratio_tf(1, 0, 6) == euler
    out.append(CheckResult("blowup", "rank-one tf ratio", ok))

    theta = blowup_theta(2, 0, 4)
    want = TruncatedSeries.from_terms(
        {(0, 0): ONE, (1, 0): Q + Q.inverse(), (4, 0): Q**2 + Q ** (-2)}, 4
    )
    out.append(CheckResult("blowup", "rank-two theta", theta == want, "" if theta == want else str(theta)))

    def reflect(case):
        r, m = case
        a = blowup_theta(r, m, 4)
        b = blowup_theta(r, -m, 4).map_coefficients(lambda x: x.bar())
        return None if a == b else f"r={r} m={m}"

    bad = _first_failure(itertools.product((1, 2, 3), range(-2, 3)), reflect)
    out.append(CheckResult("blowup", "theta reflection", bad is None, bad or ""))
    return out


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "hall": _hall_suite,
    "phi": _phi_suite,
    "quot": _quot_suite,
    "genfun": _genfun_suite,
    "wallcross": _wallcross_suite,
    "blowup": _blowup_suite,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [res for suite in SUITES.values() for res in suite()]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
