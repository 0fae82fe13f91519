"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for just the summary lines.
"""

import itertools
import time
from fractions import Fraction

import pytest

from ruledsurf.checks import wallcross_round_trip, wallcross_self_check
from ruledsurf.curve import poincare_curve
from ruledsurf.genfun import hilbert_points_series, pf_from_pfa, pfa_f, tf_lf_consistency
from ruledsurf.geometry import DivisorClass, RuledSurface
from ruledsurf.hall import BundleClass, HallElement, b_sum, hall_mul, skew_derivation
from ruledsurf.phi import heine_gauss_verify, phi_partial_sum, phi_product_rhs, phi_solve_linear
from ruledsurf.quot import g_count, g_oracle
from ruledsurf.scalar import ONE, Q, Scalar
from ruledsurf.series import TruncatedSeries
from ruledsurf.wallcross import WallContext, blowup_ratio_tf, blowup_theta, cross_wall

RESULTS = {}


@pytest.fixture
def report(capsys):
    def emit(number, label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {label}" + (f" ({detail})" if detail else "")
        RESULTS[number] = line
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


# 1 ---------------------------------------------------------------------------------------


def associativity_triples(max_total=5):
    basis = {r: [BundleClass(c) for c in itertools.combinations_with_replacement(range(-3, 4), r)] for r in (1, 2, 3)}
    for r1, r2, r3 in itertools.product((1, 2, 3), repeat=3):
        if r1 + r2 + r3 <= max_total:
            yield from itertools.product(basis[r1], basis[r2], basis[r3])


def check_associativity():
    count, bad = 0, None
    for triple in associativity_triples():
        x, y, z = (HallElement.basis(c) for c in triple)
        count += 1
        if hall_mul(hall_mul(x, y), z) != hall_mul(x, hall_mul(y, z)):
            bad = triple
            break
    return count, bad


def test_criterion_01_hall_associativity(report):
    (count, bad), secs = timed(check_associativity)
    report(1, "Hall associativity", bad is None and count >= 500 and secs < 60, f"{count} triples, {secs:.1f} s")


# 2 ---------------------------------------------------------------------------------------


def test_criterion_02_straightening(report):
    o = HallElement.line
    first = hall_mul(o(1), o(0)) == HallElement({BundleClass((0, 1)): Q**2})
    second = hall_mul(o(2), o(0)) == HallElement(
        {BundleClass((0, 2)): Q**3, BundleClass((1, 1)): Q * (Q**2 - ONE)}
    )
    report(2, "straightening instances", first and second)


# 3 ---------------------------------------------------------------------------------------


def skew_failures():
    bad = []
    for r, d, n in itertools.product((1, 2, 3), range(-4, 5), (-1, 0, 1)):
        f_r = Scalar.q_power(-2 * r) * (Q**r - ONE) * (Q ** (r + 1) - ONE) / (Q - ONE)
        if skew_derivation(n, b_sum(r, d, n)) != b_sum(r + 1, d + n, n).scale(f_r):
            bad.append((r, d, n))
    return bad


def test_criterion_03_skew_derivation(report):
    bad, secs = timed(skew_failures)
    report(3, "skew-derivation identity", not bad and secs < 120, f"{secs:.1f} s" + (f", fails at {bad[0]}" if bad else ""))


# 4 ---------------------------------------------------------------------------------------


def quot_failures():
    classes = [BundleClass(c) for r in (1, 2) for c in itertools.combinations_with_replacement(range(-2, 1), r)]
    bad = []
    for alpha, n, q0 in itertools.product(classes, (0, 1), (2, 3)):
        if g_count(alpha, n).evaluate_q(q0) != g_oracle(alpha, n, q0):
            bad.append((alpha, n, q0))
    return bad


def test_criterion_04_quot_oracle(report):
    bad, secs = timed(quot_failures)
    witness = BundleClass((-1, -1))
    wit_ok = g_count(witness, 0) == Q * (Q**2 - ONE) and g_oracle(witness, 0, 2) == 6
    report(4, "quotient-count oracle equivalence", not bad and wit_ok and secs < 60, f"{secs:.1f} s")


# 5 ---------------------------------------------------------------------------------------


def phi_agreement(r):
    table = phi_solve_linear(r, 3, 3)
    lhs = table.total().truncate_u(r)
    mid = phi_partial_sum(r, 3, 3).truncate_u(r)
    rhs = phi_product_rhs(r, 3).truncate_u(r)
    return lhs == mid == rhs and table.kernel_dim == 1


def test_criterion_05_phi_three_way(report):
    ok, secs = timed(lambda: all(phi_agreement(r) for r in (2, 3)))
    report(5, "phi three-way agreement", ok and secs < 600, f"{secs:.1f} s")


# 6 ---------------------------------------------------------------------------------------


def test_criterion_06_heine_gauss(report):
    bad = [r for r in range(2, 6) if not heine_gauss_verify(r)]
    report(6, "Heine-Gauss identity", not bad, f"fails for r={bad}" if bad else "")


# 7 ---------------------------------------------------------------------------------------


def zeta_product(curve, order):
    out = TruncatedSeries.one(order)
    for k in range(1, order + 1):
        out = out * curve.zeta_series(Scalar.q_power(k - 1), k, order) * curve.zeta_series(Scalar.q_power(k), k, order)
    return out


def test_criterion_07_rank_one_goettsche(report):
    ok = True
    for g in (0, 1):
        curve = poincare_curve(g)
        got = pfa_f(RuledSurface(g, 0), curve, 1, DivisorClass(0, 0), "tf", 4).series.scale(Q - ONE)
        pic = curve.jacobian_measure()
        ok &= got == zeta_product(curve, 4).scale(pic)
        ok &= got == hilbert_points_series(curve.measure() * (ONE + Q), 4).scale(pic)
    sigma0 = pfa_f(RuledSurface(0, 0), poincare_curve(0), 1, DivisorClass(0, 0), "tf", 1).series.scale(Q - ONE)
    ok &= sigma0.coefficient(1, 0) == (ONE + Q) ** 2
    report(7, "rank-one Goettsche agreement", ok)


# 8 ---------------------------------------------------------------------------------------


def test_criterion_08_tf_lf(report):
    bad = [
        (g, e, r)
        for g, e, r in itertools.product((0, 1), (0, 1), (1, 2, 3))
        if not tf_lf_consistency(RuledSurface(g, e), poincare_curve(g), r, DivisorClass(0, 0), 5)
    ]
    report(8, "tf/lf consistency", not bad, f"fails at {bad}" if bad else "")


# 9 ---------------------------------------------------------------------------------------


def test_criterion_09_divisibility(report):
    ok = all(
        pfa_f(RuledSurface(0, e), poincare_curve(0), 2, DivisorClass(1, 0), flag, 4).series.is_zero()
        for e in (0, 1)
        for flag in ("tf", "lf")
    )
    report(9, "divisibility emptiness", ok)


# 10 --------------------------------------------------------------------------------------


def test_criterion_10_zeta_functional_equation(report):
    bad = [g for g in range(3) if not poincare_curve(g).functional_equation_holds()]
    report(10, "zeta functional equation", not bad, f"fails for g={bad}" if bad else "")


# 11 --------------------------------------------------------------------------------------


def test_criterion_11_wallcross(report):
    s1 = RuledSurface(0, 1)
    case = (s1, (2, 1), (0, 1), 2, DivisorClass(0, 1), 3)
    trip = wallcross_round_trip(*case)
    selfc = wallcross_self_check(*case)
    c = DivisorClass(1, 2)
    seed = {(1, c): pf_from_pfa(pfa_f(s1, poincare_curve(0), 1, c, "tf", 6))}
    moved = cross_wall(WallContext(s1, (2, 1), (0, 1)), seed, [(1, c, Fraction(4))], source="plus", target="minus")
    ident = moved[(1, c)].series.agrees_with(seed[(1, c)].series, 4)
    detail = "; ".join(x for x in (trip, selfc) if x)
    report(11, "wall-crossing round trip", trip is None and selfc is None and ident, detail)


# 12 --------------------------------------------------------------------------------------


def test_criterion_12_blowup(report):
    euler = TruncatedSeries.one(6)
    for k in range(1, 7):
        euler = euler * TruncatedSeries.geometric(1, k, 0, 6)
    ratio_ok = blowup_ratio_tf(1, 0, 6) == euler
    want = TruncatedSeries.from_terms({(0, 0): ONE, (1, 0): Q + Q.inverse(), (4, 0): Q**2 + Q ** (-2)}, 4)
    theta_ok = blowup_theta(2, 0, 4) == want
    reflect_ok = all(
        blowup_theta(r, m, 4) == blowup_theta(r, -m, 4).map_coefficients(lambda x: x.bar())
        for r in (1, 2, 3)
        for m in range(-2, 3)
    )
    report(12, "blow-up ratio, theta and reflection", ratio_ok and theta_ok and reflect_ok)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
