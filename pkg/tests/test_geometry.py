from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruledsurf.geometry import (
    ChernData,
    DivisorClass,
    GeometryError,
    RuledSurface,
    chi_pair,
    discriminant,
    euler_antisym,
    euler_chi,
    in_positive_cone,
    intersect,
    polarization_divisor,
    reduced_hilbert,
    slope_mu,
    twist,
)

surfaces = st.builds(RuledSurface, st.integers(0, 3), st.integers(0, 3))
divisors = st.builds(DivisorClass, st.integers(-4, 4), st.integers(-4, 4))
classes = st.builds(ChernData, st.integers(1, 4), divisors, st.integers(-5, 5))

F = DivisorClass(0, 1)
C0 = DivisorClass(1, 0)


def test_basic_intersections():
    s = RuledSurface(2, 3)
    assert intersect(F, F, s) == 0
    assert intersect(C0, F, s) == 1
    assert intersect(C0, C0, s) == -3
    assert intersect(C0 + F * s.e, F, s) == 1


@pytest.mark.parametrize("g,e", [(0, 0), (0, 1), (1, 2), (3, 1)])
def test_canonical_square(g, e):
    s = RuledSurface(g, e)
    assert intersect(s.canonical, s.canonical, s) == 8 * (1 - g)


def test_structure_sheaf_chi():
    for g in range(4):
        s = RuledSurface(g, 1)
        assert euler_chi(s, ChernData(1, DivisorClass(0, 0), 0)) == 1 - g


def test_hrr_instance_on_first_hirzebruch():
    s = RuledSurface(0, 1)
    gamma = ChernData(2, C0, 1)
    # ch2 = -1/2 - 1, K.c1 = -1, chi(O) = 1
    assert euler_chi(s, gamma) == 1
    assert chi_pair(s, gamma, gamma) == -1


def test_zero_rank_slope_rejected():
    s = RuledSurface(0, 0)
    with pytest.raises(GeometryError):
        slope_mu(s, F, ChernData(0, DivisorClass(0, 0), 0))


@settings(max_examples=100, deadline=None)
@given(surfaces, classes)
def test_self_pairing_identities(s, gamma):
    r, ch2 = gamma.r, gamma.ch2(s)
    c1sq = intersect(gamma.c1, gamma.c1, s)
    chi_o = s.chi_structure_sheaf
    assert chi_pair(s, gamma, gamma) == 2 * r * ch2 - c1sq + r * r * chi_o
    assert chi_pair(s, gamma, gamma) == -2 * r * r * discriminant(s, gamma) + r * r * chi_o
    assert euler_antisym(s, gamma, gamma) == 0


@settings(max_examples=100, deadline=None)
@given(surfaces, classes, classes)
def test_antisymmetric_part(s, a, b):
    assert euler_antisym(s, a, b) == -euler_antisym(s, b, a)
    assert euler_antisym(s, a, b) == chi_pair(s, a, b) - chi_pair(s, b, a)


@settings(max_examples=100, deadline=None)
@given(surfaces, classes, divisors)
def test_twist_invariants(s, gamma, line):
    assert discriminant(s, twist(s, gamma, line)) == discriminant(s, gamma)
    assert twist(s, twist(s, gamma, line), -line) == gamma


@given(surfaces, classes)
def test_discriminant_under_fixed_twist(s, gamma):
    line = DivisorClass(1, -2)
    assert discriminant(s, twist(s, gamma, line)) == discriminant(s, gamma)


@settings(max_examples=60, deadline=None)
@given(surfaces, classes, st.integers(1, 3), st.integers(0, 3), st.integers(-3, 3))
def test_reduced_hilbert_is_twisted_euler_characteristic(s, gamma, m, n, k):
    h = polarization_divisor(s, m, n)
    want = euler_chi(s, twist(s, gamma, h * k)) / gamma.r
    assert reduced_hilbert(s, h, gamma, k) == want


@given(surfaces, st.integers(-3, 3), st.integers(-3, 3))
def test_positive_cone_is_generated_by_two_rays(s, a, b):
    d = DivisorClass(a, b)
    # d = x (C0 + e f) + y f with x = a, y = b - e a
    assert in_positive_cone(s, d) == (a >= 0 and b - s.e * a >= 0)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_hirzebruch_polarizations_are_anticanonically_positive(e, m, n):
    if m == n == 0:
        return
    s = RuledSurface(0, e)
    h = polarization_divisor(s, m, n)
    assert intersect(h, s.canonical, s) < 0


def test_slope_values():
    s = RuledSurface(0, 1)
    assert slope_mu(s, F, ChernData(2, C0, 0)) == Fraction(1, 2)
