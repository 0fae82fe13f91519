
import pytest
import sympy as sp

from ruledsurf.hall import BundleClass, HallElement, hall_mul
from ruledsurf.phi import (
    PhiError,
    degree_zero_classes,
    heine_gauss_verify,
    phi_partial_sum,
    phi_product_rhs,
    phi_relations,
    phi_solve_linear,
)
from ruledsurf.scalar import ONE, Q
from ruledsurf.series import TruncatedSeries

QS, Z = sp.symbols("q z")


def one_minus(coeff, k, order):
    return TruncatedSeries.from_terms({(0, 0): ONE, (k, 1): -coeff}, order)


def finite_product(r, n, order):
    out = TruncatedSeries.one(order)
    for k in range(1, n + 1):
        for i in range(1, r):
            out = out * one_minus(Q ** (r * k - i), k, order)
            out = out * TruncatedSeries.geometric(Q ** (r * k + i), k, 1, order)
    return out


def test_rank_one_table_is_trivial():
    table = phi_solve_linear(1, 2, 3)
    assert list(table.values) == [BundleClass((0,))]
    assert table.values[BundleClass((0,))] == TruncatedSeries.one(3)


def test_rank_two_depth_one_values():
    table = phi_solve_linear(2, 1, 4)
    assert table.values[BundleClass((0, 0))] == TruncatedSeries.one(4)
    want = TruncatedSeries.monomial(Q**3 - Q, 1, 1, 4) * TruncatedSeries.geometric(Q**3, 1, 1, 4)
    assert table.values[BundleClass((-1, 1))] == want


@pytest.mark.parametrize("r,depth", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_solution_space_is_one_dimensional(r, depth):
    table = phi_solve_linear(r, depth, 3)
    assert table.kernel_dim == 1
    assert table.integral


def test_relations_hold_on_the_table():
    r, depth, order = 3, 2, 3
    table = phi_solve_linear(r, depth, order)

    def phi(x):
        acc = TruncatedSeries.zero(order)
        for k, c in x.terms.items():
            acc = acc + table.values[k].scale(c)
        return acc

    for rel in phi_relations(r, depth):
        e, f = HallElement.basis(rel.neg), HallElement.basis(rel.rest)
        lhs = phi(hall_mul(e, f))
        rhs = phi(hall_mul(f, e)).shift(-rel.neg.degree, rel.neg.rank).truncate(order)
        assert lhs == rhs, rel


def test_window_must_cover_depth():
    with pytest.raises(PhiError):
        phi_solve_linear(2, 2, 3, window=1)


def test_degree_zero_classes_count():
    # rank 2: O(-k)+O(k) for k = 0..depth
    assert len(degree_zero_classes(2, 3)) == 4


def test_partial_sum_examples():
    assert phi_partial_sum(3, 0, 4) == TruncatedSeries.one(4)
    want = one_minus(Q, 1, 4) * TruncatedSeries.geometric(Q**3, 1, 1, 4)
    assert phi_partial_sum(2, 1, 4) == want


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rank_two_partial_sums_are_finite_products(n):
    assert phi_partial_sum(2, n, 5) == finite_product(2, n, 5)


def test_rank_three_recursion_matches_solver():
    table = phi_solve_linear(3, 2, 3)
    assert phi_partial_sum(3, 2, 3) == table.total()


def test_block_sums_match_recursion_blocks():
    table = phi_solve_linear(3, 2, 3)
    _, blocks = phi_partial_sum(3, 2, 3, blocks=True)
    for k, value in blocks.items():
        if k == 0:
            assert value == table.total(1)
        else:
            assert value == table.block_sum(2, k)


def test_product_examples():
    assert phi_product_rhs(1, 5) == TruncatedSeries.one(5)
    assert phi_product_rhs(2, 3).coefficient(1, 1) == Q**3 - Q
    assert phi_product_rhs(2, 4) == finite_product(2, 4, 4)


@pytest.mark.parametrize("r", [2, 3])
def test_three_routes_agree(r):
    order = 3
    a = phi_solve_linear(r, order, order).total().truncate_u(r)
    b = phi_partial_sum(r, order, order).truncate_u(r)
    c = phi_product_rhs(r, order).truncate_u(r)
    assert a == b == c


def sympy_heine_gauss(r):
    total = sp.Integer(1)
    term = sp.Integer(1)
    for k in range(1, r):
        term *= (1 - QS ** (r - k)) * (1 - QS ** (r + 1 - k)) * Z * QS ** (k - r)
        term /= (1 - Z * QS ** (r - k)) * (QS**k - 1)
        total += term
    rhs = sp.Integer(1)
    for j in range(1, r):
        rhs *= (1 - Z * QS ** (-j)) / (1 - Z * QS**j)
    return sp.cancel(sp.together(total - rhs)) == 0


@pytest.mark.parametrize("r", range(1, 7))
def test_heine_gauss(r):
    assert sympy_heine_gauss(r)
    assert heine_gauss_verify(r)


def test_heine_gauss_detects_a_wrong_sign():
    # r = 2 with the sign of the k-th denominator flipped
    lhs = 1 + (1 - QS) * (1 - QS**2) * Z * QS ** (-1) / ((1 - Z * QS) * (1 - QS))
    rhs = (1 - Z / QS) / (1 - Z * QS)
    assert sp.cancel(lhs - rhs) != 0
