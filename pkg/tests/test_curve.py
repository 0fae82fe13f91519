import pytest
import sympy as sp

from ruledsurf.curve import CurveData, CurveError, ZetaPoleError, poincare_curve
from ruledsurf.ratfunc import Poly, RationalFunction
from ruledsurf.scalar import ONE, Q, S, Scalar

from conftest import S_SYM, to_sympy

T_SYM = sp.Symbol("t")


def sympy_zeta(curve: CurveData):
    p = sum(to_sympy(c) * T_SYM**i for i, c in enumerate(curve.weil))
    q = S_SYM**2
    return p / ((1 - T_SYM) * (1 - q * T_SYM))


@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_functional_equation_by_sympy(g):
    z = sympy_zeta(poincare_curve(g))
    q = S_SYM**2
    other = (q * T_SYM**2) ** (g - 1) * z.subs(T_SYM, 1 / (q * T_SYM))
    assert sp.cancel(z - other) == 0
    assert poincare_curve(g).functional_equation_holds()


def test_explicit_curve_validation():
    # an elliptic curve over F_q with trace a: P = 1 - a t + q t^2
    CurveData.explicit(1, [ONE, Scalar(-3), Q])
    with pytest.raises(CurveError):
        CurveData.explicit(1, [ONE, Scalar(-3), Q + ONE])
    with pytest.raises(CurveError):
        CurveData.explicit(1, [Scalar(2), Scalar(-3), Q])
    with pytest.raises(CurveError):
        CurveData.explicit(1, [ONE, Scalar(-3)])


def test_poincare_mode_polynomial():
    c = poincare_curve(2)
    assert c.weil_poly == (Poly([ONE]) - Poly.x() * S) ** 4
    assert c.jacobian_measure() == (ONE - S) ** 4
    assert c.measure() == ONE + Q - 4 * S


def test_zeta_value_poles():
    c = poincare_curve(1)
    with pytest.raises(ZetaPoleError):
        c.zeta_value(ONE)
    with pytest.raises(ZetaPoleError):
        c.zeta_value(Q.inverse())


def test_zeta_value_matches_sympy():
    c = poincare_curve(1)
    z = sympy_zeta(c)
    got = to_sympy(c.zeta_value(Q**2))
    assert sp.cancel(got - z.subs(T_SYM, S_SYM**4)) == 0


def test_zeta_series_matches_rational_function():
    c = poincare_curve(2)
    series = c.zeta_series(S, 2, 8)
    expansion = sp.series(sympy_zeta(c).subs(T_SYM, S_SYM * T_SYM**2), T_SYM, 0, 9).removeO()
    for n in range(9):
        want = sp.expand(expansion.coeff(T_SYM, n))
        assert sp.simplify(to_sympy(series.coefficient(n)) - want) == 0


def test_reciprocal_substitution():
    f = RationalFunction(Poly([ONE, Q]), Poly([ONE, ONE, ONE]))
    x = Scalar(5)
    assert f.reciprocal_substitute(Q)(x) == f((Q * x).inverse())
