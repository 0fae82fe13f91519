import sympy as sp
from hypothesis import strategies as st

from ruledsurf.scalar import Scalar
from ruledsurf.series import TruncatedSeries

S_SYM = sp.Symbol("s")


def to_sympy(x: Scalar):
    """s^shift * num(s) / den(s) as a sympy expression, read off the raw polynomials."""
    num = sum(int(c) * S_SYM**i for i, c in enumerate(x.num.coeffs()))
    den = sum(int(c) * S_SYM**i for i, c in enumerate(x.den.coeffs()))
    return S_SYM**x.shift * num / den


laurent_dicts = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=4)


@st.composite
def scalars(draw, allow_zero=True):
    num = Scalar.laurent(draw(laurent_dicts))
    den_terms = draw(laurent_dicts)
    den = Scalar.laurent(den_terms)
    if den.is_zero():
        den = Scalar(1)
    out = num / den
    if not allow_zero and out.is_zero():
        out = Scalar(1)
    return out


@st.composite
def small_scalars(draw):
    return Scalar.laurent(draw(st.dictionaries(st.integers(-2, 2), st.integers(-2, 2), max_size=3)))


@st.composite
def series(draw, order=4, positive=False, max_u=2):
    """Integer-graded series in t (and u) with Laurent coefficients."""
    lo = 1 if positive else 0
    keys = st.tuples(st.integers(lo, order), st.integers(0, max_u))
    terms = draw(st.dictionaries(keys, small_scalars(), max_size=5))
    return TruncatedSeries.from_terms(terms, order)
