"""Hypothesis strategies for exact scalars and closed forms."""
from fractions import Fraction

from hypothesis import strategies as st

from lsiverify.symcore import ClosedForm, Coordinate, GaussQ, I, ParamScalar

T, R, Z = Coordinate("t"), Coordinate("r"), Coordinate("zeta")
COORDS = (T, R, Z)
PARAMS = ("a", "x", "M")

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gauss = st.builds(GaussQ, small, small)


@st.composite
def scalars(draw, max_terms=3):
    out = ParamScalar.const(draw(small))
    for _ in range(draw(st.integers(0, max_terms))):
        mono = ParamScalar.const(draw(gauss))
        for p in draw(st.lists(st.sampled_from(PARAMS), max_size=2)):
            mono = mono * ParamScalar.symbol(p)
        out = out + mono
    return out


@st.composite
def exponents(draw):
    e = ParamScalar.const(draw(st.integers(-2, 3)))
    if draw(st.booleans()):
        e = e + ParamScalar.symbol(draw(st.sampled_from(PARAMS)))
    return e


@st.composite
def monomials(draw):
    f = ClosedForm.const(draw(scalars(max_terms=1)) or ParamScalar.const(1))
    for c in draw(st.lists(st.sampled_from(COORDS), min_size=0, max_size=2, unique=True)):
        f = f * ClosedForm.coord(c, draw(exponents()))
    if draw(st.booleans()):
        f = f * ClosedForm.log(draw(st.sampled_from(COORDS)))
    if draw(st.integers(0, 4)) == 0:
        k = ClosedForm.coord(R, 2) * ClosedForm.coord(T, -1) * ClosedForm.const(-ParamScalar.symbol("M"))
        f = f * ClosedForm.exp(k)
    return f


@st.composite
def closed_forms(draw, max_terms=3):
    out = ClosedForm()
    for m in draw(st.lists(monomials(), min_size=1, max_size=max_terms)):
        out = out + m
    return out


def fr(v) -> Fraction:
    return Fraction(v)


__all__ = ["COORDS", "I", "PARAMS", "R", "T", "Z", "closed_forms", "exponents", "gauss",
           "monomials", "scalars", "small"]
