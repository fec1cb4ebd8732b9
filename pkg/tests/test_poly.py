import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcontact.poly import Poly
from pcontact.scalars import GaussianRational as GQ

coeff = st.builds(GQ, st.integers(-5, 5), st.integers(-3, 3))
names = st.sampled_from(["x", "y", "z"])


@st.composite
def polys(draw):
    out = Poly()
    for _ in range(draw(st.integers(0, 4))):
        term = Poly.const(draw(coeff))
        for v in draw(st.lists(names, max_size=3)):
            term = term * Poly.var(v)
        out = out + term
    return out


@given(polys(), polys(), polys())
def test_commutative_ring_laws(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f + g == g + f
    assert f - f == Poly()


@given(polys(), polys(), coeff)
def test_substitution_is_a_ring_map(f, g, c):
    s = {"x": c}
    assert (f * g).substitute(s) == f.substitute(s) * g.substitute(s)
    assert (f + g).substitute(s) == f.substitute(s) + g.substitute(s)


def test_square_expansion():
    x, y = Poly.var("x"), Poly.var("y")
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y


def test_printing_is_sorted():
    p = Poly.var("lam5") ** 2 * 2 + Poly.var("lam7") ** 2 * 2 + Poly.var("lam6") ** 2 * 2
    assert str(p) == "2*lam5^2+2*lam6^2+2*lam7^2"


def test_zero_is_falsey():
    x = Poly.var("x")
    assert not (x - x)
    assert Poly.const(0).is_zero()


def test_constant_value():
    assert Poly.const(GQ(3)).constant_value() == GQ(3)


def test_duplicate_variables_rejected():
    with pytest.raises(ValueError):
        Poly(("x", "x"), {})
