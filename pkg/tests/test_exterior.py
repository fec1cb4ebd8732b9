"""Exterior calculus: fixed values on the Iwasawa algebra plus property tests
of the Lie-derivative and bracket identities on several corpus algebras."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcontact import corpus
from pcontact.exterior import (
    Form,
    VectorForm,
    bracket,
    bracket_oracle,
    conj,
    contract,
    d,
    del_,
    delbar,
    invert_contraction,
    lie10,
    lieT,
    phi,
    phibar,
    vcontract,
    vf_bracket,
    wedge,
)
from pcontact.scalars import GaussianRational as GQ

ALGEBRAS = [
    corpus.load(name).algebra()
    for name in ("iwasawa", "g2_analogue", "class_I_l1_ones", "heisenberg_line_l2", "symplectic_base_sigma_phi12")
]
coeff = st.builds(GQ, st.integers(-3, 3), st.integers(-2, 2))


@st.composite
def algebra_forms(draw, vectors=2, forms=2):
    a = draw(st.sampled_from(ALGEBRAS))
    idx = lambda k: tuple(sorted(draw(st.sets(st.integers(1, a.n), min_size=k, max_size=k))))

    def form():
        p, q = draw(st.integers(0, min(a.n, 4))), draw(st.integers(0, min(a.n, 2)))
        return Form(a, {(idx(p), idx(q)): draw(coeff) for _ in range(draw(st.integers(1, 3)))})

    def vector(q):
        return VectorForm(a, q, {(draw(st.integers(1, a.n)), idx(q)): draw(coeff) for _ in range(draw(st.integers(1, 3)))})

    return a, [form() for _ in range(forms)], [vector(1) for _ in range(vectors)], [vector(0) for _ in range(2)]


# -- fixed values -------------------------------------------------------------


@pytest.fixture
def iw():
    return corpus.load("iwasawa").algebra()


def test_differentials_on_iwasawa(iw):
    p1, p2, p3 = (phi(iw, k) for k in (1, 2, 3))
    assert del_(p3) == wedge(p1, p2)
    assert not delbar(p3)
    assert d(phibar(iw, 3)) == wedge(phibar(iw, 1), phibar(iw, 2))
    assert conj(p3) == phibar(iw, 3)


def test_wedge_is_graded_commutative(iw):
    p1, p2 = phi(iw, 1), phi(iw, 2)
    assert wedge(p1, p2) == -wedge(p2, p1)
    assert not wedge(p1, p1)


def test_contraction_puts_form_part_on_the_left(iw):
    theta = VectorForm(iw, 1, {(3, (1,)): 1})
    # e3 -| (phi1 ^ phi3) = -phi1, then phibar1 is wedged on the left
    assert vcontract(theta, wedge(phi(iw, 1), phi(iw, 3))) == wedge(phibar(iw, 1), -phi(iw, 1))


def test_vector_field_calculus(iw):
    e1, e2 = VectorForm(iw, 0, {(1, ()): 1}), VectorForm(iw, 0, {(2, ()): 1})
    assert vf_bracket(e1, e2) == VectorForm(iw, 0, {(3, ()): -1})
    assert lie10(e1, phi(iw, 3)) == phi(iw, 2)
    assert contract(e1, phi(iw, 1)) == Form(iw, {((), ()): 1})


def test_iwasawa_bracket_value(iw):
    psi = VectorForm(iw, 1, {(2, (1,)): 1, (1, (2,)): 1})
    expected = VectorForm(iw, 2, {(3, (1, 2)): 2})
    assert bracket(psi, psi) == expected
    vol = wedge(wedge(phi(iw, 1), phi(iw, 2)), phi(iw, 3))
    assert bracket_oracle(psi, psi, vol) == expected


def test_invert_contraction_recovers_theta(iw):
    vol = wedge(wedge(phi(iw, 1), phi(iw, 2)), phi(iw, 3))
    theta = VectorForm(iw, 1, {(1, (2,)): 3, (3, (1,)): GQ(0, 1)})
    assert invert_contraction(vcontract(theta, vol), vol, 1) == theta


def test_invert_contraction_needs_a_volume_form(iw):
    with pytest.raises(ValueError):
        invert_contraction(Form.zero(iw), phi(iw, 1), 1)


def test_mixing_algebras_is_rejected(iw):
    other = corpus.load("torus3").algebra()
    with pytest.raises(ValueError):
        phi(iw, 1) + phi(other, 1)


# -- identities ----------------------------------------------------------------

settings_ = settings(max_examples=60, deadline=None)


@settings_
@given(algebra_forms())
def test_d_squared(data):
    _, (u, _), _, _ = data
    assert not d(d(u))
    assert not del_(del_(u)) and not delbar(delbar(u))
    assert not (del_(delbar(u)) + delbar(del_(u)))


@settings_
@given(algebra_forms())
def test_delbar_on_contractions(data):
    _, (u, _), (th, _), (x, _) = data
    assert delbar(contract(x, u)) == -contract(x, delbar(u))
    assert delbar(vcontract(th, u)) == vcontract(th.delbar(), u) + vcontract(th, delbar(u))


@settings_
@given(algebra_forms())
def test_lie_derivative_commutators(data):
    _, (u, v), (th, ps), _ = data
    dbt = th.delbar()
    assert lieT(th, delbar(u)) + delbar(lieT(th, u)) == -(vcontract(dbt, del_(u)) + del_(vcontract(dbt, u)))
    assert lieT(th, del_(u)) == -del_(lieT(th, u))
    sign = -1 if (u.degree or 0) % 2 else 1
    assert lieT(th, wedge(u, v)) == wedge(lieT(th, u), v) + wedge(u, lieT(th, v)) * sign


@settings_
@given(algebra_forms())
def test_bracket_through_contraction_and_lie_derivative(data):
    _, (u, _), (th, ps), _ = data
    br = bracket(th, ps)
    assert vcontract(th, lieT(ps, u)) - lieT(ps, vcontract(th, u)) == vcontract(br, u)
    assert -(lieT(th, vcontract(ps, u)) - vcontract(ps, lieT(th, u))) == vcontract(br, u)
    assert lieT(th, lieT(ps, u)) + lieT(ps, lieT(th, u)) == lieT(br, u)


@settings_
@given(algebra_forms())
def test_generalised_tian_todorov(data):
    _, (u, _), (t1, t2), _ = data
    rhs = (
        -del_(vcontract(t1, vcontract(t2, u)))
        + vcontract(t1, lieT(t2, u))
        + vcontract(t2, lieT(t1, u))
        + vcontract(t1, vcontract(t2, del_(u)))
    )
    assert vcontract(bracket(t1, t2), u) == rhs


@settings_
@given(algebra_forms())
def test_bracket_symmetry_and_oracle(data):
    a, _, (t1, t2), _ = data
    assert bracket(t1, t2) == bracket(t2, t1)
    vol = Form(a, {(tuple(range(1, a.n + 1)), ()): 1})
    assert bracket(t1, t2) == bracket_oracle(t1, t2, vol)


@settings_
@given(algebra_forms())
def test_vector_field_lie_derivative(data):
    _, (u, v), _, (x, y) = data
    xy = vf_bracket(x, y)
    assert contract(x, lie10(y, u)) - lie10(y, contract(x, u)) == contract(xy, u)
    assert lie10(x, lie10(y, u)) - lie10(y, lie10(x, u)) == lie10(xy, u)
    assert lie10(x, wedge(u, v)) == wedge(lie10(x, u), v) + wedge(u, lie10(x, v))
