import pytest

from pcontact.deformation import (
    bracket_rhs,
    contraction_exactness,
    essential_horizontal_space,
    horizontal_representative,
    kuranishi_step,
    run_recursion,
    second_order_identity,
    verify_maurer_cartan,
)
from pcontact.exterior import VectorForm, bracket


@pytest.fixture
def iw(load):
    doc = load("iwasawa")
    return doc.algebra(), doc.forms["Gamma"], doc.vectors["psi1"]


def test_series_terminates_at_second_order(iw):
    a, g, psi1 = iw
    series = run_recursion(psi1, 6, g)
    assert series.terminated and not series.obstructed
    assert series.psi[1] == VectorForm(a, 1, {(3, (3,)): 1})
    assert series.matches_expected_pattern and series.second_order


def test_maurer_cartan_exact_and_truncated(iw):
    _, g, psi1 = iw
    mc = verify_maurer_cartan(run_recursion(psi1, 6, g))
    assert mc.holds and mc.label == "exact" and mc.orders_checked == 4
    cut = verify_maurer_cartan(run_recursion(psi1, 1, g))
    assert cut.label == "truncated"


def test_single_term_first_order_terminates_immediately(iw):
    a, g, _ = iw
    series = run_recursion(VectorForm(a, 1, {(2, (1,)): 1}), 5, g)
    assert series.terminated and series.order == 1


def test_first_order_must_be_constantly_horizontal(iw):
    a, g, _ = iw
    with pytest.raises(ValueError):
        run_recursion(VectorForm(a, 1, {(3, (1,)): 1}), 3, g)


def test_obstructed_step_carries_a_witness(iw):
    a, g, _ = iw
    prior = VectorForm(a, 1, {(1, (1,)): 1, (2, (3,)): 1})
    psi, cert = kuranishi_step(2, [prior], g)
    assert psi is None and cert.obstructed
    assert cert.witness == {"phi~1^phi~3*e3": "1"}


def test_third_order_step(iw):
    _, g, psi1 = iw
    series = run_recursion(psi1, 6, g)
    assert not bracket(series.psi[0], series.psi[1])
    psi3, cert = kuranishi_step(3, series.psi, g)
    assert not psi3 and cert.odd_rhs_zero and cert.matches_expected_pattern


def test_rhs_is_half_the_bracket(iw):
    _, _, psi1 = iw
    assert bracket_rhs([psi1], 2) * 2 == bracket(psi1, psi1)


def test_essential_horizontal_space(iw):
    a, g, psi1 = iw
    space = essential_horizontal_space(g)
    assert space.dim == 4
    assert horizontal_representative(psi1, g) == psi1
    with pytest.raises(ValueError):
        horizontal_representative(VectorForm(a, 1, {(3, (1,)): 1}), g)


def test_identities_on_vertical_forms(iw):
    a, g, psi1 = iw
    assert second_order_identity(psi1, g)
    assert contraction_exactness(VectorForm(a, 1, {(3, (3,)): 1}), g)
