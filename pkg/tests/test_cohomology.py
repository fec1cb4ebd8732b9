from math import comb

import pytest

from pcontact.algebra import torus
from pcontact.cohomology import (
    c2_member,
    check_d1_nonzero,
    ddbar_inclusion,
    e1_dim,
    e1_dims,
    e2_dim,
    page_report,
    z2_member,
)
from pcontact.exterior import phi, wedge


def test_iwasawa_e1_matches_product_formula(load):
    a = load("iwasawa").algebra()
    # delbar only sees the antiholomorphic factor: E1^{p,q} = C(3,p) * h^{0,q}
    h0q = [1, 2, 2, 1]
    assert e1_dims(a) == {(p, q): comb(3, p) * h0q[q] for p in range(4) for q in range(4)}


def test_iwasawa_e2_values(load):
    a = load("iwasawa").algebra()
    assert e2_dim(a, 1, 0) == 2
    assert e2_dim(a, 1, 1) == 4
    assert e1_dim(a, 1, 0) == 3 and e1_dim(a, 0, 1) == 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_torus_degenerates_at_e1(n):
    rep = page_report(torus(n))
    assert rep.degenerates_at_e1
    assert all(v == comb(n, p) * comb(n, q) for (p, q), v in rep.e1.items())


def test_page_report_serialisation(load):
    rep = page_report(load("iwasawa").algebra())
    data = rep.to_dict()
    assert data["E1"]["1,0"] == 3 and data["E2"]["1,0"] == 2
    assert not data["degenerates_at_E1"]
    assert "Frölicher" in rep.text()
    assert rep.totals(rep.e1)[1] == 5


def test_membership(load):
    a = load("iwasawa").algebra()
    p1, p2, p3 = (phi(a, k) for k in (1, 2, 3))
    assert z2_member(p1) and not z2_member(p3)
    assert c2_member(wedge(p1, p2)) and not c2_member(p1)


def test_d1_class_of_contact_form(load):
    doc = load("iwasawa")
    rep = check_d1_nonzero(doc.algebra(), doc.forms["Gamma"])
    assert rep.holds and rep.linear_check and rep.p == 1


def test_d1_needs_contact_form():
    t = torus(3)
    with pytest.raises(ValueError):
        check_d1_nonzero(t, phi(t, 1))


def test_ddbar_inclusion(load):
    a = load("iwasawa").algebra()
    for p in range(1, 4):
        for q in range(1, 4):
            assert ddbar_inclusion(a, p, q)["inclusion"]
