from fractions import Fraction

import pytest

from pcontact import corpus
from pcontact.dsl import (
    DSLSemanticError,
    DSLSyntaxError,
    parse,
    parse_document,
    parse_form,
    parse_vector,
    serialize_document,
)
from pcontact.exterior import Form, VectorForm
from pcontact.scalars import GaussianRational as GQ


def test_parse_iwasawa_document(load):
    doc = load("iwasawa")
    a = doc.algebra()
    assert a.n == 3 and a.dphi == {3: {((1, 2), ()): GQ(1)}}
    assert doc.forms["Gamma"] == Form(a, {((3,), ()): 1})
    assert doc.vectors["psi1"] == VectorForm(a, 1, {(2, (1,)): 1, (1, (2,)): 1})


def test_anonymous_algebra_and_unsorted_generators():
    a = parse("dim 3; d phi3 = phi2^phi1")
    assert a.dphi == {3: {((1, 2), ()): GQ(-1)}}


def test_complex_coefficients():
    a = parse("dim 3; d phi3 = phi1^phi2")
    u = parse_form("(1-2i)*phi1 + 2i*phi2^phi3 - 3/2*phi~1", a)
    assert u.terms[((1,), ())] == GQ(1, -2)
    assert u.terms[((2, 3), ())] == GQ(0, 2)
    assert u.terms[((), (1,))] == GQ(Fraction(-3, 2))


def test_vector_expressions():
    a = parse("dim 3; d phi3 = phi1^phi2")
    t = parse_vector("phi~2^phi~1*e3", a)
    assert t.q == 2 and t == VectorForm(a, 2, {(3, (1, 2)): -1})
    with pytest.raises(DSLSemanticError):
        parse_vector("phi~1*e1 + e2", a)


def test_syntax_errors_carry_positions():
    with pytest.raises(DSLSyntaxError) as info:
        parse_document("algebra a {\n  dim 3\n  d phi3 = phi1^phi4\n}")
    assert info.value.line == 3 and "out of range" in str(info.value)


def test_semantic_errors():
    with pytest.raises(DSLSemanticError):
        parse_document("form G on nope (1,0) = phi1")
    with pytest.raises(DSLSemanticError, match="nilpotency"):
        parse_document("algebra a { dim 3; d phi1 = phi2^phi3; d phi2 = phi1^phi3 }")


def test_bidegree_annotation_is_checked():
    with pytest.raises(DSLSemanticError):
        parse_document("algebra a { dim 3 }\nform G on a (2,0) = phi1")


def test_fibration_block(load):
    doc = load("symplectic_base_sigma0")
    f = doc.fibrations["fib"]
    a = doc.algebra()
    assert f.base == (1, 2, 3, 4)
    assert [e.terms for e in f.eta] == [{(6, ()): GQ(1)}, {(5, ()): GQ(1)}, {(7, ()): GQ(1)}]
    assert f.psi3 == Form(a, {((7,), ()): 1})


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_round_trip(name):
    doc = corpus.load(name)
    text = serialize_document(doc)
    again = parse_document(text)
    assert serialize_document(again) == text
    assert {k: a.dphi for k, a in doc.algebras.items()} == {k: a.dphi for k, a in again.algebras.items()}
    assert {k: u.terms for k, u in doc.forms.items()} == {k: u.terms for k, u in again.forms.items()}
