import pytest

from pcontact.algebra import AlgebraError, AlgebraSpec, bracket_table, frame_bracket, torus, validate
from pcontact.exterior import VectorForm


def iwasawa():
    return AlgebraSpec("iwasawa", 3, {3: {((1, 2), ()): 1}})


def test_iwasawa_validates():
    report = validate(iwasawa())
    assert report.valid
    assert report.checks["nilpotency"] and report.checks["d2"] and report.checks["integrability"]


def test_frame_brackets_follow_structure_constants():
    a = iwasawa()
    assert frame_bracket(a, 1, 2) == VectorForm(a, 0, {(3, ()): -1})
    assert frame_bracket(a, 2, 1) == VectorForm(a, 0, {(3, ()): 1})
    assert not frame_bracket(a, 1, 3)
    assert bracket_table(a) == {(1, 2): {3: -1}, (2, 1): {3: 1}}


def test_torus_is_abelian():
    t = torus(4)
    assert validate(t).valid and bracket_table(t) == {}


def test_cycle_is_not_nilpotent():
    a = AlgebraSpec("cyclic", 3, {1: {((2, 3), ()): 1}, 2: {((1, 3), ()): 1}})
    report = validate(a)
    assert not report.checks["nilpotency"]
    assert any("cycle" in f for f in report.failures)


def test_d_squared_failure_is_reported():
    # d phi5 = phi1^phi4 with d phi1 = phi2^phi3 gives d^2 phi5 = phi2^phi3^phi4
    a = AlgebraSpec("broken", 5, {1: {((2, 3), ()): 1}, 5: {((1, 4), ()): 1}})
    report = validate(a)
    assert not report.checks["d2"]


def test_02_component_breaks_integrability():
    a = AlgebraSpec("nonint", 3, {3: {((), (1, 2)): 1}})
    assert not validate(a).checks["integrability"]


def test_non_parallelisable_brackets_refused():
    a = AlgebraSpec("mixed", 3, {3: {((1,), (1,)): 1}})
    assert not a.parallelisable
    with pytest.raises(AlgebraError):
        bracket_table(a)


def test_frame_index_out_of_range():
    with pytest.raises(AlgebraError):
        frame_bracket(iwasawa(), 1, 4)
