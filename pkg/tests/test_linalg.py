import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcontact.linalg import ColumnMap, InfeasibleSystem, LinearSystem, in_span, nullspace, particular, rank, solve
from pcontact.scalars import GaussianRational as GQ
from pcontact.spaces import Span, combine, preimage_solve, solution_space, unit_vectors

entry = st.builds(GQ, st.integers(-4, 4), st.integers(-2, 2))


@st.composite
def systems(draw):
    m, n = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    matrix = [[draw(entry) for _ in range(n)] for _ in range(m)]
    rhs = [draw(entry) for _ in range(m)]
    return matrix, rhs


def _apply(matrix, x):
    return [sum((a * b for a, b in zip(row, x)), GQ(0)) for row in matrix]


@settings(max_examples=200)
@given(systems())
def test_nullspace_and_particular_residuals(sys_):
    matrix, rhs = sys_
    n = len(matrix[0])
    kernel = nullspace(LinearSystem.from_dense(matrix))
    assert len(kernel) + rank(LinearSystem.from_dense(matrix)) == n
    for k in kernel:
        assert not any(_apply(matrix, k))
    try:
        x = particular(LinearSystem.from_dense(matrix, rhs))
        assert _apply(matrix, x) == rhs
    except InfeasibleSystem as exc:
        y = exc.certificate
        left = [sum((y[i] * matrix[i][j] for i in range(len(matrix))), GQ(0)) for j in range(n)]
        assert not any(left)
        assert sum((a * b for a, b in zip(y, rhs)), GQ(0))


def test_infeasible_certificate():
    with pytest.raises(InfeasibleSystem) as info:
        particular(LinearSystem.from_dense([[1, 1], [2, 2]], [1, 3]))
    y = info.value.certificate
    assert y[0] * 1 + y[1] * 2 == 0 and y[0] * 1 + y[1] * 3 != 0


def test_solve_dispatch():
    s = LinearSystem.from_dense([[1, 0], [0, 0]], [2, 0])
    assert solve(s, "particular") == [GQ(2), GQ(0)]
    assert solve(s, "nullspace") == [[GQ(0), GQ(1)]]
    assert solve(s, "membership") is True
    with pytest.raises(ValueError):
        solve(s, "bogus")


def test_in_span():
    assert in_span([[1, 1, 0], [0, 1, 1]], [1, 2, 1], 3)
    assert not in_span([[1, 1, 0]], [0, 0, 1], 3)


def test_column_map_with_labels():
    cmap = ColumnMap([{"a": 1, "b": 1}, {"b": 1}])
    assert cmap.rank() == 2
    assert cmap.solve({"a": 2, "b": 3}) == {0: GQ(2), 1: GQ(1)}
    assert not cmap.in_image({"c": 1})


def test_span_operations():
    s = Span([{"x": 1}, {"y": 1}])
    t = Span([{"y": 1}, {"z": 1}])
    assert s.dim == 2 and (s + t).dim == 3
    assert s.intersection_dim(t) == 1
    assert s.contains({"x": 3, "y": -1}) and not s.contains({"z": 1})
    assert len(s.quotient_basis(Span([{"x": 1}]))) == 1


def test_solution_space_with_membership_constraint():
    basis = unit_vectors(["x", "y", "z"])
    # x + y = 0 and z lands in span{w}
    f = lambda v: {"r": v.get("x", 0) + v.get("y", 0)} if v.get("x", 0) + v.get("y", 0) else {}
    g = lambda v: {"w": v["z"]} if v.get("z") else {}
    sol = solution_space(basis, zero=[f], inside=[(g, Span([{"w": 1}]))])
    assert Span(sol).dim == 2
    assert Span(sol).contains({"x": 1, "y": -1})
    assert Span(sol).contains({"z": 1})


def test_preimage_and_combine():
    basis = [{"a": 1}, {"b": 1}]
    double = lambda v: {k: 2 * c for k, c in v.items()}
    assert preimage_solve(basis, double, {"a": 4}) == {"a": GQ(2)}
    assert combine(basis, {0: GQ(1), 1: GQ(-1)}) == {"a": GQ(1), "b": GQ(-1)}
