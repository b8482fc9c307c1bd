"""Tests for the exact simplex solver and vertex enumeration."""
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from python_super_quantum.errors import (
    DimensionMismatchError,
    InputError,
    NotOptimalError,
    UnboundedPolytopeError,
)
from python_super_quantum.rational_lp import (
    Constraint,
    LinearProgram,
    LPStatus,
    Polytope,
    Relation,
    enumerate_vertices,
    format_rational,
    lp_maximize,
    optimal_face,
    parse_rational,
    to_rational,
)

pytestmark = pytest.mark.unit

LE, EQ, GE = Relation.LE, Relation.EQ, Relation.GE


def test_parse_and_format_rationals():
    """Rationals print as num/den, integers included"""
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(" 0.25 ") == Fraction(1, 4)
    assert format_rational(Fraction(2)) == "2/1"
    assert format_rational(Fraction(-5, 2)) == "-5/2"


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1//2"])
def test_parse_rational_rejects_garbage(bad):
    with pytest.raises(InputError):
        parse_rational(bad)


@pytest.mark.parametrize("value", [0.5, True, None])
def test_to_rational_refuses_inexact_values(value):
    with pytest.raises(InputError):
        to_rational(value)


@given(st.fractions())
def test_format_then_parse_is_identity(value):
    assert parse_rational(format_rational(value)) == value


@given(st.fractions(), st.fractions())
def test_rational_arithmetic_is_exact(first, second):
    """(a/b + c/d) - c/d gives back a/b with no drift"""
    total = to_rational(format_rational(first)) + to_rational(format_rational(second))
    assert total - second == first
    assert format_rational(total - second) == format_rational(first)


def test_two_variable_program():
    """max x + y with x + 2y <= 4, 3x + y <= 6 peaks at (8/5, 6/5)"""
    lp = LinearProgram(("x", "y"), (1, 1), (
        Constraint((1, 2), LE, 4),
        Constraint((3, 1), LE, 6),
    ))
    value, point, status = lp_maximize(lp)
    assert status is LPStatus.OPTIMAL
    assert value == Fraction(14, 5)
    assert point == (Fraction(8, 5), Fraction(6, 5))


def test_equality_and_lower_bound_rows():
    lp = LinearProgram(("x", "y"), (1, 0), (
        Constraint((1, 1), EQ, 1),
        Constraint((0, 1), GE, "1/3"),
    ))
    solution = lp_maximize(lp)
    assert solution.value == Fraction(2, 3)
    assert solution.point == (Fraction(2, 3), Fraction(1, 3))


def test_negative_right_hand_side():
    lp = LinearProgram(("x",), (-1,), (Constraint((-1,), LE, -2),))
    solution = lp_maximize(lp)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.point == (Fraction(2),)


def test_infeasible_program():
    lp = LinearProgram(("x",), (1,), (
        Constraint((1,), LE, 1),
        Constraint((1,), GE, 2),
    ))
    assert lp_maximize(lp).status is LPStatus.INFEASIBLE


def test_unbounded_program():
    lp = LinearProgram(("x", "y"), (1, 0), (Constraint((1, -1), LE, 1),))
    assert lp_maximize(lp).status is LPStatus.UNBOUNDED


def test_ragged_rows_are_rejected():
    with pytest.raises(DimensionMismatchError):
        LinearProgram(("x", "y"), (1, 1), (Constraint((1,), LE, 1),))
    with pytest.raises(DimensionMismatchError):
        LinearProgram(("x", "y"), (1,), (Constraint((1, 1), LE, 1),))


def test_duplicate_variables_are_rejected():
    with pytest.raises(InputError):
        Polytope(("x", "x"), (Constraint((1, 1), LE, 1),))


def test_vertices_of_the_unit_simplex():
    simplex = Polytope(("x", "y", "z"), (Constraint((1, 1, 1), EQ, 1),))
    assert enumerate_vertices(simplex) == [
        (0, 0, 1), (0, 1, 0), (1, 0, 0),
    ]


def test_vertices_of_a_square():
    square = Polytope(("x", "y"), (Constraint((1, 0), LE, 1), Constraint((0, 1), LE, 1)))
    assert enumerate_vertices(square) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_empty_polytope_has_no_vertices():
    empty = Polytope(("x",), (Constraint((1,), GE, 2), Constraint((1,), LE, 1)))
    assert enumerate_vertices(empty) == []


def test_unbounded_polytope_cannot_be_enumerated():
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices(Polytope(("x", "y"), (Constraint((1, -1), LE, 1),)))


def test_optimal_face_returns_every_maximizer():
    """x + y is maximal on a whole edge of the simplex"""
    lp = LinearProgram(("x", "y", "z"), (1, 1, 0), (Constraint((1, 1, 1), EQ, 1),))
    assert optimal_face(lp) == [(0, 1, 0), (1, 0, 0)]


def test_optimal_face_needs_an_optimum():
    lp = LinearProgram(("x",), (1,), (Constraint((1,), GE, 2), Constraint((1,), LE, 1)))
    with pytest.raises(NotOptimalError):
        optimal_face(lp)


rows = st.lists(
    st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(0, 12)),
    min_size=1, max_size=4,
)


@given(rows, st.integers(-3, 3), st.integers(-3, 3))
def test_simplex_agrees_with_vertex_enumeration(constraints, cx, cy):
    """Positive rows with nonnegative bounds give a bounded, feasible program"""
    lp = LinearProgram(
        ("x", "y"), (cx, cy), tuple(Constraint((a, b), LE, c) for a, b, c in constraints)
    )
    solution = lp_maximize(lp)
    assert solution.status is LPStatus.OPTIMAL
    assert lp.polytope.contains(solution.point)
    assert solution.value == max(lp.evaluate(v) for v in enumerate_vertices(lp.polytope))
