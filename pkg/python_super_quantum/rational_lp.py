# rational_lp.py
"""Exact rational linear programming for desk-scale polytopes.

Every number is a :class:`fractions.Fraction`; nothing is ever rounded.
Variables carry an implicit lower bound of 0.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging

from python_super_quantum.errors import (
    DimensionMismatchError,
    InputError,
    InvariantBreachError,
    NotOptimalError,
    UnboundedPolytopeError,
)

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, str, Fraction]
Vector = Tuple[Fraction, ...]


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"``, an integer or a finite decimal string exactly"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"Invalid rational: {text!r}") from e


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an exact value to a Fraction; floats are refused"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"Not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(
        f"Not an exact rational: {value!r} (pass an int, a Fraction or a 'num/den' string)"
    )


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class Relation(Enum):
    LE = "<="
    EQ = "="
    GE = ">="

    def flipped(self) -> "Relation":
        if self is Relation.LE:
            return Relation.GE
        if self is Relation.GE:
            return Relation.LE
        return self


@dataclass(frozen=True)
class Constraint:
    """One row ``coefficients . x  (relation)  rhs``"""
    coefficients: Vector
    relation: Relation
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(
            self, 'coefficients', tuple(to_rational(a) for a in self.coefficients)
        )
        object.__setattr__(self, 'relation', Relation(self.relation))
        object.__setattr__(self, 'rhs', to_rational(self.rhs))

    def activity(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coefficients, point)), Fraction(0))

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        lhs = self.activity(point)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


def _validate_rows(variables: Tuple[str, ...], constraints: Tuple[Constraint, ...]):
    if len(set(variables)) != len(variables):
        raise InputError(f"Duplicate variable names: {list(variables)}")
    if not constraints:
        raise InputError("A program needs at least one constraint")
    for index, row in enumerate(constraints):
        if len(row.coefficients) != len(variables):
            raise DimensionMismatchError(
                f"Constraint {index} has {len(row.coefficients)} coefficients, "
                f"expected {len(variables)}"
            )


@dataclass(frozen=True)
class Polytope:
    """H-representation over nonnegative variables"""
    variables: Tuple[str, ...]
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        object.__setattr__(self, 'constraints', tuple(self.constraints))
        _validate_rows(self.variables, self.constraints)

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def contains(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.dimension:
            raise DimensionMismatchError(
                f"Point has {len(point)} coordinates, expected {self.dimension}"
            )
        if any(x < 0 for x in point):
            return False
        return all(row.satisfied_by(point) for row in self.constraints)


@dataclass(frozen=True)
class LinearProgram:
    """Maximise ``objective . x`` over a :class:`Polytope`"""
    variables: Tuple[str, ...]
    objective: Vector
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        object.__setattr__(self, 'objective', tuple(to_rational(c) for c in self.objective))
        object.__setattr__(self, 'constraints', tuple(self.constraints))
        if len(self.objective) != len(self.variables):
            raise DimensionMismatchError(
                f"Objective has {len(self.objective)} coefficients, "
                f"expected {len(self.variables)}"
            )
        _validate_rows(self.variables, self.constraints)

    @property
    def polytope(self) -> Polytope:
        return Polytope(self.variables, self.constraints)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.objective, point)), Fraction(0))


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    value: Optional[Fraction] = None
    point: Optional[Vector] = None

    def __iter__(self) -> Iterator:
        # allows ``value, point, status = lp_maximize(lp)``
        return iter((self.value, self.point, self.status))


# Tableau helpers. A tableau is a list of rows; the last entry of each row is
# the right-hand side and ``basis[i]`` is the column basic in row i.

def _build_tableau(n: int, constraints: Sequence[Constraint]):
    rows = []
    for row in constraints:
        coefficients, relation, rhs = list(row.coefficients), row.relation, row.rhs
        if rhs < 0:
            coefficients = [-a for a in coefficients]
            rhs = -rhs
            relation = relation.flipped()
        rows.append((coefficients, relation, rhs))

    n_slack = sum(1 for _, relation, _ in rows if relation is not Relation.EQ)
    n_artificial = sum(1 for _, relation, _ in rows if relation is not Relation.LE)
    artificial_start = n + n_slack
    width = artificial_start + n_artificial

    tableau: List[List[Fraction]] = []
    basis: List[int] = []
    slack = n
    artificial = artificial_start
    for coefficients, relation, rhs in rows:
        line = coefficients + [Fraction(0)] * (width - n) + [rhs]
        if relation is Relation.LE:
            line[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        else:
            if relation is Relation.GE:
                line[slack] = Fraction(-1)
                slack += 1
            line[artificial] = Fraction(1)
            basis.append(artificial)
            artificial += 1
        tableau.append(line)
    return tableau, basis, artificial_start, width


def _pivot(tableau: List[List[Fraction]], basis: List[int], r: int, j: int):
    pivot = tableau[r][j]
    row = [v / pivot for v in tableau[r]]
    tableau[r] = row
    for i, other in enumerate(tableau):
        factor = other[j]
        if i != r and factor != 0:
            tableau[i] = [a - factor * b for a, b in zip(other, row)]
    basis[r] = j


def _run_simplex(tableau, basis, costs, allowed) -> bool:
    """Bland's rule primal simplex; returns False when unbounded"""
    width = len(costs)
    iterations = 0
    while True:
        in_basis = set(basis)
        entering = None
        for j in range(width):
            if not allowed[j] or j in in_basis:
                continue
            reduced = costs[j] - sum(
                (costs[b] * row[j] for b, row in zip(basis, tableau)), Fraction(0)
            )
            if reduced > 0:
                entering = j
                break
        if entering is None:
            logger.debug(f"Simplex optimal after {iterations} pivots")
            return True

        leaving = None
        best = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            return False
        _pivot(tableau, basis, leaving, entering)
        iterations += 1


def lp_maximize(lp: LinearProgram) -> LPSolution:
    """Solve ``lp`` exactly with the two-phase simplex method.

    Bland's rule guarantees termination on degenerate vertices, which the
    logic polytopes produce routinely.
    """
    n = len(lp.variables)
    tableau, basis, artificial_start, width = _build_tableau(n, lp.constraints)

    if artificial_start < width:
        phase_one = [Fraction(0)] * artificial_start + [Fraction(-1)] * (width - artificial_start)
        _run_simplex(tableau, basis, phase_one, [True] * width)
        residual = sum((phase_one[b] * row[-1] for b, row in zip(basis, tableau)), Fraction(0))
        if residual < 0:
            logger.debug(f"Phase one residual {residual}: infeasible")
            return LPSolution(LPStatus.INFEASIBLE)

        r = 0
        while r < len(tableau):
            if basis[r] >= artificial_start:
                column = next((j for j in range(artificial_start) if tableau[r][j] != 0), None)
                if column is None:
                    # redundant equality row
                    del tableau[r]
                    del basis[r]
                    continue
                _pivot(tableau, basis, r, column)
            r += 1

    costs = list(lp.objective) + [Fraction(0)] * (width - n)
    allowed = [j < artificial_start for j in range(width)]
    if not _run_simplex(tableau, basis, costs, allowed):
        return LPSolution(LPStatus.UNBOUNDED)

    point = [Fraction(0)] * n
    for b, row in zip(basis, tableau):
        if b < n:
            point[b] = row[-1]
    if not lp.polytope.contains(point):
        raise InvariantBreachError(f"Simplex returned an infeasible point {point}")
    return LPSolution(LPStatus.OPTIMAL, lp.evaluate(point), tuple(point))


def _independent_rows(rows: Sequence[Sequence[Fraction]]) -> List[int]:
    """Indices of a maximal linearly independent subset, in input order"""
    echelon: List[Tuple[int, List[Fraction]]] = []
    keep: List[int] = []
    for index, original in enumerate(rows):
        row = list(original)
        for column, reduced in echelon:
            factor = row[column]
            if factor != 0:
                row = [a - factor * b for a, b in zip(row, reduced)]
        pivot = next((c for c, v in enumerate(row) if v != 0), None)
        if pivot is not None:
            head = row[pivot]
            echelon.append((pivot, [v / head for v in row]))
            keep.append(index)
    return keep


def _solve_square(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Gauss-Jordan on a square system; None when singular"""
    n = len(rows)
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if augmented[r][col] != 0), None)
        if pivot is None:
            return None
        augmented[col], augmented[pivot] = augmented[pivot], augmented[col]
        head = augmented[col][col]
        augmented[col] = [v / head for v in augmented[col]]
        for r in range(n):
            factor = augmented[r][col]
            if r != col and factor != 0:
                augmented[r] = [a - factor * b for a, b in zip(augmented[r], augmented[col])]
    return [row[-1] for row in augmented]


def _check_bounded(p: Polytope) -> bool:
    """False when empty; raises when some coordinate is unbounded"""
    n = p.dimension
    for i, name in enumerate(p.variables):
        direction = [Fraction(0)] * n
        direction[i] = Fraction(1)
        solution = lp_maximize(LinearProgram(p.variables, tuple(direction), p.constraints))
        if solution.status is LPStatus.INFEASIBLE:
            return False
        if solution.status is LPStatus.UNBOUNDED:
            raise UnboundedPolytopeError(f"Polytope is unbounded along {name}")
    return True


def enumerate_vertices(p: Polytope) -> List[Vector]:
    """All vertices of ``p`` by exhaustive basic-solution enumeration.

    With r independent equalities and m inequalities (the nonnegativity
    bounds included) over n variables this solves C(m, n - r) exact square
    systems, which stays small for the logics and boxes handled here (at most
    about 20 variables and 30 constraints).
    """
    if not _check_bounded(p):
        return []

    n = p.dimension
    equalities = [row for row in p.constraints if row.relation is Relation.EQ]
    inequalities = [row for row in p.constraints if row.relation is not Relation.EQ]
    for i in range(n):
        unit = [Fraction(0)] * n
        unit[i] = Fraction(1)
        inequalities.append(Constraint(tuple(unit), Relation.GE, Fraction(0)))

    independent = [equalities[i] for i in _independent_rows([row.coefficients for row in equalities])]
    free = n - len(independent)
    logger.debug(
        f"Enumerating vertices: {comb(len(inequalities), free)} candidate bases "
        f"({len(inequalities)} inequalities, {free} free directions)"
    )

    found = set()
    for chosen in combinations(inequalities, free):
        system = independent + list(chosen)
        solution = _solve_square(
            [list(row.coefficients) for row in system], [row.rhs for row in system]
        )
        if solution is None:
            continue
        if all(row.satisfied_by(solution) for row in p.constraints) and all(x >= 0 for x in solution):
            found.add(tuple(solution))

    vertices = sorted(found)
    logger.info(f"Found {len(vertices)} vertices in dimension {n}")
    return vertices


def optimal_face(lp: LinearProgram) -> List[Vector]:
    """Every vertex of the feasible region attaining the LP optimum"""
    solution = lp_maximize(lp)
    if solution.status is not LPStatus.OPTIMAL:
        raise NotOptimalError(f"Program has no optimum: {solution.status.value}")

    vertices = enumerate_vertices(lp.polytope)
    values = [lp.evaluate(v) for v in vertices]
    if max(values) != solution.value:
        raise InvariantBreachError(
            f"Vertex maximum {max(values)} disagrees with simplex optimum {solution.value}"
        )
    return [v for v, value in zip(vertices, values) if value == solution.value]
