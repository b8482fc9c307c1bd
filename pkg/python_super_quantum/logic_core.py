# logic_core.py
"""Finite quantum logics given by Greechie diagrams.

A logic is a list of atoms plus its blocks (maximal contexts). Blocks are
Boolean algebras 2^k, distinct blocks share at most one atom, and a state puts
a probability vector on every block.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple
import json
import logging

from pydantic import BaseModel, ValidationError

from python_super_quantum.errors import (
    GreechieConditionError,
    InputError,
    InvalidEventError,
    LogicSyntaxError,
    LogicValidationError,
    StateValidationError,
    UnknownAtomError,
    WrongLogicError,
)
from python_super_quantum.rational_lp import (
    Constraint,
    Polytope,
    Relation,
    RationalLike,
    enumerate_vertices,
    format_rational,
    to_rational,
)

logger = logging.getLogger(__name__)


class LogicFile(BaseModel):
    """On-disk schema: ``{"atoms": [...], "blocks": [[...], ...]}``"""
    atoms: List[str]
    blocks: List[List[str]]


@dataclass(frozen=True)
class GreechieLogic:
    """Atoms plus blocks; validated on construction"""
    atoms: Tuple[str, ...]
    blocks: Tuple[Tuple[str, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'atoms', tuple(self.atoms))
        object.__setattr__(self, 'blocks', tuple(tuple(b) for b in self.blocks))
        self._validate()

    def _validate(self):
        if not self.atoms:
            raise LogicValidationError("A logic needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise LogicValidationError(f"Duplicate atoms in {list(self.atoms)}")
        if not self.blocks:
            raise LogicValidationError("A logic needs at least one block")

        known = set(self.atoms)
        seen: Dict[FrozenSet[str], Tuple[str, ...]] = {}
        for block in self.blocks:
            if len(block) < 2:
                raise LogicValidationError(f"Block {list(block)} has fewer than 2 atoms")
            if len(set(block)) != len(block):
                raise LogicValidationError(f"Block {list(block)} repeats an atom")
            for atom in block:
                if atom not in known:
                    raise UnknownAtomError(atom)
            key = frozenset(block)
            if key in seen:
                raise LogicValidationError(f"Duplicate block {list(block)}")
            seen[key] = block

        for first, second in combinations(self.blocks, 2):
            if len(set(first) & set(second)) > 1:
                raise GreechieConditionError(first, second)

        covered = {atom for block in self.blocks for atom in block}
        orphans = [atom for atom in self.atoms if atom not in covered]
        if orphans:
            raise LogicValidationError(f"Atoms in no block: {orphans}")

    def blocks_containing(self, atom: str) -> List[Tuple[str, ...]]:
        if atom not in self.atoms:
            raise UnknownAtomError(atom)
        return [block for block in self.blocks if atom in block]

    def co_blocked(self, first: str, second: str) -> bool:
        return first != second and any(
            first in block and second in block for block in self.blocks
        )

    def event(self, *atoms: str) -> "Event":
        """The event formed by atoms lying in one common block"""
        members = frozenset(atoms)
        for atom in members:
            if atom not in self.atoms:
                raise UnknownAtomError(atom)
        if members and not any(members <= set(block) for block in self.blocks):
            raise InvalidEventError(f"Atoms {sorted(members)} are not contained in a common block")
        return Event(members)

    def unit(self, block_index: int = 0) -> "Event":
        """The unit event 𝕀 as seen from one context"""
        return Event(frozenset(self.blocks[block_index]))


@dataclass(frozen=True)
class Event:
    """A set of co-blocked atoms; the empty set is the zero event"""
    atoms: FrozenSet[str] = field(default_factory=frozenset)

    def is_orthogonal_to(self, other: "Event", logic: GreechieLogic) -> bool:
        if self.atoms & other.atoms:
            return False
        return all(logic.co_blocked(a, b) for a in self.atoms for b in other.atoms)

    def join(self, other: "Event", logic: GreechieLogic) -> "Event":
        """The partial sum ``self + other``, defined inside one block only"""
        if self.atoms & other.atoms:
            raise InvalidEventError(
                f"Events {sorted(self.atoms)} and {sorted(other.atoms)} overlap"
            )
        return logic.event(*(self.atoms | other.atoms))


@dataclass(frozen=True)
class BlockViolation:
    block: Tuple[str, ...]
    total: Fraction


@dataclass(frozen=True)
class StateReport:
    """Outcome of :func:`validate_state`"""
    block_violations: Tuple[BlockViolation, ...] = ()
    range_violations: Tuple[Tuple[str, Fraction], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.block_violations and not self.range_violations

    def describe(self) -> str:
        if self.ok:
            return "ok"
        parts = [
            f"block {list(v.block)} sums to {format_rational(v.total)}"
            for v in self.block_violations
        ]
        parts.extend(
            f"atom {atom} has value {format_rational(value)} outside [0, 1]"
            for atom, value in self.range_violations
        )
        return "; ".join(parts)


def validate_state(logic: GreechieLogic, assignment: Mapping[str, RationalLike]) -> StateReport:
    """Check block sums equal 1 exactly and every value lies in [0, 1]"""
    missing = [atom for atom in logic.atoms if atom not in assignment]
    if missing:
        raise InputError(f"Assignment does not cover atoms {missing}")
    extra = [atom for atom in assignment if atom not in logic.atoms]
    if extra:
        raise UnknownAtomError(extra[0])

    values = {atom: to_rational(assignment[atom]) for atom in logic.atoms}
    block_violations = []
    for block in logic.blocks:
        total = sum((values[atom] for atom in block), Fraction(0))
        if total != 1:
            block_violations.append(BlockViolation(block, total))
    range_violations = [
        (atom, values[atom]) for atom in logic.atoms if not 0 <= values[atom] <= 1
    ]
    return StateReport(tuple(block_violations), tuple(range_violations))


@dataclass(frozen=True)
class LogicState:
    """An exact state: atom -> probability, a probability vector on each block"""
    logic: GreechieLogic
    assignment: Tuple[Tuple[str, Fraction], ...]

    @classmethod
    def from_assignment(cls, logic: GreechieLogic, assignment: Mapping[str, RationalLike]) -> "LogicState":
        report = validate_state(logic, assignment)
        if not report.ok:
            raise StateValidationError(f"Not a state: {report.describe()}", report)
        return cls(logic, tuple((atom, to_rational(assignment[atom])) for atom in logic.atoms))

    def __getitem__(self, atom: str) -> Fraction:
        for name, value in self.assignment:
            if name == atom:
                return value
        raise UnknownAtomError(atom)

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.assignment)

    def vector(self) -> Tuple[Fraction, ...]:
        return tuple(value for _, value in self.assignment)


def event_probability(state: LogicState, event: Event) -> Fraction:
    """μ(e) as the sum of its atom values"""
    # re-validate against the state's logic
    state.logic.event(*event.atoms)
    return sum((state[atom] for atom in event.atoms), Fraction(0))


@dataclass(frozen=True)
class OrthogonalityGraph:
    """Atoms as vertices, an edge whenever two atoms share a block"""
    vertices: Tuple[str, ...]
    edges: FrozenSet[FrozenSet[str]]

    def adjacent(self, first: str, second: str) -> bool:
        return frozenset((first, second)) in self.edges

    def neighbors(self, vertex: str) -> List[str]:
        return [v for v in self.vertices if self.adjacent(vertex, v)]

    def degree(self, vertex: str) -> int:
        return len(self.neighbors(vertex))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def restrict(self, subset: Iterable[str]) -> "OrthogonalityGraph":
        """Induced subgraph, vertex order taken from ``subset``"""
        chosen = tuple(subset)
        unknown = [v for v in chosen if v not in self.vertices]
        if unknown:
            raise UnknownAtomError(unknown[0])
        keep = set(chosen)
        return OrthogonalityGraph(chosen, frozenset(e for e in self.edges if e <= keep))

    def is_cycle(self) -> bool:
        """True for a single cycle through every vertex (C_n, n >= 3)"""
        n = len(self.vertices)
        if n < 3 or self.edge_count != n or any(self.degree(v) != 2 for v in self.vertices):
            return False
        start = self.vertices[0]
        previous, current, visited = None, start, 1
        while True:
            step = next(v for v in self.neighbors(current) if v != previous)
            if step == start:
                return visited == n
            previous, current, visited = current, step, visited + 1


def orthogonality_graph(logic: GreechieLogic) -> OrthogonalityGraph:
    edges = set()
    for block in logic.blocks:
        for first, second in combinations(block, 2):
            edges.add(frozenset((first, second)))
    return OrthogonalityGraph(logic.atoms, frozenset(edges))


def parse_logic(text: str) -> GreechieLogic:
    """Read a logic from its JSON file content"""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise LogicSyntaxError(e.msg, e.lineno) from e
    try:
        parsed = LogicFile.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first['loc'])
        raise LogicSyntaxError(f"{location}: {first['msg']}") from e
    logic = GreechieLogic(tuple(parsed.atoms), tuple(tuple(b) for b in parsed.blocks))
    logger.info(f"Parsed logic with {len(logic.atoms)} atoms and {len(logic.blocks)} blocks")
    return logic


def serialize_logic(logic: GreechieLogic) -> str:
    document = LogicFile(atoms=list(logic.atoms), blocks=[list(b) for b in logic.blocks])
    return json.dumps(document.model_dump(), indent=2) + "\n"


PENTAGON_NAME = "pentagon"


def pentagon_logic() -> GreechieLogic:
    """The five-block logic: blocks {e_k, f_k, e_(k+1 mod 5)}"""
    e = [f"e{k}" for k in range(1, 6)]
    f = [f"f{k}" for k in range(1, 6)]
    blocks = tuple((e[k], f[k], e[(k + 1) % 5]) for k in range(5))
    return GreechieLogic(tuple(e + f), blocks, name=PENTAGON_NAME)


def pentagon_state(logic: GreechieLogic) -> LogicState:
    """Wright's pentagon state: 1/2 on every e_k, 0 on every f_k"""
    if logic.atoms != pentagon_logic().atoms or logic.blocks != pentagon_logic().blocks:
        raise WrongLogicError("The pentagon state is only defined on the pentagon logic")
    half = Fraction(1, 2)
    return LogicState.from_assignment(
        logic, {atom: half if atom.startswith("e") else Fraction(0) for atom in logic.atoms}
    )


def state_polytope(logic: GreechieLogic) -> Polytope:
    """Block sums equal to 1 over nonnegative atom values"""
    rows = []
    for block in logic.blocks:
        members = set(block)
        rows.append(Constraint(
            tuple(1 if atom in members else 0 for atom in logic.atoms), Relation.EQ, 1
        ))
    return Polytope(logic.atoms, tuple(rows))


def enumerate_states(logic: GreechieLogic) -> List[LogicState]:
    """Every extreme state of the logic"""
    return [
        LogicState(logic, tuple(zip(logic.atoms, vertex)))
        for vertex in enumerate_vertices(state_polytope(logic))
    ]


def dispersion_free_states(logic: GreechieLogic) -> List[LogicState]:
    """Extreme states taking only the values 0 and 1"""
    return [
        state for state in enumerate_states(logic)
        if all(value in (0, 1) for value in state.vector())
    ]


def state_from_vertex(logic: GreechieLogic, vertex: Tuple[Fraction, ...]) -> LogicState:
    if len(vertex) != len(logic.atoms):
        raise InputError("Vertex does not match the logic's atoms")
    return LogicState.from_assignment(logic, dict(zip(logic.atoms, vertex)))
