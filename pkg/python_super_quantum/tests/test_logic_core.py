"""Tests for Greechie logics, states and the orthogonality graph."""
import json
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

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
from python_super_quantum.logic_core import (
    Event,
    GreechieLogic,
    LogicState,
    dispersion_free_states,
    enumerate_states,
    event_probability,
    orthogonality_graph,
    parse_logic,
    pentagon_logic,
    pentagon_state,
    serialize_logic,
    validate_state,
)

pytestmark = pytest.mark.unit

HALF = Fraction(1, 2)


def test_pentagon_shape(pentagon):
    assert len(pentagon.atoms) == 10
    assert len(pentagon.blocks) == 5
    assert pentagon.blocks[4] == ("e5", "f5", "e1")


def test_pentagon_events_form_a_five_cycle(pentagon):
    graph = orthogonality_graph(pentagon).restrict(["e1", "e2", "e3", "e4", "e5"])
    assert graph.is_cycle()
    assert graph.edge_count == 5
    assert graph.neighbors("e1") == ["e2", "e5"]


def test_full_graph_has_one_edge_per_co_blocked_pair(pentagon):
    graph = orthogonality_graph(pentagon)
    assert graph.edge_count == 15
    assert graph.degree("f3") == 2
    assert not graph.is_cycle()


def test_greechie_condition_names_both_blocks():
    with pytest.raises(GreechieConditionError) as excinfo:
        GreechieLogic(("a", "b", "c"), (("a", "b", "c"), ("a", "b")))
    assert excinfo.value.blocks == (("a", "b", "c"), ("a", "b"))


@pytest.mark.parametrize("atoms, blocks", [
    ((), (("a", "b"),)),
    (("a", "a"), (("a", "b"),)),
    (("a", "b"), ()),
    (("a", "b"), (("a",),)),
    (("a", "b"), (("a", "a"),)),
    (("a", "b", "c"), (("a", "b"),)),
    (("a", "b"), (("a", "b"), ("b", "a"))),
])
def test_invalid_logics_are_rejected(atoms, blocks):
    with pytest.raises(LogicValidationError):
        GreechieLogic(atoms, blocks)


def test_unknown_atom_in_block():
    with pytest.raises(UnknownAtomError) as excinfo:
        GreechieLogic(("a", "b"), (("a", "z"),))
    assert excinfo.value.atom == "z"


def test_events_need_a_common_block(pentagon):
    assert pentagon.event("e1", "f1").atoms == frozenset({"e1", "f1"})
    with pytest.raises(InvalidEventError):
        pentagon.event("e1", "e3")
    with pytest.raises(UnknownAtomError):
        pentagon.event("x1")


def test_event_orthogonality_and_join(pentagon):
    e1, e2, e3 = pentagon.event("e1"), pentagon.event("e2"), pentagon.event("e3")
    assert e1.is_orthogonal_to(e2, pentagon)
    assert not e1.is_orthogonal_to(e3, pentagon)
    assert e1.join(e2, pentagon) == Event(frozenset({"e1", "e2"}))
    with pytest.raises(InvalidEventError):
        e1.join(e3, pentagon)
    with pytest.raises(InvalidEventError):
        e1.join(e1, pentagon)


def test_wright_state_values(wright_state):
    assert wright_state["e3"] == HALF
    assert wright_state["f3"] == 0
    assert sum(wright_state.vector()) == Fraction(5, 2)


def test_event_probability_adds_atoms(pentagon, wright_state):
    assert event_probability(wright_state, pentagon.event("e2", "f2")) == HALF
    assert event_probability(wright_state, pentagon.unit(2)) == 1


def test_validate_state_reports_violations(pentagon):
    assignment = {atom: Fraction(1, 3) for atom in pentagon.atoms}
    assert validate_state(pentagon, assignment).ok
    assignment["e1"] = Fraction(2)
    report = validate_state(pentagon, assignment)
    assert not report.ok
    assert len(report.block_violations) == 2
    assert report.range_violations == (("e1", Fraction(2)),)
    assert "outside [0, 1]" in report.describe()


def test_from_assignment_raises_with_report(pentagon):
    assignment = {atom: 0 for atom in pentagon.atoms}
    with pytest.raises(StateValidationError) as excinfo:
        LogicState.from_assignment(pentagon, assignment)
    assert len(excinfo.value.report.block_violations) == 5


def test_assignment_must_cover_exactly_the_atoms(pentagon):
    with pytest.raises(InputError):
        validate_state(pentagon, {"e1": 1})
    full = {atom: Fraction(1, 3) for atom in pentagon.atoms}
    full["zz"] = 0
    with pytest.raises(UnknownAtomError):
        validate_state(pentagon, full)


def test_pentagon_state_needs_the_pentagon():
    other = GreechieLogic(("a", "b"), (("a", "b"),))
    with pytest.raises(WrongLogicError):
        pentagon_state(other)


def test_extreme_states_of_the_pentagon(pentagon, wright_state):
    states = enumerate_states(pentagon)
    assert wright_state in states
    dispersion_free = dispersion_free_states(pentagon)
    # one per independent set of the five-cycle, the empty set included
    assert len(dispersion_free) == 11
    assert all(set(s.vector()) <= {0, 1} for s in dispersion_free)
    assert max(sum(s[e] for e in ("e1", "e2", "e3", "e4", "e5")) for s in dispersion_free) == 2


def test_parse_and_serialize_logic(pentagon):
    text = serialize_logic(pentagon)
    assert json.loads(text)["blocks"][0] == ["e1", "f1", "e2"]
    assert parse_logic(text) == pentagon


def test_parse_logic_reports_the_line():
    with pytest.raises(LogicSyntaxError) as excinfo:
        parse_logic('{\n  "atoms": ["a", "b"],\n  "blocks": [["a", "b"]\n')
    assert excinfo.value.line is not None


def test_parse_logic_checks_the_schema():
    with pytest.raises(LogicSyntaxError, match="blocks"):
        parse_logic('{"atoms": ["a", "b"]}')


def test_parse_logic_validates_greechie_condition():
    text = json.dumps({"atoms": ["a", "b", "c"], "blocks": [["a", "b", "c"], ["a", "b"]]})
    with pytest.raises(GreechieConditionError):
        parse_logic(text)


def test_single_block_graph_is_a_triangle():
    logic = GreechieLogic(("a", "b", "c"), (("a", "b", "c"),))
    graph = orthogonality_graph(logic)
    assert graph.edge_count == 3
    assert graph.is_cycle()


@given(
    st.sampled_from(pentagon_logic().atoms),
    st.fractions(min_value=-2, max_value=2).filter(lambda delta: delta != 0),
)
def test_any_single_perturbation_breaks_the_pentagon_state(atom, delta):
    logic = pentagon_logic()
    assignment = pentagon_state(logic).as_dict()
    assignment[atom] += delta
    report = validate_state(logic, assignment)
    assert not report.ok
    assert all(atom in violation.block for violation in report.block_violations)
    assert len(report.block_violations) == len(logic.blocks_containing(atom))


def test_event_probability_is_additive_on_orthogonal_events(pentagon):
    for state in enumerate_states(pentagon):
        for block in pentagon.blocks:
            for size in range(len(block) + 1):
                for chosen in combinations(block, size):
                    e = pentagon.event(*chosen)
                    f = pentagon.event(*(atom for atom in block if atom not in chosen))
                    joined = e.join(f, pentagon)
                    assert event_probability(state, joined) == (
                        event_probability(state, e) + event_probability(state, f)
                    )
                    assert event_probability(state, joined) == 1


@st.composite
def greechie_logics(draw):
    """Blocks that each reuse at most one earlier atom, so any two share at most one"""
    atoms, blocks = [], []
    for _ in range(draw(st.integers(1, 5))):
        size = draw(st.integers(2, 4))
        block = []
        if atoms and draw(st.booleans()):
            block.append(draw(st.sampled_from(atoms)))
        while len(block) < size:
            fresh = f"a{len(atoms)}"
            atoms.append(fresh)
            block.append(fresh)
        blocks.append(tuple(draw(st.permutations(block))))
    return GreechieLogic(tuple(atoms), tuple(blocks))


@given(greechie_logics())
def test_serialize_then_parse_is_identity(logic):
    assert parse_logic(serialize_logic(logic)) == logic
    graph = orthogonality_graph(parse_logic(serialize_logic(logic)))
    assert graph.edge_count == sum(len(b) * (len(b) - 1) // 2 for b in logic.blocks)
