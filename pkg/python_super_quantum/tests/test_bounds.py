"""Tests for the classical, logic-level and quantum bounds and the KCBS functional."""
import math
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from python_super_quantum.bounds import (
    LOGIC_PENTAGON_BOUND,
    UMBRELLA_VALUE,
    BoundReport,
    WeightedEventFamily,
    best_independent_set,
    bound_report,
    c5_frame,
    classical_max,
    dispersion_free_max,
    kcbs_correlator_sum,
    kcbs_value,
    logic_max,
    quantum_value,
    search_pentagon_projectors,
    umbrella_vectors,
)
from python_super_quantum.errors import (
    DegenerateDrawError,
    DimensionMismatchError,
    InputError,
    InvalidDimensionError,
    InvariantBreachError,
    OrthogonalityPatternError,
    UnknownAtomError,
)
from python_super_quantum.hilbert import DensityState, Projector, random_unitary
from python_super_quantum.logic_core import GreechieLogic, OrthogonalityGraph

VERTICES = ("v1", "v2", "v3", "v4", "v5")
COS_SQ_THETA = math.cos(math.pi / 5) / (1 + math.cos(math.pi / 5))


def graph_with(edges):
    return OrthogonalityGraph(VERTICES, frozenset(frozenset(e) for e in edges))


def cycle_graph():
    return graph_with([(VERTICES[k], VERTICES[(k + 1) % 5]) for k in range(5)])


@pytest.mark.unit
class TestLogicMax:
    def test_pentagon_unit_weights(self, wright_state):
        value, maximizers = logic_max(WeightedEventFamily.pentagon())
        assert value == Fraction(5, 2)
        assert maximizers == [wright_state]

    def test_single_block_single_weight(self):
        logic = GreechieLogic(("a", "b", "c"), (("a", "b", "c"),))
        value, maximizers = logic_max(WeightedEventFamily(logic, ("a",), (1,)))
        assert value == 1
        assert len(maximizers) == 1 and maximizers[0]["a"] == 1

    def test_pentagon_two_exclusive_events(self):
        value, maximizers = logic_max(WeightedEventFamily.pentagon((1, 1, 0, 0, 0)))
        assert value == 1
        assert len(maximizers) > 1

    def test_family_validation(self, pentagon):
        with pytest.raises(UnknownAtomError):
            WeightedEventFamily(pentagon, ("e1", "x9"), (1, 1))
        with pytest.raises(DimensionMismatchError):
            WeightedEventFamily(pentagon, ("e1", "e2"), (1,))
        with pytest.raises(InputError):
            WeightedEventFamily(pentagon, ("e1", "e1"), (1, 1))
        with pytest.raises(InputError):
            WeightedEventFamily(pentagon, ("e1",), (0.5,))


@pytest.mark.unit
class TestClassicalMax:
    def test_five_cycle(self):
        assert classical_max(cycle_graph(), [1] * 5) == 2

    def test_edgeless_graph(self):
        assert classical_max(graph_with([]), [1] * 5) == 5

    def test_complete_graph(self):
        assert classical_max(graph_with(combinations(VERTICES, 2)), [1] * 5) == 1

    def test_weighted_cycle(self):
        value, chosen = best_independent_set(cycle_graph(), [3, 1, 1, 3, 1])
        assert value == 6
        assert set(chosen) == {"v1", "v4"}

    def test_negative_weights_are_skipped(self):
        assert classical_max(graph_with([]), [-1, 2, 0, -3, "1/2"]) == Fraction(5, 2)

    def test_pentagon_family_graph(self):
        assert classical_max(WeightedEventFamily.pentagon().graph, [1] * 5) == 2

    def test_dispersion_free_states_agree(self):
        assert dispersion_free_max(WeightedEventFamily.pentagon()) == 2


@pytest.mark.unit
class TestQuantumValue:
    def test_umbrella_reaches_sqrt5(self, umbrella):
        assert quantum_value(umbrella, cycle_graph()) == pytest.approx(math.sqrt(5), abs=1e-9)

    def test_umbrella_vectors_are_cyclically_orthogonal(self):
        v = umbrella_vectors()
        for k in range(5):
            assert abs(np.vdot(v[:, k], v[:, (k + 1) % 5])) <= 1e-12
            assert np.linalg.norm(v[:, k]) == pytest.approx(1.0)

    def test_umbrella_value_along_symmetry_axis(self, umbrella):
        """Σ |<v_k|ψ>|² at ψ = (1, 0, 0) is 5 cos²θ"""
        rho = DensityState.from_vector((1, 0, 0))
        value = quantum_value(umbrella, cycle_graph(), state=rho)
        assert value == pytest.approx(5 * COS_SQ_THETA, abs=1e-9)
        assert value == pytest.approx(math.sqrt(5), abs=1e-9)

    def test_identity_alone(self):
        graph = OrthogonalityGraph(("a",), frozenset())
        assert quantum_value([Projector.identity(3)], graph) == pytest.approx(1.0, abs=1e-9)

    def test_two_orthogonal_rank_one_projectors(self):
        graph = OrthogonalityGraph(("a", "b"), frozenset({frozenset({"a", "b"})}))
        pair = [Projector(np.diag([1.0, 0.0])), Projector(np.diag([0.0, 1.0]))]
        assert quantum_value(pair, graph) == pytest.approx(1.0, abs=1e-9)

    def test_pattern_violation(self):
        graph = OrthogonalityGraph(("a", "b"), frozenset({frozenset({"a", "b"})}))
        same = Projector(np.diag([1.0, 0.0]))
        with pytest.raises(OrthogonalityPatternError):
            quantum_value([same, same], graph)

    def test_projector_count_must_match(self, umbrella):
        with pytest.raises(DimensionMismatchError):
            quantum_value(umbrella[:4], cycle_graph())

    def test_unitary_invariance(self, umbrella, rng):
        base = quantum_value(umbrella, cycle_graph())
        for _ in range(5):
            u = random_unitary(3, rng)
            rotated = [Projector(u @ p.matrix @ u.conj().T) for p in umbrella]
            assert quantum_value(rotated, cycle_graph()) == pytest.approx(base, abs=1e-9)

    def test_bound_hierarchy_on_the_pentagon(self, umbrella):
        report = bound_report(WeightedEventFamily.pentagon(), umbrella)
        assert report.classical_max <= report.quantum_value <= report.logic_max
        assert report.unique_maximizer
        assert report.dispersion_free_max == 2

    def test_report_rejects_a_broken_hierarchy(self):
        with pytest.raises(InvariantBreachError):
            BoundReport(Fraction(3), Fraction(2), ())
        with pytest.raises(InvariantBreachError):
            BoundReport(Fraction(2), Fraction(5, 2), (), quantum_value=2.6)


@pytest.mark.unit
class TestSearch:
    def test_frame_is_cyclically_orthogonal(self, rng):
        raw = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
        frame = c5_frame(raw)
        for k in range(5):
            assert abs(np.vdot(frame[:, k], frame[:, (k + 1) % 5])) <= 1e-12

    def test_degenerate_raw_draw(self):
        raw = np.zeros((3, 5), dtype=complex)
        assert c5_frame(raw) is None

    def test_single_trial_is_reproducible(self):
        first = search_pentagon_projectors(3, 1, seed=7)
        second = search_pentagon_projectors(3, 1, seed=7)
        assert first.value == second.value
        assert first.value <= UMBRELLA_VALUE + 1e-9
        assert first.below_logic_bound

    @pytest.mark.parametrize("dim", [3, 4, 5, 6])
    def test_never_exceeds_the_ceiling(self, dim):
        result = search_pentagon_projectors(dim, 5, seed=dim, refine_steps=5)
        assert result.value <= UMBRELLA_VALUE + 1e-9
        assert result.value < float(LOGIC_PENTAGON_BOUND)

    def test_found_projectors_realize_the_cycle(self):
        result = search_pentagon_projectors(3, 3, seed=2, refine_steps=3)
        value = quantum_value(result.projectors(), cycle_graph())
        assert value == pytest.approx(result.value, abs=1e-9)

    def test_best_state_spreads_the_value_over_the_events(self):
        result = search_pentagon_projectors(4, 3, seed=11, refine_steps=4)
        assert np.linalg.norm(result.state) == pytest.approx(1.0, abs=1e-9)
        probabilities = result.event_probabilities()
        assert sum(probabilities) == pytest.approx(result.value, abs=1e-9)
        assert kcbs_correlator_sum(probabilities) == pytest.approx(5 - 4 * result.value, abs=1e-9)

    @pytest.mark.parametrize("dim", [2, 7])
    def test_dimension_range(self, dim):
        with pytest.raises(InvalidDimensionError):
            search_pentagon_projectors(dim, 1, seed=0)

    def test_needs_a_trial(self):
        with pytest.raises(InputError):
            search_pentagon_projectors(3, 0, seed=0)

    def test_retry_exhaustion_reports_the_seed(self, mocker):
        mocker.patch("python_super_quantum.bounds.c5_frame", return_value=None)
        with pytest.raises(DegenerateDrawError) as excinfo:
            search_pentagon_projectors(3, 1, seed=99, max_retries=2)
        assert excinfo.value.seed == 99
        assert excinfo.value.trial == 0


@pytest.mark.slow
def test_search_approaches_sqrt5():
    started = time.perf_counter()
    result = search_pentagon_projectors(3, 2000, seed=7)
    assert time.perf_counter() - started < 30.0
    assert math.sqrt(5) - 1e-2 <= result.value <= math.sqrt(5) + 1e-9


@pytest.mark.unit
class TestKcbs:
    def test_pentagon_state(self):
        assert kcbs_value([Fraction(1, 2)] * 5) == -5

    def test_classical_sum(self):
        assert kcbs_value([1, 0, 1, 0, 0]) == -3

    def test_quantum_sum(self):
        value = kcbs_value([math.sqrt(5) / 5] * 5)
        assert isinstance(value, float)
        assert value == pytest.approx(5 - 4 * math.sqrt(5), abs=1e-6)

    def test_exact_inputs_stay_exact(self):
        assert isinstance(kcbs_value(["1/3"] * 5), Fraction)

    def test_needs_five_values(self):
        with pytest.raises(DimensionMismatchError):
            kcbs_value([1, 0, 0, 0])

    @given(st.lists(st.fractions(min_value=0, max_value=1), min_size=5, max_size=5))
    def test_affine_and_equal_to_correlator_form(self, probs):
        k = kcbs_value(probs)
        assert k + 4 * sum(probs) == 5
        assert kcbs_correlator_sum(probs) == k
