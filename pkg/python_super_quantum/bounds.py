# bounds.py
"""Bounds on a weighted sum of event probabilities.

Three tiers are computed for a family of atoms of a logic:

- classical: best deterministic assignment, i.e. a maximum-weight independent
  set of the orthogonality graph (2 for the pentagon);
- logic: exact LP optimum over the state polytope (5/2 for the pentagon,
  attained only by the pentagon state);
- quantum: largest eigenvalue of the weighted projector sum for a concrete
  realization, and a randomized search over realizations (√5 for the
  pentagon in dimension 3).

The KCBS functional K = 5 - 4 Σ μ(e_k) rewrites the pentagon sum through the
±1 observables x_k = 2e_k - 1.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging
import math

import numpy as np

from python_super_quantum.eigen import lambda_max, top_eigenpair
from python_super_quantum.errors import (
    DegenerateDrawError,
    DimensionMismatchError,
    InfeasibleLogicError,
    InputError,
    InvalidDimensionError,
    InvariantBreachError,
    OrthogonalityPatternError,
)
from python_super_quantum.hilbert import DensityState, Projector
from python_super_quantum.logic_core import (
    GreechieLogic,
    LogicState,
    OrthogonalityGraph,
    dispersion_free_states,
    orthogonality_graph,
    pentagon_logic,
    state_from_vertex,
    state_polytope,
)
from python_super_quantum.rational_lp import (
    LinearProgram,
    LPStatus,
    RationalLike,
    lp_maximize,
    optimal_face,
    to_rational,
)

logger = logging.getLogger(__name__)

FLOAT_TOL = 1e-9
PATTERN_TOL = 1e-9
DEGENERATE_NORM = 1e-9

PENTAGON_EVENTS = ("e1", "e2", "e3", "e4", "e5")
LOGIC_PENTAGON_BOUND = Fraction(5, 2)
CLASSICAL_PENTAGON_BOUND = Fraction(2)
UMBRELLA_VALUE = math.sqrt(5)

MIN_SEARCH_DIM = 3
MAX_SEARCH_DIM = 6
DEFAULT_REFINE_STEPS = 40
DEFAULT_MAX_RETRIES = 20
POWER_ITERATIONS = 30
WARM_POWER_ITERATIONS = 10


@dataclass(frozen=True)
class WeightedEventFamily:
    """Atoms e_1..e_n of a logic with exact weights w_1..w_n"""
    logic: GreechieLogic
    events: Tuple[str, ...]
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, 'events', tuple(self.events))
        object.__setattr__(self, 'weights', tuple(to_rational(w) for w in self.weights))
        if not self.events:
            raise InputError("A family needs at least one event")
        if len(self.weights) != len(self.events):
            raise DimensionMismatchError(
                f"{len(self.weights)} weights given for {len(self.events)} events"
            )
        if len(set(self.events)) != len(self.events):
            raise InputError(f"Duplicate events in {list(self.events)}")
        for atom in self.events:
            # raises UnknownAtomError for atoms outside the logic
            self.logic.blocks_containing(atom)

    @classmethod
    def pentagon(cls, weights: Optional[Sequence[RationalLike]] = None) -> "WeightedEventFamily":
        """e1..e5 of the pentagon logic, unit weights unless given"""
        chosen = tuple(weights) if weights is not None else (1,) * len(PENTAGON_EVENTS)
        return cls(pentagon_logic(), PENTAGON_EVENTS, chosen)

    @property
    def graph(self) -> OrthogonalityGraph:
        return orthogonality_graph(self.logic).restrict(self.events)

    def objective(self) -> Tuple[Fraction, ...]:
        """The weights spread over every atom of the logic (0 off the family)"""
        by_atom = dict(zip(self.events, self.weights))
        return tuple(by_atom.get(atom, Fraction(0)) for atom in self.logic.atoms)

    def value(self, state: LogicState) -> Fraction:
        return sum((w * state[atom] for atom, w in zip(self.events, self.weights)), Fraction(0))


def logic_max(family: WeightedEventFamily) -> Tuple[Fraction, List[LogicState]]:
    """Exact maximum of Σ w_k μ(e_k) over all states and every state attaining it"""
    polytope = state_polytope(family.logic)
    lp = LinearProgram(polytope.variables, family.objective(), polytope.constraints)
    solution = lp_maximize(lp)
    if solution.status is LPStatus.INFEASIBLE:
        raise InfeasibleLogicError("The logic admits no state")
    if solution.status is LPStatus.UNBOUNDED:
        raise InvariantBreachError("State polytope reported unbounded")

    maximizers = [state_from_vertex(family.logic, vertex) for vertex in optimal_face(lp)]
    logger.info(f"Logic max {solution.value} attained by {len(maximizers)} extreme state(s)")
    return solution.value, maximizers


def best_independent_set(
    graph: OrthogonalityGraph, weights: Sequence[RationalLike]
) -> Tuple[Fraction, Tuple[str, ...]]:
    """Maximum-weight set of pairwise non-adjacent vertices (branch on each vertex)"""
    if len(weights) != len(graph.vertices):
        raise DimensionMismatchError(
            f"{len(weights)} weights given for {len(graph.vertices)} vertices"
        )
    weight = {v: to_rational(w) for v, w in zip(graph.vertices, weights)}

    def search(remaining: Tuple[str, ...]) -> Tuple[Fraction, Tuple[str, ...]]:
        if not remaining:
            return Fraction(0), ()
        head, rest = remaining[0], remaining[1:]
        skip = search(rest)
        if weight[head] <= 0:
            return skip
        value, chosen = search(tuple(v for v in rest if not graph.adjacent(head, v)))
        take = (weight[head] + value, (head,) + chosen)
        return take if take[0] > skip[0] else skip

    return search(graph.vertices)


def classical_max(graph: OrthogonalityGraph, weights: Sequence[RationalLike]) -> Fraction:
    """Best deterministic classical value; mixtures never beat a vertex"""
    value, chosen = best_independent_set(graph, weights)
    logger.debug(f"Classical max {value} on independent set {list(chosen)}")
    return value


def dispersion_free_max(family: WeightedEventFamily) -> Optional[Fraction]:
    """Best value over the logic's 0/1 states; None when the logic has none"""
    states = dispersion_free_states(family.logic)
    if not states:
        logger.warning("Logic has no dispersion-free states")
        return None
    return max(family.value(state) for state in states)


def _check_pattern(graph: OrthogonalityGraph, projectors: Sequence[Projector]):
    if len(projectors) != len(graph.vertices):
        raise DimensionMismatchError(
            f"{len(projectors)} projectors given for {len(graph.vertices)} events"
        )
    if len({p.dim for p in projectors}) != 1:
        raise DimensionMismatchError("Projectors act on different dimensions")
    index = {v: i for i, v in enumerate(graph.vertices)}
    for edge in graph.edges:
        first, second = sorted(edge, key=index.get)
        overlap = float(np.linalg.norm(projectors[index[first]].matrix @ projectors[index[second]].matrix))
        if overlap > PATTERN_TOL:
            raise OrthogonalityPatternError(
                f"Projectors for exclusive events {first}, {second} overlap: |PQ| = {overlap:.3e}"
            )


def quantum_value(
    projectors: Sequence[Projector],
    graph: OrthogonalityGraph,
    weights: Optional[Sequence[RationalLike]] = None,
    state: Optional[DensityState] = None,
) -> float:
    """Value of a projector realization of the family.

    Without a state this is λ_max(Σ w_k P_k), the best state for the
    realization; with a state it is trace(ρ Σ w_k P_k). Only edges of the graph
    are required to be orthogonal.
    """
    _check_pattern(graph, projectors)
    coefficients = [float(to_rational(w)) for w in weights] if weights is not None else [1.0] * len(projectors)
    if len(coefficients) != len(projectors):
        raise DimensionMismatchError(f"{len(coefficients)} weights for {len(projectors)} projectors")
    total = sum(w * p.matrix for w, p in zip(coefficients, projectors))
    if state is not None:
        if state.dim != projectors[0].dim:
            raise DimensionMismatchError("State and projectors act on different dimensions")
        return state.expectation(total)
    return lambda_max(total)


def umbrella_vectors() -> np.ndarray:
    """Unit vectors v_k = (cos θ, sin θ cos(4πk/5), sin θ sin(4πk/5)), k = 0..4, as columns"""
    cos_sq = math.cos(math.pi / 5) / (1 + math.cos(math.pi / 5))
    cos_t, sin_t = math.sqrt(cos_sq), math.sqrt(1 - cos_sq)
    columns = [
        (cos_t, sin_t * math.cos(4 * math.pi * k / 5), sin_t * math.sin(4 * math.pi * k / 5))
        for k in range(5)
    ]
    return np.array(columns, dtype=complex).T


def umbrella_projectors() -> List[Projector]:
    """Rank-one projectors realizing C5 in dimension 3 with value √5"""
    vectors = umbrella_vectors()
    return [Projector.from_frame(vectors[:, k:k + 1]) for k in range(5)]


@dataclass(frozen=True, eq=False)
class SearchResult:
    dim: int
    trials: int
    seed: int
    refine_steps: int
    value: float
    best_trial: int
    vectors: np.ndarray = field(repr=False)
    state: np.ndarray = field(repr=False)

    @property
    def below_logic_bound(self) -> bool:
        return self.value < float(LOGIC_PENTAGON_BOUND)

    def projectors(self) -> List[Projector]:
        return [Projector.from_frame(self.vectors[:, k:k + 1]) for k in range(5)]

    def event_probabilities(self) -> List[float]:
        """μ(e_k) = |<v_k|ψ>|² in the top eigenvector ψ of the best configuration"""
        return [float(abs(np.vdot(self.vectors[:, k], self.state)) ** 2) for k in range(5)]


def _orthogonalize(vector: np.ndarray, basis: Sequence[np.ndarray]) -> Optional[np.ndarray]:
    """Unit vector along ``vector`` minus its projection on orthonormal ``basis``"""
    for q in basis:
        vector = vector - q * np.vdot(q, vector)
    norm = float(np.linalg.norm(vector))
    if norm < DEGENERATE_NORM:
        return None
    return vector / norm


def c5_frame(raw: np.ndarray) -> Optional[np.ndarray]:
    """Five unit vectors with v_k ⊥ v_(k+1) cyclically, built from raw columns.

    v1 is the first column normalised, v2..v4 are orthogonalised against their
    predecessor, and v5 against both v4 and v1. Returns None on a degenerate
    draw.
    """
    first = _orthogonalize(raw[:, 0], [])
    if first is None:
        return None
    columns = [first]
    for k in range(1, 4):
        nxt = _orthogonalize(raw[:, k], [columns[-1]])
        if nxt is None:
            return None
        columns.append(nxt)
    second_axis = _orthogonalize(columns[0], [columns[3]])
    if second_axis is None:
        return None
    last = _orthogonalize(raw[:, 4], [columns[3], second_axis])
    if last is None:
        return None
    columns.append(last)
    return np.column_stack(columns)


def _rayleigh(
    frame: np.ndarray, start: np.ndarray, iterations: int = POWER_ITERATIONS
) -> Tuple[float, np.ndarray]:
    """Power-iteration estimate of λ_max(Σ |v_k><v_k|), a lower bound"""
    m = frame @ frame.conj().T
    psi = start / math.sqrt(np.vdot(start, start).real)
    for _ in range(iterations):
        psi = m @ psi
        psi = psi / math.sqrt(np.vdot(psi, psi).real)
    return float(np.vdot(psi, m @ psi).real), psi


def _initial_vector(frame: np.ndarray) -> np.ndarray:
    m = frame @ frame.conj().T
    return m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]


def _draw(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, 5)) + 1j * rng.standard_normal((dim, 5))


def _run_trial(
    rng: np.random.Generator, dim: int, refine_steps: int, max_retries: int, seed: int, trial: int
) -> np.ndarray:
    for attempt in range(max_retries + 1):
        raw = _draw(rng, dim)
        frame = c5_frame(raw)
        if frame is not None:
            break
        logger.warning(f"Degenerate draw in trial {trial} (attempt {attempt + 1}), retrying")
    else:
        raise DegenerateDrawError(seed, trial, max_retries)

    # (1+1) evolution strategy on the raw draw
    score, psi = _rayleigh(frame, _initial_vector(frame))
    sigma = 0.3
    for _ in range(refine_steps):
        candidate_raw = raw + sigma * _draw(rng, dim)
        candidate = c5_frame(candidate_raw)
        if candidate is not None:
            candidate_score, candidate_psi = _rayleigh(candidate, psi, WARM_POWER_ITERATIONS)
            if candidate_score > score:
                raw, frame, score, psi = candidate_raw, candidate, candidate_score, candidate_psi
                sigma *= 1.5
                continue
        sigma *= 0.9
    return frame


def search_pentagon_projectors(
    dim: int,
    trials: int,
    seed: int,
    refine_steps: int = DEFAULT_REFINE_STEPS,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> SearchResult:
    """Randomized search for the best rank-one C5 realization in dimension ``dim``.

    Trial i runs on its own generator, child i of ``SeedSequence(seed)``, so
    the result does not depend on execution order. Each trial draws a
    configuration and improves it for ``refine_steps`` steps; the reported
    value is the Jacobi λ_max of the best configuration found.
    """
    if not MIN_SEARCH_DIM <= dim <= MAX_SEARCH_DIM:
        raise InvalidDimensionError(
            f"Search dimension must be in {MIN_SEARCH_DIM}..{MAX_SEARCH_DIM}, got {dim}"
        )
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    if refine_steps < 0 or max_retries < 0:
        raise InputError("refine_steps and max_retries must be nonnegative")

    best_value, best_trial, best_frame = -math.inf, -1, None
    for trial, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        frame = _run_trial(np.random.default_rng(child), dim, refine_steps, max_retries, seed, trial)
        value = lambda_max(frame @ frame.conj().T)
        if value > best_value:
            best_value, best_trial, best_frame = value, trial, frame

    if best_value > UMBRELLA_VALUE + FLOAT_TOL or best_value >= float(LOGIC_PENTAGON_BOUND):
        raise InvariantBreachError(
            f"Quantum pentagon value {best_value!r} exceeds the ceiling √5 (seed={seed})"
        )
    _, state = top_eigenpair(best_frame @ best_frame.conj().T)
    logger.info(f"Pentagon search dim={dim} trials={trials} seed={seed}: best {best_value:.12g} (trial {best_trial})")
    return SearchResult(dim, trials, seed, refine_steps, best_value, best_trial, best_frame, state)


Number = Union[Fraction, float]


def _probabilities(event_probs: Sequence[Union[RationalLike, float]]) -> Tuple[List[Number], bool]:
    if len(event_probs) != 5:
        raise DimensionMismatchError(f"KCBS needs five probabilities, got {len(event_probs)}")
    if any(isinstance(p, float) for p in event_probs):
        return [float(p) for p in event_probs], False
    return [to_rational(p) for p in event_probs], True


def kcbs_value(event_probs: Sequence[Union[RationalLike, float]]) -> Number:
    """K = 5 - 4 Σ μ(e_k); exact when every probability is exact"""
    probs, exact = _probabilities(event_probs)
    total = sum(probs, Fraction(0)) if exact else math.fsum(probs)
    return 5 - 4 * total


def kcbs_correlator_sum(event_probs: Sequence[Union[RationalLike, float]]) -> Number:
    """K as Σ_k <x_k x_(k+1)> with x_k = 2e_k - 1.

    For exclusive neighbours e_k e_(k+1) = 0, so <x_k x_(k+1)> = 1 - 2μ(e_k) - 2μ(e_(k+1)).
    """
    probs, exact = _probabilities(event_probs)
    terms = [1 - 2 * probs[k] - 2 * probs[(k + 1) % 5] for k in range(5)]
    return sum(terms, Fraction(0)) if exact else math.fsum(terms)


@dataclass(frozen=True)
class BoundReport:
    """The bound hierarchy for one family; validated on construction"""
    classical_max: Fraction
    logic_max: Fraction
    logic_maximizers: Tuple[LogicState, ...]
    quantum_value: Optional[float] = None
    dispersion_free_max: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, 'logic_maximizers', tuple(self.logic_maximizers))
        if self.classical_max > self.logic_max:
            raise InvariantBreachError(
                f"Classical max {self.classical_max} exceeds logic max {self.logic_max}"
            )
        if self.quantum_value is not None and self.quantum_value > float(self.logic_max) + FLOAT_TOL:
            raise InvariantBreachError(
                f"Quantum value {self.quantum_value!r} exceeds logic max {self.logic_max}"
            )

    @property
    def unique_maximizer(self) -> bool:
        return len(self.logic_maximizers) == 1

    def as_dict(self) -> Dict[str, object]:
        return {
            "classical_max": self.classical_max,
            "logic_max": self.logic_max,
            "maximizers": len(self.logic_maximizers),
            "unique_maximizer": self.unique_maximizer,
            "quantum_value": self.quantum_value,
            "dispersion_free_max": self.dispersion_free_max,
        }


def bound_report(
    family: WeightedEventFamily,
    projectors: Optional[Sequence[Projector]] = None,
    state: Optional[DensityState] = None,
) -> BoundReport:
    value, maximizers = logic_max(family)
    classical = classical_max(family.graph, family.weights)
    quantum = quantum_value(projectors, family.graph, family.weights, state) if projectors is not None else None
    return BoundReport(classical, value, tuple(maximizers), quantum, dispersion_free_max(family))
