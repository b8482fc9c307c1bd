# hilbert.py
"""The matrix model of conditioning.

Events are orthogonal projections, states are density matrices, U_e x = exe,
T_e x is the Jordan product (ex + xe)/2, and the Lüders rule gives the
conditional probability trace(eρef) / trace(ρe). Sorkin's interference terms
are built from the products μ(f|e)μ(e) = μ(U_e f), evaluated directly so that
zero-probability conditions cause no division.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from python_super_quantum.eigen import lambda_min
from python_super_quantum.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvariantBreachError,
    NonOrthogonalEventsError,
    NotDensityStateError,
    NotHermitianError,
    NotProjectorError,
    ZeroProbabilityConditionError,
)

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
PROJECTOR_TOL = 1e-10
STATE_TOL = 1e-10
FLOAT_TOL = 1e-9
CONDITION_TOL = 1e-12

HermitianMatrix = np.ndarray


def _frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def _square(x) -> np.ndarray:
    m = np.array(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {m.shape}")
    return m


def _matrix(x) -> np.ndarray:
    if isinstance(x, (Projector, DensityState)):
        return x.matrix
    return _square(x)


def _same_dimension(*items) -> int:
    dims = {_matrix(item).shape[0] for item in items}
    if len(dims) != 1:
        raise DimensionMismatchError(f"Incompatible dimensions: {sorted(dims)}")
    return dims.pop()


def hermitize(m: np.ndarray) -> np.ndarray:
    """Symmetrise a product that is Hermitian in exact arithmetic"""
    drift = _frobenius(m - m.conj().T)
    if drift > HERMITIAN_TOL * max(1.0, _frobenius(m)):
        raise InvariantBreachError(f"Hermiticity drift {drift:.3e} exceeds {HERMITIAN_TOL}")
    return (m + m.conj().T) / 2


def as_hermitian(x) -> HermitianMatrix:
    m = _matrix(x)
    drift = _frobenius(m - m.conj().T)
    if drift > HERMITIAN_TOL * max(1.0, _frobenius(m)):
        raise NotHermitianError(f"Matrix differs from its adjoint by {drift:.3e}")
    return (m + m.conj().T) / 2


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class Projector:
    """An orthogonal projection P = P† = P²"""
    matrix: np.ndarray

    def __post_init__(self):
        m = as_hermitian(self.matrix)
        residual = _frobenius(m @ m - m)
        # idempotence to this tolerance pins every eigenvalue near 0 or 1
        if residual > PROJECTOR_TOL:
            raise NotProjectorError(f"P^2 differs from P by {residual:.3e}")
        object.__setattr__(self, 'matrix', _frozen(m))

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        return cls(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def from_frame(cls, columns: np.ndarray) -> "Projector":
        """Projector onto the span of orthonormal columns"""
        q = np.asarray(columns, dtype=complex)
        return cls(q @ q.conj().T)

    @classmethod
    def from_vectors(cls, *vectors: Sequence[complex]) -> "Projector":
        """Projector onto the span of arbitrary independent vectors"""
        stacked = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
        q, _ = np.linalg.qr(stacked)
        return cls.from_frame(q)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.matrix).real)))

    def complement(self) -> "Projector":
        return Projector(np.eye(self.dim) - self.matrix)

    def is_orthogonal_to(self, other: "Projector", tol: float = PROJECTOR_TOL) -> bool:
        _same_dimension(self, other)
        return _frobenius(self.matrix @ other.matrix) <= tol

    def is_below(self, other: "Projector", tol: float = PROJECTOR_TOL) -> bool:
        """self <= other, i.e. other' is orthogonal to self"""
        _same_dimension(self, other)
        return _frobenius(other.matrix @ self.matrix - self.matrix) <= tol

    def __add__(self, other: "Projector") -> "Projector":
        if not self.is_orthogonal_to(other):
            raise NonOrthogonalEventsError("The sum e + f is defined for orthogonal events only")
        return Projector(self.matrix + other.matrix)


@dataclass(frozen=True, eq=False)
class DensityState:
    """A positive semidefinite matrix of unit trace; μ(x) = trace(ρx)"""
    matrix: np.ndarray
    check_positivity: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_hermitian(self.matrix)
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > STATE_TOL:
            raise NotDensityStateError(f"Trace is {trace!r}, expected 1")
        if self.check_positivity:
            smallest = lambda_min(m)
            if smallest < -STATE_TOL:
                raise NotDensityStateError(f"Minimum eigenvalue {smallest:.3e} is negative")
        object.__setattr__(self, 'matrix', _frozen(m))

    @classmethod
    def from_vector(cls, psi: Sequence[complex]) -> "DensityState":
        v = np.asarray(psi, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), check_positivity=False)

    @classmethod
    def from_gram(cls, g: np.ndarray) -> "DensityState":
        """ρ = GG† / trace(GG†), positive by construction"""
        gram = np.asarray(g, dtype=complex)
        gram = gram @ gram.conj().T
        return cls(gram / np.trace(gram).real, check_positivity=False)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityState":
        return cls(np.eye(dim, dtype=complex) / dim, check_positivity=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, x) -> float:
        return float(np.trace(self.matrix @ _matrix(x)).real)

    def probability(self, e: Projector) -> float:
        _same_dimension(self, e)
        return self.expectation(e)


def u_map(e: Projector, x) -> HermitianMatrix:
    """U_e x = exe"""
    _same_dimension(e, x)
    m = as_hermitian(x)
    return hermitize(e.matrix @ m @ e.matrix)


def t_map(e: Projector, x) -> HermitianMatrix:
    """T_e x as the Jordan product (ex + xe) / 2"""
    _same_dimension(e, x)
    m = as_hermitian(x)
    return hermitize((e.matrix @ m + m @ e.matrix) / 2)


def t_map_via_u(e: Projector, x) -> HermitianMatrix:
    """T_e x = (x + U_e x - U_e' x) / 2"""
    m = as_hermitian(x)
    return hermitize((m + u_map(e, m) - u_map(e.complement(), m)) / 2)


def weighted_conditional(rho: DensityState, e: Projector, f: Projector) -> float:
    """μ(f|e)μ(e), read as μ(U_e f) = trace(eρef); defined even when μ(e) = 0"""
    _same_dimension(rho, e, f)
    return float(np.trace(e.matrix @ rho.matrix @ e.matrix @ f.matrix).real)


def cond_prob(rho: DensityState, e: Projector, f: Projector) -> float:
    """Lüders conditional probability μ(f|e) = trace(eρef) / trace(ρe)"""
    p = rho.probability(e)
    if p <= CONDITION_TOL:
        raise ZeroProbabilityConditionError(f"Cannot condition on an event of probability {p:.3e}")
    value = weighted_conditional(rho, e, f) / p
    if not -FLOAT_TOL <= value <= 1.0 + FLOAT_TOL:
        raise InvariantBreachError(f"Conditional probability {value!r} outside [0, 1]")
    return value


def conditional_state(rho: DensityState, e: Projector) -> DensityState:
    """The Lüders-updated state eρe / trace(ρe)"""
    p = rho.probability(e)
    if p <= CONDITION_TOL:
        raise ZeroProbabilityConditionError(f"Cannot condition on an event of probability {p:.3e}")
    return DensityState(u_map(e, rho.matrix) / p, check_positivity=False)


@dataclass(frozen=True, eq=False)
class EventTriple:
    """Three pairwise orthogonal events"""
    e1: Projector
    e2: Projector
    e3: Projector

    def __post_init__(self):
        _same_dimension(self.e1, self.e2, self.e3)
        pairs = [(self.e1, self.e2, "e1, e2"), (self.e1, self.e3, "e1, e3"), (self.e2, self.e3, "e2, e3")]
        for first, second, label in pairs:
            if not first.is_orthogonal_to(second):
                raise NonOrthogonalEventsError(f"Events {label} are not orthogonal")

    @property
    def dim(self) -> int:
        return self.e1.dim


def sorkin_i3(rho: DensityState, triple: EventTriple, f: Projector) -> float:
    """Third-order interference term over a triple of exclusive events"""
    _same_dimension(rho, triple.e1, f)
    e1, e2, e3 = triple.e1, triple.e2, triple.e3

    def term(e: Projector) -> float:
        return weighted_conditional(rho, e, f)

    return (
        term(e1 + e2 + e3)
        - term(e1 + e2) - term(e1 + e3) - term(e2 + e3)
        + term(e1) + term(e2) + term(e3)
    )


def sorkin_i2(rho: DensityState, e1: Projector, e2: Projector, f: Projector) -> float:
    """Second-order interference μ(U_(e1+e2) f) - μ(U_e1 f) - μ(U_e2 f)"""
    _same_dimension(rho, e1, e2, f)
    if not e1.is_orthogonal_to(e2):
        raise NonOrthogonalEventsError("I2 needs orthogonal events")
    return (
        weighted_conditional(rho, e1 + e2, f)
        - weighted_conditional(rho, e1, f)
        - weighted_conditional(rho, e2, f)
    )


def check_t_additivity(e: Projector, f: Projector, x) -> float:
    """Frobenius residual of T_(e+f) x - T_e x - T_f x"""
    if not e.is_orthogonal_to(f):
        raise NonOrthogonalEventsError("T-additivity is stated for orthogonal events only")
    return _frobenius(t_map(e + f, x) - t_map(e, x) - t_map(f, x))


@dataclass(frozen=True)
class PropertyReport:
    """Largest residual seen for each checked identity"""
    residuals: Dict[str, float]
    states_used: int = 0

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def passed(self, tol: float = FLOAT_TOL) -> bool:
        return self.max_residual <= tol


def _supported_states(e: Projector, states: Iterable[DensityState]) -> List[DensityState]:
    return [rho for rho in states if abs(rho.probability(e) - 1.0) <= STATE_TOL]


def check_u_properties(
    e: Projector,
    samples: Sequence[HermitianMatrix],
    states: Sequence[DensityState],
    orthogonal_events: Optional[Sequence[Projector]] = None,
    sub_events: Optional[Sequence[Projector]] = None,
) -> PropertyReport:
    """Residuals of the U_e property list.

    ``orthogonal_events`` default to [e'] and ``sub_events`` to [e]; states
    count towards the invariance check only when μ(e) = 1.
    """
    identity = np.eye(e.dim, dtype=complex)
    orthogonal_events = list(orthogonal_events) if orthogonal_events is not None else [e.complement()]
    sub_events = list(sub_events) if sub_events is not None else [e]
    for f in orthogonal_events:
        if not e.is_orthogonal_to(f):
            raise NonOrthogonalEventsError("orthogonal_events must be orthogonal to e")
    for f in sub_events:
        if not f.is_below(e):
            raise NonOrthogonalEventsError("sub_events must satisfy e' orthogonal to f")

    supported = _supported_states(e, states)
    residuals = {
        "idempotent": max((_frobenius(u_map(e, u_map(e, x)) - u_map(e, x)) for x in samples), default=0.0),
        "unit_maps_to_e": _frobenius(u_map(e, identity) - e.matrix),
        "fixes_e": _frobenius(u_map(e, e) - e.matrix),
        "kills_orthogonal": max(_frobenius(u_map(e, f)) for f in orthogonal_events),
        "fixes_sub_events": max(_frobenius(u_map(e, f) - f.matrix) for f in sub_events),
        "state_invariance": max(
            (abs(rho.expectation(u_map(e, x)) - rho.expectation(x)) for rho in supported for x in samples),
            default=0.0,
        ),
    }
    logger.debug(f"U-property residuals: {residuals}")
    return PropertyReport(residuals, len(supported))


def check_t_properties(
    e: Projector, samples: Sequence[HermitianMatrix], states: Sequence[DensityState]
) -> PropertyReport:
    """Residuals of the T_e property list, including Jordan vs U-form agreement"""
    identity = np.eye(e.dim, dtype=complex)
    supported = _supported_states(e, states)
    residuals = {
        "unit_maps_to_e": _frobenius(t_map(e, identity) - e.matrix),
        "fixes_e": _frobenius(t_map(e, e) - e.matrix),
        "kills_orthogonal": _frobenius(t_map(e, e.complement())),
        "jordan_matches_u_form": max(
            (_frobenius(t_map(e, x) - t_map_via_u(e, x)) for x in samples), default=0.0
        ),
        "state_invariance": max(
            (abs(rho.expectation(t_map(e, x)) - rho.expectation(x)) for rho in supported for x in samples),
            default=0.0,
        ),
    }
    logger.debug(f"T-property residuals: {residuals}")
    return PropertyReport(residuals, len(supported))


def property_suite(dim: int, samples: int, seed: int) -> Tuple[PropertyReport, PropertyReport]:
    """U_e and T_e property reports for one random event.

    Half of the states are Lüders-updated onto e, so the μ(e) = 1 identities
    are exercised too.
    """
    rng = np.random.default_rng(seed)
    e = random_projector(dim, rng)
    xs = [random_hermitian(dim, rng) for _ in range(samples)]
    states = [random_density_state(dim, rng) for _ in range(samples)]
    states += [conditional_state(rho, e) for rho in states]
    return check_u_properties(e, xs, states), check_t_properties(e, xs, states)


# Random instances. Every generator takes an explicit numpy Generator so a
# corpus is reproducible from one master seed.

def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(_complex_gaussian(rng, (dim, dim)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(dim: int, rng: np.random.Generator) -> HermitianMatrix:
    g = _complex_gaussian(rng, (dim, dim))
    return (g + g.conj().T) / 2


def random_density_state(dim: int, rng: np.random.Generator) -> DensityState:
    return DensityState.from_gram(_complex_gaussian(rng, (dim, dim)))


def random_projector(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> Projector:
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    return Projector.from_frame(random_unitary(dim, rng)[:, :rank])


def random_orthogonal_triple(dim: int, rng: np.random.Generator) -> EventTriple:
    """Columns of one random orthonormal frame grouped into three projectors"""
    if dim < 3:
        raise InvalidDimensionError(f"An orthogonal triple needs dimension >= 3, got {dim}")
    total = int(rng.integers(3, dim + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, total), size=2, replace=False))
    frame = random_unitary(dim, rng)
    return EventTriple(
        Projector.from_frame(frame[:, :cuts[0]]),
        Projector.from_frame(frame[:, cuts[0]:cuts[1]]),
        Projector.from_frame(frame[:, cuts[1]:total]),
    )


@dataclass(frozen=True)
class InterferenceSummary:
    dims: Tuple[int, ...]
    samples: int
    seed: int
    max_abs_i3: float
    max_t_residual: float
    max_t_form_gap: float
    max_abs_i2: float


def interference_corpus(dims: Sequence[int], samples: int, seed: int) -> InterferenceSummary:
    """Randomised I3 / T-additivity sweep.

    Sample i uses dimension ``dims[i % len(dims)]`` and its own generator
    spawned from ``SeedSequence(seed)``, so results do not depend on order.
    """
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 3 for d in dims):
        raise InvalidDimensionError(f"Corpus dimensions must all be >= 3, got {list(dims)}")
    if samples < 1:
        raise InvalidDimensionError(f"samples must be >= 1, got {samples}")

    max_i3 = max_residual = max_gap = max_i2 = 0.0
    for index, child in enumerate(np.random.SeedSequence(seed).spawn(samples)):
        rng = np.random.default_rng(child)
        dim = dims[index % len(dims)]
        rho = random_density_state(dim, rng)
        triple = random_orthogonal_triple(dim, rng)
        f = random_projector(dim, rng)
        x = random_hermitian(dim, rng)

        max_i3 = max(max_i3, abs(sorkin_i3(rho, triple, f)))
        max_residual = max(max_residual, check_t_additivity(triple.e1, triple.e2, x))
        max_gap = max(max_gap, _frobenius(t_map(triple.e1, x) - t_map_via_u(triple.e1, x)))
        max_i2 = max(max_i2, abs(sorkin_i2(rho, triple.e1, triple.e2, f)))

    logger.info(
        f"Interference corpus ({samples} samples, dims {list(dims)}): "
        f"max|I3|={max_i3:.3e}, max T-residual={max_residual:.3e}"
    )
    return InterferenceSummary(dims, samples, seed, max_i3, max_residual, max_gap, max_i2)


@dataclass(frozen=True, eq=False)
class I2Witness:
    """A pure-state instance in dimension 3 with visible second-order interference"""
    psi: np.ndarray
    phi: np.ndarray
    value: float


def _basis_projector(dim: int, index: int) -> Projector:
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return Projector(m)


def i2_pure(psi: Sequence[complex], phi: Sequence[complex]) -> float:
    """I2 for ρ = |ψ><ψ|, f = |φ><φ| and e1, e2 the first two basis projectors"""
    rho = DensityState.from_vector(psi)
    f = Projector.from_vectors(phi)
    return sorkin_i2(rho, _basis_projector(3, 0), _basis_projector(3, 1), f)


I2_WITNESS_PSI = (1 / math.sqrt(2), 1 / math.sqrt(2), 0.0)
I2_WITNESS_PHI = (1 / math.sqrt(3), 1 / math.sqrt(3), 1 / math.sqrt(3))
I2_WITNESS_VALUE = 1 / 3


def i2_witness() -> I2Witness:
    """The stored fixture: ψ = (1,1,0)/√2, φ = (1,1,1)/√3, I2 = 1/3"""
    psi = np.array(I2_WITNESS_PSI, dtype=complex)
    phi = np.array(I2_WITNESS_PHI, dtype=complex)
    return I2Witness(psi, phi, i2_pure(psi, phi))


def _sphere_point(theta: float, azimuth: float) -> np.ndarray:
    return np.array([
        math.sin(theta) * math.cos(azimuth),
        math.sin(theta) * math.sin(azimuth),
        math.cos(theta),
    ], dtype=complex)


def search_i2_witness(steps: int = 6) -> I2Witness:
    """Coarse grid over real pure states ψ, φ in dimension 3, keeping the largest |I2|"""
    thetas = [math.pi * (i + 0.5) / steps for i in range(steps)]
    azimuths = [2 * math.pi * j / steps for j in range(steps)]
    grid = [_sphere_point(t, a) for t, a in product(thetas, azimuths)]

    best: Optional[I2Witness] = None
    for psi, phi in product(grid, grid):
        value = i2_pure(psi, phi)
        if best is None or abs(value) > abs(best.value):
            best = I2Witness(psi, phi, value)
    logger.info(f"I2 grid search over {len(grid) ** 2} pairs: best |I2| = {abs(best.value):.6f}")
    return best
