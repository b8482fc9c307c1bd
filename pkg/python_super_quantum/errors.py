# errors.py
"""Exception hierarchy shared by every module.

The CLI maps ``InputError`` to exit code 2 and ``InvariantBreachError`` to
exit code 3; everything else is an internal failure.
"""
from typing import Optional, Sequence


class SuperQuantumError(Exception):
    """Base class for all toolkit errors"""
    pass


class InputError(SuperQuantumError):
    """Raised when user-supplied data is malformed or violates a precondition"""
    pass


class ComputationError(SuperQuantumError):
    """Raised when a well-formed computation cannot produce a result"""
    pass


class InvariantBreachError(SuperQuantumError):
    """Raised when an acceptance-grade tolerance is violated at runtime"""
    pass


class DimensionMismatchError(InputError):
    """Raised on ragged constraint rows or incompatible matrix shapes"""
    pass


class LogicSyntaxError(InputError):
    """Raised when a logic file cannot be read"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class LogicValidationError(InputError):
    """Raised when a Greechie logic violates one of its invariants"""
    pass


class GreechieConditionError(LogicValidationError):
    """Raised when two blocks share more than one atom"""

    def __init__(self, first: Sequence[str], second: Sequence[str]):
        self.blocks = (tuple(first), tuple(second))
        super().__init__(
            f"Greechie condition violated: blocks {list(first)} and {list(second)} "
            f"share more than one atom"
        )


class UnknownAtomError(LogicValidationError):
    """Raised when a block or event names an atom the logic does not declare"""

    def __init__(self, atom: str):
        self.atom = atom
        super().__init__(f"Unknown atom: {atom}")


class InvalidEventError(InputError):
    """Raised when the atoms of an event do not lie in a common block"""
    pass


class StateValidationError(InputError):
    """Raised when an assignment is not a state on the logic"""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class WrongLogicError(InputError):
    """Raised when an operation needs a specific logic and gets another"""
    pass


class MalformedBoxError(InputError):
    """Raised when a box table is not a probability distribution"""
    pass


class InvalidDimensionError(InputError):
    """Raised when a Hilbert-space dimension is outside the supported range"""
    pass


class NonOrthogonalEventsError(InputError):
    """Raised when events that must be orthogonal are not"""
    pass


class OrthogonalityPatternError(InputError):
    """Raised when projectors do not realise the required exclusivity graph"""
    pass


class ZeroProbabilityConditionError(InputError):
    """Raised when conditioning on an event of (numerically) zero probability"""
    pass


class NotHermitianError(InputError):
    """Raised when a matrix is not self-adjoint"""
    pass


class NotProjectorError(InputError):
    """Raised when a matrix is not an orthogonal projection"""
    pass


class NotDensityStateError(InputError):
    """Raised when a matrix is not a unit-trace positive operator"""
    pass


class UnknownFixtureError(InputError):
    """Raised when a named built-in does not exist"""
    pass


class UnboundedPolytopeError(ComputationError):
    """Raised when vertex enumeration is asked for an unbounded region"""
    pass


class InfeasibleLogicError(ComputationError):
    """Raised when a logic admits no state at all"""
    pass


class NotOptimalError(ComputationError):
    """Raised when an optimum is required but the program has none"""
    pass


class ConvergenceError(ComputationError):
    """Raised when an iterative solver exhausts its sweep budget"""
    pass


class DegenerateDrawError(ComputationError):
    """Raised when random orthogonal draws keep collapsing"""

    def __init__(self, seed: int, trial: int, retries: int):
        self.seed = seed
        self.trial = trial
        self.retries = retries
        super().__init__(
            f"Degenerate draw: {retries} retries exhausted "
            f"(seed={seed}, trial={trial})"
        )
