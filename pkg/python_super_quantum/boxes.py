# boxes.py
"""Bipartite boxes with two settings and two outcomes per party.

A box holds one joint distribution p_mn(r, s) for every pair of settings
(m, n) in {1, 2}² over the outcomes (r, s) in {+1, -1}². All box arithmetic is
exact; only the singlet CHSH path uses floats.
"""
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
import json
import logging
import math

import numpy as np
from pydantic import BaseModel, ValidationError

from python_super_quantum.errors import InputError, InvariantBreachError, MalformedBoxError
from python_super_quantum.rational_lp import RationalLike, format_rational, parse_rational, to_rational

logger = logging.getLogger(__name__)

SETTINGS: Tuple[Tuple[int, int], ...] = ((1, 1), (1, 2), (2, 1), (2, 2))
OUTCOMES: Tuple[Tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))
SETTING_KEYS = {setting: f"{setting[0]}{setting[1]}" for setting in SETTINGS}
OUTCOME_KEYS = {(1, 1): "++", (1, -1): "+-", (-1, 1): "-+", (-1, -1): "--"}

TSIRELSON_BOUND = 2 * math.sqrt(2)
ALGEBRAIC_CHSH_MAX = Fraction(4)
CLASSICAL_CHSH_MAX = Fraction(2)
FLOAT_TOL = 1e-9

Table = Tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class NoSignalingBox:
    """Four exact probability tables, in SETTINGS order, each in OUTCOMES order.

    Only the tables are validated here; whether the marginals are independent
    of the remote setting is reported by :func:`no_signaling_check`.
    """
    tables: Tuple[Table, ...]

    def __post_init__(self):
        if len(self.tables) != len(SETTINGS) or any(len(t) != len(OUTCOMES) for t in self.tables):
            raise MalformedBoxError("A box needs four tables of four outcomes")
        try:
            tables = tuple(tuple(to_rational(v) for v in t) for t in self.tables)
        except InputError as e:
            raise MalformedBoxError(str(e)) from e
        for setting, table in zip(SETTINGS, tables):
            if any(v < 0 for v in table):
                raise MalformedBoxError(f"Table {SETTING_KEYS[setting]} has a negative entry")
            total = sum(table, Fraction(0))
            if total != 1:
                raise MalformedBoxError(
                    f"Table {SETTING_KEYS[setting]} sums to {format_rational(total)}, expected 1"
                )
        object.__setattr__(self, 'tables', tables)

    @classmethod
    def from_function(cls, p: Callable[[int, int, int, int], RationalLike]) -> "NoSignalingBox":
        """Build from p(m, n, r, s)"""
        return cls(tuple(
            tuple(p(m, n, r, s) for r, s in OUTCOMES) for m, n in SETTINGS
        ))

    def prob(self, m: int, n: int, r: int, s: int) -> Fraction:
        return self.tables[SETTINGS.index((m, n))][OUTCOMES.index((r, s))]

    def as_dict(self) -> Dict[str, Dict[str, Fraction]]:
        return {
            SETTING_KEYS[setting]: {OUTCOME_KEYS[o]: v for o, v in zip(OUTCOMES, table)}
            for setting, table in zip(SETTINGS, self.tables)
        }


@dataclass(frozen=True)
class Correlator:
    """c_mn = Σ r s p_mn(r, s), in SETTINGS order"""
    values: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        if any(abs(c) > 1 for c in self.values):
            raise InvariantBreachError(f"Correlator outside [-1, 1]: {self.values}")

    def __getitem__(self, setting: Tuple[int, int]) -> Fraction:
        return self.values[SETTINGS.index(setting)]


def correlators(box: NoSignalingBox) -> Correlator:
    return Correlator(tuple(
        sum((r * s * v for (r, s), v in zip(OUTCOMES, table)), Fraction(0))
        for table in box.tables
    ))


@dataclass(frozen=True)
class NoSignalingReport:
    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def no_signaling_check(box: NoSignalingBox) -> NoSignalingReport:
    """Exact check that each party's marginals ignore the other party's setting"""
    violations = []
    for m, r in product((1, 2), (1, -1)):
        left = box.prob(m, 1, r, 1) + box.prob(m, 1, r, -1)
        right = box.prob(m, 2, r, 1) + box.prob(m, 2, r, -1)
        if left != right:
            violations.append(
                f"alice a{m}={r:+d}: {format_rational(left)} under b1, {format_rational(right)} under b2"
            )
    for n, s in product((1, 2), (1, -1)):
        left = box.prob(1, n, 1, s) + box.prob(1, n, -1, s)
        right = box.prob(2, n, 1, s) + box.prob(2, n, -1, s)
        if left != right:
            violations.append(
                f"bob b{n}={s:+d}: {format_rational(left)} under a1, {format_rational(right)} under a2"
            )
    if violations:
        logger.debug(f"Signaling box: {violations}")
    return NoSignalingReport(tuple(violations))


def chsh(box: NoSignalingBox) -> Fraction:
    """|c11 + c12 + c21 - c22|"""
    c = correlators(box)
    return abs(c[1, 1] + c[1, 2] + c[2, 1] - c[2, 2])


def chsh_symmetrized(box: NoSignalingBox) -> Fraction:
    """CHSH maximised over which of the four correlators carries the minus sign"""
    c = correlators(box).values
    total = sum(c, Fraction(0))
    return max(abs(total - 2 * c[k]) for k in range(4))


def deterministic_box(a1: int, a2: int, b1: int, b2: int) -> NoSignalingBox:
    """Product box p_mn(r, s) = [a_m = r][b_n = s] of a local strategy"""
    for value in (a1, a2, b1, b2):
        if value not in (1, -1):
            raise InputError(f"Deterministic outcomes must be +1 or -1, got {value}")
    a, b = {1: a1, 2: a2}, {1: b1, 2: b2}
    return NoSignalingBox.from_function(
        lambda m, n, r, s: 1 if (a[m] == r and b[n] == s) else 0
    )


def deterministic_boxes() -> List[NoSignalingBox]:
    """All 16 local deterministic strategies, (a1, a2, b1, b2) in product order"""
    return [deterministic_box(*strategy) for strategy in product((1, -1), repeat=4)]


def classical_chsh_max() -> Fraction:
    return max(chsh(box) for box in deterministic_boxes())


def uniform_box() -> NoSignalingBox:
    return NoSignalingBox.from_function(lambda m, n, r, s: Fraction(1, 4))


def mix_boxes(weights: Sequence[RationalLike], boxes: Sequence[NoSignalingBox]) -> NoSignalingBox:
    """Convex combination Σ w_i box_i"""
    if len(weights) != len(boxes) or not boxes:
        raise InputError("mix_boxes needs one weight per box and at least one box")
    exact = [to_rational(w) for w in weights]
    if any(w < 0 for w in exact) or sum(exact, Fraction(0)) != 1:
        raise InputError("Mixture weights must be nonnegative and sum to 1")
    return NoSignalingBox(tuple(
        tuple(
            sum((w * box.tables[i][j] for w, box in zip(exact, boxes)), Fraction(0))
            for j in range(len(OUTCOMES))
        )
        for i in range(len(SETTINGS))
    ))


# Singlet correlations. Angles are ordered (α1, α2, β1, β2).

CANONICAL_CHSH_ANGLES = (0.0, math.pi / 2, math.pi / 4, -math.pi / 4)


def singlet_correlator(alpha: float, beta: float) -> float:
    return -math.cos(alpha - beta)


def quantum_chsh(angles: Sequence[float]) -> float:
    """|c11 + c12 + c21 - c22| for the singlet, c_mn = -cos(α_m - β_n)"""
    if len(angles) != 4:
        raise InputError(f"quantum_chsh needs four angles, got {len(angles)}")
    a1, a2, b1, b2 = (float(angle) for angle in angles)
    return abs(
        singlet_correlator(a1, b1) + singlet_correlator(a1, b2)
        + singlet_correlator(a2, b1) - singlet_correlator(a2, b2)
    )


def tsirelson_grid_search(steps: int = 16) -> float:
    """Largest singlet CHSH value over a uniform grid of the four angles"""
    grid = np.linspace(0.0, 2 * np.pi, steps, endpoint=False)
    a1, a2, b1, b2 = np.meshgrid(grid, grid, grid, grid, indexing="ij")
    values = np.abs(
        -np.cos(a1 - b1) - np.cos(a1 - b2) - np.cos(a2 - b1) + np.cos(a2 - b2)
    )
    best = float(values.max())
    if best > TSIRELSON_BOUND + FLOAT_TOL:
        raise InvariantBreachError(f"Singlet CHSH {best!r} exceeds 2√2")
    logger.debug(f"Tsirelson grid search ({steps}^4 points): best {best:.12g}")
    return best


# PR boxes

def _pr_table(c: int) -> Tuple[Fraction, ...]:
    # uniform marginals with correlator c = ±1
    return tuple(Fraction(1 + r * s * c, 4) for r, s in OUTCOMES)


CANONICAL_PR_BOX = NoSignalingBox(tuple(_pr_table(c) for c in (-1, -1, -1, 1)))


def _relabel(box: NoSignalingBox, alice: Callable, bob: Callable, flip: Callable) -> NoSignalingBox:
    """Image of ``box`` under a setting permutation and outcome flips"""
    return NoSignalingBox.from_function(
        lambda m, n, r, s: box.prob(alice(m), bob(n), *flip(m, n, r, s))
    )


def _symmetries() -> List[Callable[[NoSignalingBox], NoSignalingBox]]:
    keep = lambda k: k
    swap = lambda k: 3 - k
    same = lambda m, n, r, s: (r, s)
    moves = [
        lambda box: _relabel(box, swap, keep, same),
        lambda box: _relabel(box, keep, swap, same),
    ]
    for setting in (1, 2):
        moves.append(lambda box, k=setting: _relabel(
            box, keep, keep, lambda m, n, r, s: (-r if m == k else r, s)
        ))
        moves.append(lambda box, k=setting: _relabel(
            box, keep, keep, lambda m, n, r, s: (r, -s if n == k else s)
        ))
    return moves


def pr_boxes() -> List[NoSignalingBox]:
    """The canonical PR box and its images under a1↔a2, b1↔b2 and ±1 flips of one observable.

    Breadth-first closure, so the first entry is the canonical box.
    """
    found = [CANONICAL_PR_BOX]
    queue = deque(found)
    moves = _symmetries()
    while queue:
        box = queue.popleft()
        for move in moves:
            image = move(box)
            if image not in found:
                found.append(image)
                queue.append(image)
    if len(found) != 8:
        raise InvariantBreachError(f"PR family closed at {len(found)} boxes, expected 8")
    return found


# Pentagon embedding. Each event fixes one observable of each party.

BoxEvent = Tuple[Tuple[str, int], Tuple[str, int]]

PENTAGON_BOX_EVENTS: Tuple[BoxEvent, ...] = (
    (("a1", 1), ("b1", -1)),
    (("a1", -1), ("b2", 1)),
    (("a2", -1), ("b2", -1)),
    (("a2", 1), ("b1", -1)),
    (("a1", -1), ("b1", 1)),
)


def event_probability(box: NoSignalingBox, event: BoxEvent) -> Fraction:
    (alice, r), (bob, s) = event
    return box.prob(int(alice[1]), int(bob[1]), r, s)


def exclusivity_witness(first: BoxEvent, second: BoxEvent) -> Optional[str]:
    """An observable the two events assign different values, if any"""
    values = dict(first)
    for observable, value in second:
        if observable in values and values[observable] != value:
            return observable
    return None


@dataclass(frozen=True)
class PentagonEmbedding:
    probabilities: Tuple[Fraction, ...]
    certificate: Tuple[Tuple[int, int, str], ...]

    @property
    def total(self) -> Fraction:
        return sum(self.probabilities, Fraction(0))


def box_to_pentagon(box: NoSignalingBox) -> PentagonEmbedding:
    """μ(e_k) for the five events, with the cyclic exclusivity certificate"""
    certificate = []
    for k in range(5):
        nxt = (k + 1) % 5
        observable = exclusivity_witness(PENTAGON_BOX_EVENTS[k], PENTAGON_BOX_EVENTS[nxt])
        if observable is None:
            raise InvariantBreachError(f"Events e{k + 1} and e{nxt + 1} are not exclusive")
        certificate.append((k + 1, nxt + 1, observable))
    probabilities = tuple(event_probability(box, event) for event in PENTAGON_BOX_EVENTS)
    return PentagonEmbedding(probabilities, tuple(certificate))


class BoxFile(BaseModel):
    """On-disk schema: ``{"p": {"11": {"++": "1/2", ...}, ...}}``"""
    p: Dict[str, Dict[str, Union[str, int]]]


def parse_box(text: str) -> NoSignalingBox:
    try:
        document = BoxFile.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise MalformedBoxError(f"line {e.lineno}: {e.msg}") from e
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first['loc'])
        raise MalformedBoxError(f"{location}: {first['msg']}") from e

    if set(document.p) != set(SETTING_KEYS.values()):
        raise MalformedBoxError(f"Settings must be exactly {sorted(SETTING_KEYS.values())}")
    tables = []
    for setting in SETTINGS:
        cells = document.p[SETTING_KEYS[setting]]
        if set(cells) != set(OUTCOME_KEYS.values()):
            raise MalformedBoxError(
                f"Table {SETTING_KEYS[setting]} must have outcomes {sorted(OUTCOME_KEYS.values())}"
            )
        try:
            tables.append(tuple(parse_rational(str(cells[OUTCOME_KEYS[o]])) for o in OUTCOMES))
        except InputError as e:
            raise MalformedBoxError(f"Table {SETTING_KEYS[setting]}: {e}") from e
    return NoSignalingBox(tuple(tables))


def serialize_box(box: NoSignalingBox) -> str:
    document = BoxFile(p={
        setting: {outcome: format_rational(v) for outcome, v in cells.items()}
        for setting, cells in box.as_dict().items()
    })
    return json.dumps(document.model_dump(), indent=2) + "\n"
