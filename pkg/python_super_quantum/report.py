# report.py
"""Plain-text run reports with a pinned value formatter.

Exact values print as ``num/den``, floats with a fixed number of significant
digits and booleans as ``true``/``false``, so the same inputs and seed always
give byte-identical text.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple
import hashlib
import json
import logging

from python_super_quantum.rational_lp import format_rational

logger = logging.getLogger(__name__)

FLOAT_DIGITS = 12


def format_value(value: Any, digits: int = FLOAT_DIGITS) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, f".{digits}g")
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(format_value(v, digits) for v in value) + ")"
    return str(value)


def inputs_digest(inputs: Dict[str, Any]) -> str:
    """sha256 over the canonical JSON of the inputs"""
    canonical = json.dumps(inputs, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    seed: Optional[int] = None
    results: List[Tuple[str, Any]] = field(default_factory=list)
    wall_time: Optional[float] = None
    float_digits: int = FLOAT_DIGITS

    def add(self, key: str, value: Any) -> "RunReport":
        self.results.append((key, value))
        return self

    def value(self, key: str) -> Any:
        for name, value in self.results:
            if name == key:
                return value
        raise KeyError(key)

    @property
    def digest(self) -> str:
        return inputs_digest(self.inputs)

    def render(self) -> str:
        lines = [
            f"command: {self.command}",
            f"inputs-digest: {self.digest}",
            f"seed: {format_value(self.seed)}",
        ]
        lines.extend(f"{key}: {format_value(value, self.float_digits)}" for key, value in self.results)
        if self.wall_time is not None:
            lines.append(f"wall-time: {self.wall_time:.3f}s")
        return "\n".join(lines) + "\n"
