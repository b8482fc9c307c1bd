# fixtures.py
"""Named built-in logics and boxes, so the standard analyses need no input files."""
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional
import logging
import re

from python_super_quantum.boxes import pr_boxes, uniform_box
from python_super_quantum.errors import InputError, UnknownFixtureError
from python_super_quantum.logic_core import PENTAGON_NAME, pentagon_logic

logger = logging.getLogger(__name__)

LOGIC = "logic"
BOX = "box"


@dataclass
class NamedFixture:
    """A built-in object and the names it answers to"""
    name: str
    kind: str
    description: str
    factory: Callable[[], Any]
    aliases: List[str] = None

    def __post_init__(self):
        if self.aliases is None:
            self.aliases = []
        if self.kind not in (LOGIC, BOX):
            raise InputError(f"Unknown fixture kind: {self.kind}")


class FixtureRegistry:
    """Registry of named fixtures with alias resolution"""

    def __init__(self):
        self.fixtures: Dict[str, NamedFixture] = {}
        self.aliases: Dict[str, str] = {}
        self._initialize_builtins()

    def _initialize_builtins(self):
        self.register(NamedFixture(
            name=PENTAGON_NAME,
            kind=LOGIC,
            description="Five three-atom blocks {e_k, f_k, e_k+1} arranged in a cycle",
            factory=pentagon_logic,
            aliases=["wright"],
        ))
        for index in range(8):
            self.register(NamedFixture(
                name=f"pr{index + 1}",
                kind=BOX,
                description="Popescu-Rohrlich box" + (" with correlators (-1, -1, -1, +1)" if index == 0 else f", symmetry image {index}"),
                factory=lambda i=index: pr_boxes()[i],
                aliases=["pr"] if index == 0 else [],
            ))
        self.register(NamedFixture(
            name="uniform",
            kind=BOX,
            description="Product box with every outcome at 1/4",
            factory=uniform_box,
        ))

    def register(self, fixture: NamedFixture):
        if not re.match(r'^[a-z][a-z0-9_]*$', fixture.name):
            raise InputError(f"Invalid fixture name: {fixture.name}")
        if fixture.name in self.fixtures:
            logger.warning(f"Overriding existing fixture: {fixture.name}")
        self.fixtures[fixture.name] = fixture
        for alias in fixture.aliases:
            if alias in self.aliases:
                logger.warning(f"Overriding existing alias: {alias}")
            self.aliases[alias] = fixture.name

    def resolve(self, name: str) -> Optional[str]:
        """Canonical name for ``name`` or one of its aliases, None if unknown"""
        key = name.strip().lower()
        key = self.aliases.get(key, key)
        return key if key in self.fixtures else None

    def __contains__(self, name: str) -> bool:
        return self.resolve(name) is not None

    def build(self, name: str, kind: Optional[str] = None) -> Any:
        canonical = self.resolve(name)
        if canonical is None:
            raise UnknownFixtureError(f"Unknown fixture: {name}")
        fixture = self.fixtures[canonical]
        if kind is not None and fixture.kind != kind:
            raise UnknownFixtureError(f"Fixture {canonical} is a {fixture.kind}, not a {kind}")
        logger.debug(f"Building fixture {canonical}")
        return fixture.factory()

    def names(self, kind: Optional[str] = None) -> List[str]:
        return [name for name, f in self.fixtures.items() if kind is None or f.kind == kind]


registry = FixtureRegistry()
