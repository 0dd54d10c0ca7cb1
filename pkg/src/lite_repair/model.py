"""Immutable domain types: DL-Lite syntax, prioritized profiles, assertions.

Naming conventions used throughout the package:

* concept, role and individual names are interned strings; the three
  namespaces must be pairwise disjoint within one knowledge base (the
  parser enforces this, in-memory constructors trust the caller);
* strata are numbered from 1, lower index = more reliable;
* every type here is frozen, so values can be shared freely across
  concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


@dataclass(frozen=True)
class Role:
    """An atomic role or its inverse.

    The `inverted` flag is the whole representation of inversion, so a
    double inverse cannot even be constructed: `inverse()` flips the flag
    and flipping twice returns the original role.
    """

    name: str
    inverted: bool = False

    def inverse(self) -> "Role":
        return Role(self.name, not self.inverted)

    def render(self) -> str:
        return self.name + ("-" if self.inverted else "")


@dataclass(frozen=True)
class AtomicConcept:
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class ExistentialConcept:
    """The concept of having at least one filler for `role` (exists R)."""

    role: Role

    def render(self) -> str:
        return f"exists {self.role.render()}"


BasicConcept = Union[AtomicConcept, ExistentialConcept]


@dataclass(frozen=True)
class ConceptInclusion:
    """lhs <= rhs, or lhs <= !rhs when `negative` is set."""

    lhs: BasicConcept
    rhs: BasicConcept
    negative: bool = False

    def render(self) -> str:
        bang = "!" if self.negative else ""
        return f"{self.lhs.render()} <= {bang}{self.rhs.render()}"


@dataclass(frozen=True)
class RoleInclusion:
    """role lhs <= rhs, or role lhs <= !rhs when `negative` is set."""

    lhs: Role
    rhs: Role
    negative: bool = False

    def render(self) -> str:
        bang = "!" if self.negative else ""
        return f"role {self.lhs.render()} <= {bang}{self.rhs.render()}"


TBoxAxiom = Union[ConceptInclusion, RoleInclusion]


@dataclass(frozen=True)
class ConceptAssertion:
    concept: str
    individual: str

    def render(self) -> str:
        return f"{self.concept}({self.individual})"


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    def render(self) -> str:
        return f"{self.role}({self.subject}, {self.object})"


Assertion = Union[ConceptAssertion, RoleAssertion]


def assertion_key(assertion: Assertion) -> str:
    """Total order on assertions: lexicographic on the rendered form.

    Used everywhere output must be reproducible byte for byte.
    """
    return assertion.render()


def sorted_assertions(assertions: Iterable[Assertion]) -> list[Assertion]:
    return sorted(assertions, key=assertion_key)


@dataclass(frozen=True)
class Stratum:
    """One priority level of the assertional base (index 1 = most reliable)."""

    index: int
    assertions: frozenset[Assertion]


@dataclass(frozen=True)
class PrioritizedKB:
    """A TBox plus an ordered, contiguously indexed sequence of strata.

    Constructors trust their input; the file loader additionally checks
    that each stratum on its own is consistent with the TBox.
    """

    tbox: frozenset[TBoxAxiom]
    strata: tuple[Stratum, ...]

    def __post_init__(self) -> None:
        if not self.strata:
            raise ValueError("a prioritized KB needs at least one stratum")
        for position, stratum in enumerate(self.strata, start=1):
            if stratum.index != position:
                raise ValueError(
                    f"stratum indices must be contiguous from 1, "
                    f"got {stratum.index} at position {position}"
                )

    @property
    def layer_count(self) -> int:
        return len(self.strata)

    def layers(self) -> "StratifiedAssertions":
        return StratifiedAssertions(tuple(s.assertions for s in self.strata))

    def union(self) -> frozenset[Assertion]:
        return self.layers().union_up_to(self.layer_count)


@dataclass(frozen=True)
class StratifiedAssertions:
    """An ordered sequence of assertion sets, indexed 1..m.

    This is the single shape the repair engine works on: the raw profile of
    a KB (before querying) and the per-stratum answer supports (after
    querying) both reduce to it. The union across layers may well be
    inconsistent with the TBox.
    """

    layers: tuple[frozenset[Assertion], ...]

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    def union_up_to(self, k: int) -> frozenset[Assertion]:
        """Union of layers 1..k; k=0 gives the empty set."""
        if not 0 <= k <= self.layer_count:
            raise ValueError(f"prefix length {k} outside 0..{self.layer_count}")
        out: set[Assertion] = set()
        for layer in self.layers[:k]:
            out |= layer
        return frozenset(out)

    def union(self) -> frozenset[Assertion]:
        return self.union_up_to(self.layer_count)
