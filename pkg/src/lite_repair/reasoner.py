"""Syntactic consistency machinery for DL-Lite.

Consistency of an assertion set against a TBox is decided without any model
construction: all negative inclusions are first saturated under the positive
ones into a `NegativeClosure`, after which inconsistency can only take the
shape of one assertion (on an unsatisfiable concept or role) or of a pair of
assertions instantiating a closed disjointness on a shared individual or
individual pair. Conflicts are therefore enumerable by scanning pairs, and
every minimal inconsistent subset has cardinality 1 or 2.

Saturation rules, run to fixpoint:

* B1 <= B2 and disjoint(B2, B3)        ->  disjoint(B1, B3)
* role R1 <= R2                        ->  exists R1 <= exists R2 and
                                           exists R1- <= exists R2- feed the
                                           concept rule above
* role R1 <= R2 and disjoint(R2, E)    ->  disjoint(R1, E)
* disjoint(R, R)                       ->  disjoint(exists R, exists R) and
                                           disjoint(exists R-, exists R-)
* disjoint(exists R, exists R)         ->  disjoint(R, R)   (same for R-)

Role disjointness is stored closed under inversion (disjoint(R, E) implies
disjoint(R-, E-)) so instantiation checks stay a plain set lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from lite_repair.model import (
    Assertion,
    AtomicConcept,
    BasicConcept,
    ConceptAssertion,
    ConceptInclusion,
    ExistentialConcept,
    Role,
    RoleAssertion,
    RoleInclusion,
    TBoxAxiom,
)

Conflict = frozenset  # of Assertion; cardinality 1 or 2


@dataclass(frozen=True)
class NegativeClosure:
    """Saturated disjointness constraints of a TBox.

    `concept_disjoint` holds 1- or 2-element frozensets of basic concepts
    (a singleton {B} encodes the unsatisfiability of B), `role_disjoint`
    likewise over roles. Both are queried symmetrically by construction.
    """

    concept_disjoint: frozenset[frozenset]
    role_disjoint: frozenset[frozenset]
    positive_concept_inclusions: frozenset[tuple[BasicConcept, BasicConcept]]
    positive_role_inclusions: frozenset[tuple[Role, Role]]

    def concepts_disjoint(self, left: BasicConcept, right: BasicConcept) -> bool:
        return frozenset((left, right)) in self.concept_disjoint

    def roles_disjoint(self, left: Role, right: Role) -> bool:
        return frozenset((left, right)) in self.role_disjoint


ClosureOrTBox = Union[NegativeClosure, frozenset, set, tuple, list]


def as_closure(tbox_or_closure: ClosureOrTBox) -> NegativeClosure:
    """Accept either a prebuilt closure or a raw TBox axiom collection."""
    if isinstance(tbox_or_closure, NegativeClosure):
        return tbox_or_closure
    return negative_closure(tbox_or_closure)


def negative_closure(tbox: Iterable[TBoxAxiom]) -> NegativeClosure:
    positive_concepts: set[tuple[BasicConcept, BasicConcept]] = set()
    positive_roles: set[tuple[Role, Role]] = set()
    concept_disjoint: set[frozenset] = set()
    role_disjoint: set[frozenset] = set()

    for axiom in tbox:
        if isinstance(axiom, ConceptInclusion):
            if axiom.negative:
                concept_disjoint.add(frozenset((axiom.lhs, axiom.rhs)))
            else:
                positive_concepts.add((axiom.lhs, axiom.rhs))
        elif isinstance(axiom, RoleInclusion):
            if axiom.negative:
                role_disjoint.add(frozenset((axiom.lhs, axiom.rhs)))
                role_disjoint.add(
                    frozenset((axiom.lhs.inverse(), axiom.rhs.inverse()))
                )
            else:
                positive_roles.add((axiom.lhs, axiom.rhs))
                positive_roles.add((axiom.lhs.inverse(), axiom.rhs.inverse()))
        else:
            raise TypeError(f"not a TBox axiom: {axiom!r}")

    # Role inclusions induce inclusions between the domains and the ranges.
    for sub, sup in list(positive_roles):
        positive_concepts.add((ExistentialConcept(sub), ExistentialConcept(sup)))

    changed = True
    while changed:
        changed = False

        for (sub, sup) in positive_concepts:
            for pair in list(concept_disjoint):
                if sup in pair:
                    other = _partner(pair, sup)
                    derived = frozenset((sub, other))
                    if derived not in concept_disjoint:
                        concept_disjoint.add(derived)
                        changed = True

        for (sub, sup) in positive_roles:
            for pair in list(role_disjoint):
                if sup in pair:
                    other = _partner(pair, sup)
                    derived = frozenset((sub, other))
                    if derived not in role_disjoint:
                        role_disjoint.add(derived)
                        changed = True

        # An empty role empties its domain and range, and vice versa.
        for pair in list(role_disjoint):
            if len(pair) == 1:
                (role,) = pair
                for concept in (
                    ExistentialConcept(role),
                    ExistentialConcept(role.inverse()),
                ):
                    derived = frozenset((concept,))
                    if derived not in concept_disjoint:
                        concept_disjoint.add(derived)
                        changed = True
        for pair in list(concept_disjoint):
            if len(pair) == 1:
                (concept,) = pair
                if isinstance(concept, ExistentialConcept):
                    derived = frozenset((concept.role,))
                    if derived not in role_disjoint:
                        role_disjoint.add(derived)
                        changed = True

    return NegativeClosure(
        concept_disjoint=frozenset(concept_disjoint),
        role_disjoint=frozenset(role_disjoint),
        positive_concept_inclusions=frozenset(positive_concepts),
        positive_role_inclusions=frozenset(positive_roles),
    )


def _partner(pair: frozenset, member):
    if len(pair) == 1:
        return member
    left, right = pair
    return right if left == member else left


def incoherent_concepts(tbox_or_closure: ClosureOrTBox) -> frozenset:
    """Basic concepts that are empty in every model of the TBox."""
    closure = as_closure(tbox_or_closure)
    return frozenset(
        next(iter(pair)) for pair in closure.concept_disjoint if len(pair) == 1
    )


@dataclass
class _Instantiations:
    """Where each basic concept / role is instantiated, and by which assertion."""

    concepts: dict = field(default_factory=dict)  # individual -> {concept -> {assertion}}
    roles: dict = field(default_factory=dict)  # (ind, ind) -> {role -> {assertion}}

    def add_concept(self, individual: str, concept: BasicConcept, source: Assertion):
        bucket = self.concepts.setdefault(individual, {})
        bucket.setdefault(concept, set()).add(source)

    def add_role(self, pair: tuple[str, str], role: Role, source: Assertion):
        bucket = self.roles.setdefault(pair, {})
        bucket.setdefault(role, set()).add(source)


def _instantiate(assertions: Iterable[Assertion]) -> _Instantiations:
    inst = _Instantiations()
    for assertion in assertions:
        if isinstance(assertion, ConceptAssertion):
            inst.add_concept(assertion.individual, AtomicConcept(assertion.concept), assertion)
        elif isinstance(assertion, RoleAssertion):
            role = Role(assertion.role)
            fwd = (assertion.subject, assertion.object)
            rev = (assertion.object, assertion.subject)
            inst.add_concept(assertion.subject, ExistentialConcept(role), assertion)
            inst.add_concept(assertion.object, ExistentialConcept(role.inverse()), assertion)
            inst.add_role(fwd, role, assertion)
            inst.add_role(rev, role.inverse(), assertion)
        else:
            raise TypeError(f"not an assertion: {assertion!r}")
    return inst


def _clashes(closure: NegativeClosure, inst: _Instantiations):
    """Yield (source_a, source_b) pairs violating a closed disjointness.

    A pair with source_a == source_b marks a single self-contradicting
    assertion (unsatisfiable concept/role, or e.g. P(a,a) when P and P- are
    disjoint).
    """
    for bucket in inst.concepts.values():
        members = list(bucket.items())
        for i, (concept_a, sources_a) in enumerate(members):
            for concept_b, sources_b in members[i:]:
                if frozenset((concept_a, concept_b)) in closure.concept_disjoint:
                    for fa in sources_a:
                        for fb in sources_b:
                            yield fa, fb
    for bucket in inst.roles.values():
        members = list(bucket.items())
        for i, (role_a, sources_a) in enumerate(members):
            for role_b, sources_b in members[i:]:
                if frozenset((role_a, role_b)) in closure.role_disjoint:
                    for fa in sources_a:
                        for fb in sources_b:
                            yield fa, fb


def is_consistent(tbox_or_closure: ClosureOrTBox, assertions: Iterable[Assertion]) -> bool:
    """True iff the TBox together with the assertions admits a model."""
    closure = as_closure(tbox_or_closure)
    inst = _instantiate(assertions)
    for _ in _clashes(closure, inst):
        return False
    return True


def conflicts(tbox_or_closure: ClosureOrTBox, assertions: Iterable[Assertion]) -> frozenset:
    """All minimal inconsistent subsets; each has one or two assertions."""
    closure = as_closure(tbox_or_closure)
    inst = _instantiate(assertions)
    singletons: set[Conflict] = set()
    pairs: set[Conflict] = set()
    for fa, fb in _clashes(closure, inst):
        if fa == fb:
            singletons.add(frozenset((fa,)))
        else:
            pairs.add(frozenset((fa, fb)))
    # A pair containing a self-contradicting assertion is not minimal.
    poisoned = {next(iter(s)) for s in singletons}
    minimal_pairs = {p for p in pairs if not (p & poisoned)}
    return frozenset(singletons | minimal_pairs)


def free_set(tbox_or_closure: ClosureOrTBox, assertions: Iterable[Assertion]) -> frozenset[Assertion]:
    """Assertions taking part in no conflict at all."""
    assertions = frozenset(assertions)
    involved: set[Assertion] = set()
    for conflict in conflicts(tbox_or_closure, assertions):
        involved |= conflict
    return assertions - involved


def conflict_involved(tbox_or_closure: ClosureOrTBox, assertions: Iterable[Assertion]) -> frozenset[Assertion]:
    """Union of all conflicts: the complement of `free_set`."""
    assertions = frozenset(assertions)
    return assertions - free_set(tbox_or_closure, assertions)


def check_strata(tbox_or_closure: ClosureOrTBox, layers: Iterable[frozenset[Assertion]]):
    """Return (stratum_index, witnessing_conflict) for each inconsistent layer."""
    closure = as_closure(tbox_or_closure)
    findings = []
    for index, layer in enumerate(layers, start=1):
        found = conflicts(closure, layer)
        if found:
            witness = min(found, key=lambda c: sorted(a.render() for a in c))
            findings.append((index, witness))
    return findings


def pairwise_conflicting(closure: NegativeClosure, left: Assertion, right: Assertion) -> bool:
    """Convenience used by tests: do these two assertions clash on their own?"""
    for fa, fb in _clashes(closure, _instantiate((left, right))):
        if fa != fb:
            return True
    return False


def all_individuals(assertions: Iterable[Assertion]) -> frozenset[str]:
    names: set[str] = set()
    for assertion in assertions:
        if isinstance(assertion, ConceptAssertion):
            names.add(assertion.individual)
        else:
            names.add(assertion.subject)
            names.add(assertion.object)
    return frozenset(names)
