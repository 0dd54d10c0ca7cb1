"""Brute-force reference implementations backing the property suites.

Everything here trades speed for obviousness and is guarded against large
inputs; none of it is reachable from the CLI. The consistency and query
oracles are deliberately a different algorithm family from the production
code: they materialize a bounded chase (forward application of the positive
inclusions, inventing anonymous witnesses) and then read answers or
negative-axiom violations straight off the materialized structure, whereas
the production reasoner back-propagates disjointness and the production
evaluator rewrites queries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

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
    StratifiedAssertions,
    TBoxAxiom,
)
from lite_repair.queries import ConjunctiveQuery, Var
from lite_repair.reasoner import is_consistent

_ELEMENT_CAP = 20_000


class OracleSizeError(ValueError):
    """Input too large for an exponential or exhaustive oracle."""


@dataclass
class ChaseStructure:
    """A materialized interpretation: named individuals plus witnesses."""

    concept_members: dict = field(default_factory=dict)  # name -> set[element]
    role_pairs: dict = field(default_factory=dict)  # name -> set[(elem, elem)]
    named: set = field(default_factory=set)
    depth: dict = field(default_factory=dict)  # element -> creation depth

    def members_of(self, concept: BasicConcept) -> set:
        if isinstance(concept, AtomicConcept):
            return set(self.concept_members.get(concept.name, set()))
        pairs = self.role_pairs.get(concept.role.name, set())
        position = 1 if concept.role.inverted else 0
        return {pair[position] for pair in pairs}

    def pairs_of(self, role: Role) -> set:
        pairs = self.role_pairs.get(role.name, set())
        if role.inverted:
            return {(b, a) for a, b in pairs}
        return set(pairs)


def chase(
    tbox: Iterable[TBoxAxiom],
    assertions: Iterable[Assertion],
    max_depth: int | None = None,
) -> ChaseStructure:
    """Saturate the assertions under the positive inclusions.

    Existential requirements spawn anonymous witnesses up to `max_depth`
    levels away from the named individuals (default: TBox size + 1, which
    is deep enough for the bounded uses in this package); a requirement is
    considered met when any filler already exists.
    """
    tbox = list(tbox)
    if max_depth is None:
        max_depth = len(tbox) + 1
    structure = ChaseStructure()
    counter = itertools.count()

    for assertion in assertions:
        if isinstance(assertion, ConceptAssertion):
            structure.concept_members.setdefault(assertion.concept, set()).add(
                assertion.individual
            )
            structure.named.add(assertion.individual)
            structure.depth[assertion.individual] = 0
        else:
            structure.role_pairs.setdefault(assertion.role, set()).add(
                (assertion.subject, assertion.object)
            )
            for element in (assertion.subject, assertion.object):
                structure.named.add(element)
                structure.depth[element] = 0

    concept_incl = []
    role_incl = []
    for axiom in tbox:
        if isinstance(axiom, ConceptInclusion) and not axiom.negative:
            concept_incl.append((axiom.lhs, axiom.rhs))
        elif isinstance(axiom, RoleInclusion) and not axiom.negative:
            role_incl.append((axiom.lhs, axiom.rhs))
            role_incl.append((axiom.lhs.inverse(), axiom.rhs.inverse()))

    def add_pair(role: Role, first, second) -> bool:
        pair = (second, first) if role.inverted else (first, second)
        bucket = structure.role_pairs.setdefault(role.name, set())
        if pair in bucket:
            return False
        bucket.add(pair)
        return True

    changed = True
    while changed:
        changed = False
        for sub, sup in role_incl:
            for first, second in list(structure.pairs_of(sub)):
                if add_pair(sup, first, second):
                    changed = True
        for lhs, rhs in concept_incl:
            for element in list(structure.members_of(lhs)):
                if isinstance(rhs, AtomicConcept):
                    bucket = structure.concept_members.setdefault(rhs.name, set())
                    if element not in bucket:
                        bucket.add(element)
                        changed = True
                else:
                    if element in structure.members_of(rhs):
                        continue
                    if structure.depth[element] >= max_depth:
                        continue
                    witness = ("_w", next(counter))
                    if len(structure.depth) > _ELEMENT_CAP:  # pragma: no cover
                        raise OracleSizeError("chase exceeded the element cap")
                    structure.depth[witness] = structure.depth[element] + 1
                    add_pair(rhs.role, element, witness)
                    changed = True
    return structure


def oracle_consistency(
    tbox: Iterable[TBoxAxiom], assertions: Iterable[Assertion]
) -> bool:
    """Model-search consistency: chase, then test every negative axiom.

    The chase satisfies all positive axioms by construction, so the input
    has a model exactly when no negative axiom is violated on it.
    """
    assertions = list(assertions)
    if len(assertions) > 24:
        raise OracleSizeError("consistency oracle is limited to 24 assertions")
    tbox = list(tbox)
    role_names = {
        r.name
        for axiom in tbox
        if isinstance(axiom, RoleInclusion)
        for r in (axiom.lhs, axiom.rhs)
    }
    depth = max(len(tbox) + 1, 2 * len(role_names) + 2)
    structure = chase(tbox, assertions, max_depth=depth)
    for axiom in tbox:
        if isinstance(axiom, ConceptInclusion) and axiom.negative:
            if structure.members_of(axiom.lhs) & structure.members_of(axiom.rhs):
                return False
        elif isinstance(axiom, RoleInclusion) and axiom.negative:
            if structure.pairs_of(axiom.lhs) & structure.pairs_of(axiom.rhs):
                return False
    return True


def oracle_evaluate(
    query: ConjunctiveQuery,
    tbox: Iterable[TBoxAxiom],
    assertions: Iterable[Assertion],
) -> frozenset:
    """Certain answers read off the materialized chase.

    Head positions must land on named individuals; anonymous witnesses may
    serve only as matches for existential variables.
    """
    assertions = list(assertions)
    if len(assertions) > 24:
        raise OracleSizeError("evaluation oracle is limited to 24 assertions")
    structure = chase(tbox, assertions)
    answers = set()

    def extend(i: int, subst: dict) -> None:
        if i == len(query.body):
            head = tuple(
                subst[t] if isinstance(t, Var) else t for t in query.head
            )
            if all(element in structure.named for element in head):
                answers.add(head)
            return
        atom = query.body[i]
        if len(atom.args) == 1:
            (term,) = atom.args
            value = subst.get(term, term) if isinstance(term, Var) else term
            members = structure.concept_members.get(atom.pred, set())
            if isinstance(value, Var):
                for element in members:
                    subst[term] = element
                    extend(i + 1, subst)
                    del subst[term]
            elif value in members:
                extend(i + 1, subst)
            return
        t1, t2 = atom.args
        for subj, obj in structure.role_pairs.get(atom.pred, set()):
            bound = []
            compatible = True
            for term, value in ((t1, subj), (t2, obj)):
                current = subst.get(term, term) if isinstance(term, Var) else term
                if isinstance(current, Var):
                    subst[term] = value
                    bound.append(term)
                elif current != value:
                    compatible = False
                    break
            if compatible:
                extend(i + 1, subst)
            for term in bound:
                del subst[term]

    extend(0, {})
    return frozenset(answers)


def oracle_conflicts(
    tbox: Iterable[TBoxAxiom], assertions: Iterable[Assertion]
) -> frozenset:
    """Minimal inconsistent subsets, by checking every subset of size <= 3.

    Uses the chase-based consistency test throughout, so it shares nothing
    with the closure-based conflict scan it verifies. Checking up to size 3
    also demonstrates that no minimal conflict of that size exists.
    """
    assertions = list(assertions)
    if len(assertions) > 12:
        raise OracleSizeError("conflict oracle is limited to 12 assertions")
    tbox = list(tbox)
    verdict: dict[frozenset, bool] = {}

    def consistent(subset: frozenset) -> bool:
        if subset not in verdict:
            verdict[subset] = oracle_consistency(tbox, subset)
        return verdict[subset]

    minimal = set()
    for size in (1, 2, 3):
        for combo in itertools.combinations(assertions, size):
            subset = frozenset(combo)
            if consistent(subset):
                continue
            if all(
                consistent(subset - {member}) for member in subset
            ):
                minimal.add(subset)
    return frozenset(minimal)


def oracle_cns_rank(
    tbox_or_closure, layers: StratifiedAssertions
) -> int:
    """Linear prefix scan: grow k until the prefix union turns inconsistent."""
    rank = 0
    for k in range(1, layers.layer_count + 1):
        if is_consistent(tbox_or_closure, layers.union_up_to(k)):
            rank = k
        else:
            break
    return rank


def oracle_maximal_repairs(
    tbox_or_closure, assertions: Iterable[Assertion]
) -> frozenset:
    """All subset-maximal consistent subsets, by exhaustive enumeration."""
    assertions = list(assertions)
    if len(assertions) > 14:
        raise OracleSizeError("maximal-repair oracle is limited to 14 assertions")
    consistent_sets = []
    n = len(assertions)
    for mask in range(2**n):
        subset = frozenset(
            assertions[i] for i in range(n) if mask & (1 << i)
        )
        if is_consistent(tbox_or_closure, subset):
            consistent_sets.append(subset)
    maximal = [
        subset
        for subset in consistent_sets
        if not any(subset < other for other in consistent_sets)
    ]
    return frozenset(maximal)
