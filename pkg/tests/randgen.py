"""Deterministic random instances shared by the property suites.

The vocabulary is intentionally tiny (three concepts, two roles, three
individuals) so the brute-force oracles stay fast while collisions, and
therefore conflicts, happen often.
"""

from __future__ import annotations

import random

from lite_repair.model import (
    AtomicConcept,
    ConceptAssertion,
    ConceptInclusion,
    ExistentialConcept,
    Role,
    RoleAssertion,
    RoleInclusion,
    StratifiedAssertions,
)
from lite_repair.queries import Atom, ConjunctiveQuery, Var

CONCEPTS = ("A", "B", "C")
ROLES = ("R", "S")
INDIVIDUALS = ("a", "b", "c")


def random_basic_concept(rng: random.Random):
    if rng.random() < 0.6:
        return AtomicConcept(rng.choice(CONCEPTS))
    return ExistentialConcept(Role(rng.choice(ROLES), rng.random() < 0.5))


def random_tbox(rng: random.Random, max_axioms: int = 6) -> frozenset:
    axioms = set()
    for _ in range(rng.randint(0, max_axioms)):
        if rng.random() < 0.75:
            axioms.add(
                ConceptInclusion(
                    random_basic_concept(rng),
                    random_basic_concept(rng),
                    negative=rng.random() < 0.5,
                )
            )
        else:
            axioms.add(
                RoleInclusion(
                    Role(rng.choice(ROLES), rng.random() < 0.3),
                    Role(rng.choice(ROLES), rng.random() < 0.3),
                    negative=rng.random() < 0.4,
                )
            )
    return frozenset(axioms)


def random_assertion(rng: random.Random):
    if rng.random() < 0.6:
        return ConceptAssertion(rng.choice(CONCEPTS), rng.choice(INDIVIDUALS))
    return RoleAssertion(
        rng.choice(ROLES), rng.choice(INDIVIDUALS), rng.choice(INDIVIDUALS)
    )


def random_assertions(rng: random.Random, max_count: int = 6) -> frozenset:
    return frozenset(
        random_assertion(rng) for _ in range(rng.randint(0, max_count))
    )


def random_layers(
    rng: random.Random, max_total: int = 12, max_strata: int = 4
) -> StratifiedAssertions:
    strata = rng.randint(1, max_strata)
    layers: list[set] = [set() for _ in range(strata)]
    for _ in range(rng.randint(0, max_total)):
        layers[rng.randrange(strata)].add(random_assertion(rng))
    return StratifiedAssertions(tuple(frozenset(layer) for layer in layers))


def random_query(rng: random.Random, max_atoms: int = 2) -> ConjunctiveQuery:
    pool = (Var("v0"), Var("v1"), Var("v2"))

    def term():
        if rng.random() < 0.55:
            return rng.choice(pool)
        return rng.choice(INDIVIDUALS)

    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        if rng.random() < 0.5:
            atoms.append(Atom(rng.choice(CONCEPTS), (term(),)))
        else:
            atoms.append(Atom(rng.choice(ROLES), (term(), term())))
    body_vars = sorted(
        {v for atom in atoms for v in atom.variables()}, key=lambda v: v.name
    )
    head = tuple(v for v in body_vars if rng.random() < 0.5)
    return ConjunctiveQuery(head, tuple(atoms))
