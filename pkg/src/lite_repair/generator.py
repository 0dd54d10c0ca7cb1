"""Synthetic stratified KBs with a controlled number of conflicts.

The construction plants exactly `target_conflicts` minimal conflicts in the
union of the strata while keeping every stratum consistent on its own: the
two members of a conflict always land in different strata, every conflict
gets its own dedicated individual, and filler assertions only ever combine
vocabulary that the ontology leaves unconstrained.

Ontology template (fixed shape, scaled by the vocabulary sizes):

* a hub concept C2 declared disjoint from the spoke concepts C1, C3, C5,
  so one individual carrying the hub plus s spokes yields s binary
  conflicts from s+1 assertions;
* a subsumption chain C6 <= C7 <= C1, which makes the derived pairs
  (C6, C2) and (C7, C2) disjoint through propagation;
* a witness role RW included in PW (exercising query rewriting), left
  otherwise unconstrained so witness assertions never conflict with
  anything;
* a role RD with domain C1 and declared disjoint from PW, giving both
  derived concept conflicts (exists RD vs C2) and derived role conflicts
  (RD vs RW);
* remaining concepts and roles are free filler vocabulary.

Conflict patterns: `anchors` (spoke in stratum 1, hub in stratum j, for
every later j) pin the consistency rank at 1 and make each later stratum
clash with the first; `stars` batch up to three spokes around one hub; a
tenth of the rest are RD/RW pair conflicts on a shared individual pair.

Query-side composition is kept steady so that repair-quality trends move
with the conflict count and nothing else. Witness bundles (RW(x, z) to
make an individual answer the benchmark queries, C4(x) to give it one
conflict-free support atom) go, in this order, to all anchors and to a
conflict-proportional prefix of the stars, the latter placed outside
stratum 1; bundle fillers then top the conflict-free support mass up to a
fixed target of about a tenth of the assertion budget. Remaining budget is
spent on filler assertions that no benchmark query can see.

Everything is a pure function of the spec: the same `GenSpec` always
yields the identical knowledge base.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from lite_repair.model import (
    Assertion,
    AtomicConcept,
    ConceptAssertion,
    ConceptInclusion,
    ExistentialConcept,
    PrioritizedKB,
    Role,
    RoleAssertion,
    RoleInclusion,
    Stratum,
    TBoxAxiom,
)

HUB = "C2"
SPOKES = ("C1", "C3", "C5")
CHAIN = ("C6", "C7")
PRIMARY_SAFE = "C4"
WITNESS_ROLE = "RW"
SUPER_ROLE = "PW"
DOMAIN_ROLE = "RD"
QUERY_SINK = "z"
SAFE_SINK = "zz"
DOMAIN_SINK = "w"

_MIN_CONCEPTS = 8
_MIN_ROLES = 3
_RESERVED_INDIVIDUALS = (QUERY_SINK, SAFE_SINK, DOMAIN_SINK)
_WITNESSED_STAR_SHARE = 0.045


class InfeasibleSpec(ValueError):
    def __init__(self, message: str):
        super().__init__(f"infeasible-spec: {message}")
        self.code = "infeasible-spec"


@dataclass(frozen=True)
class GenSpec:
    """Size knobs for one synthetic KB.

    `assertion_count` counts per-stratum entries, so an assertion
    duplicated into two strata counts twice, matching how a base of a
    given size is split up into strata.
    """

    assertion_count: int
    strata_count: int
    target_conflicts: int
    concepts: int = 8
    roles: int = 3
    individuals: int = 400
    seed: int = 0


def template_tbox(concepts: int, roles: int) -> frozenset[TBoxAxiom]:
    if concepts < _MIN_CONCEPTS:
        raise InfeasibleSpec(f"at least {_MIN_CONCEPTS} concepts required")
    if roles < _MIN_ROLES:
        raise InfeasibleSpec(f"at least {_MIN_ROLES} roles required")
    axioms: set[TBoxAxiom] = set()
    for spoke in SPOKES:
        axioms.add(ConceptInclusion(AtomicConcept(spoke), AtomicConcept(HUB), negative=True))
    axioms.add(ConceptInclusion(AtomicConcept(CHAIN[0]), AtomicConcept(CHAIN[1])))
    axioms.add(ConceptInclusion(AtomicConcept(CHAIN[1]), AtomicConcept(SPOKES[0])))
    axioms.add(RoleInclusion(Role(WITNESS_ROLE), Role(SUPER_ROLE)))
    axioms.add(
        ConceptInclusion(ExistentialConcept(Role(DOMAIN_ROLE)), AtomicConcept(SPOKES[0]))
    )
    axioms.add(RoleInclusion(Role(DOMAIN_ROLE), Role(SUPER_ROLE), negative=True))
    return frozenset(axioms)


def _extra_safe_concepts(count: int) -> list[str]:
    return [f"C{i}" for i in range(9, count + 1)]


def _extra_roles(count: int) -> list[str]:
    return [f"Q{i}" for i in range(4, count + 1)]


def generate(spec: GenSpec) -> PrioritizedKB:
    n, m, k = spec.assertion_count, spec.strata_count, spec.target_conflicts
    if m < 1:
        raise InfeasibleSpec("at least one stratum required")
    if n < 0 or k < 0:
        raise InfeasibleSpec("sizes must be non-negative")
    if k > 0 and m < 2:
        raise InfeasibleSpec("conflicts need at least two strata")
    tbox = template_tbox(spec.concepts, spec.roles)
    rng = random.Random(spec.seed)

    anchors = min(k, m - 1) if k else 0
    remaining = k - anchors
    rd_pairs = remaining // 10
    star_conflicts = remaining - rd_pairs
    star_sizes: list[int] = []
    while star_conflicts > 0:
        size = min(3, star_conflicts)
        star_sizes.append(size)
        star_conflicts -= size

    conflict_cost = 2 * anchors + 2 * rd_pairs + sum(1 + s for s in star_sizes)
    if conflict_cost > n:
        raise InfeasibleSpec(
            f"{k} conflicts need {conflict_cost} assertions, budget is {n}"
        )

    x_needed = anchors + rd_pairs + len(star_sizes)
    fillers_needed = n - conflict_cost > 0
    y_minimum = 2 if fillers_needed else 0
    if x_needed + len(_RESERVED_INDIVIDUALS) + y_minimum > spec.individuals:
        raise InfeasibleSpec(
            f"{x_needed + len(_RESERVED_INDIVIDUALS) + y_minimum} individuals "
            f"needed, vocabulary has {spec.individuals}"
        )
    x_pool = [f"x{i}" for i in range(1, x_needed + 1)]
    y_count = spec.individuals - x_needed - len(_RESERVED_INDIVIDUALS)
    bundle_pool = [f"y{i}" for i in range(1, y_count // 2 + 1)]
    misc_pool = [f"y{i}" for i in range(y_count // 2 + 1, y_count + 1)]

    entries: set[tuple[int, Assertion]] = set()

    def place(stratum: int, assertion: Assertion) -> bool:
        entry = (stratum, assertion)
        if entry in entries:
            return False
        entries.add(entry)
        return True

    def budget() -> int:
        return n - len(entries)

    x_iter = iter(x_pool)

    # Anchors: spoke in stratum 1, hub in stratum j, for j = 2, 3, ...
    anchor_individuals: list[tuple[str, int]] = []
    for j in range(2, 2 + anchors):
        x = next(x_iter)
        place(1, ConceptAssertion(SPOKES[0], x))
        place(j, ConceptAssertion(HUB, x))
        anchor_individuals.append((x, j))

    # Stars. The prefix selected for witnessing stays out of stratum 1 so
    # the first stratum's support composition does not drift with k.
    witnessed_star_target = round(k * _WITNESSED_STAR_SHARE)
    star_layout: list[tuple[str, int, list[int]]] = []  # (x, hub stratum, spoke strata)
    for star_index, size in enumerate(star_sizes):
        x = next(x_iter)
        witnessed = star_index < witnessed_star_target and m >= 3
        first_stratum = 2 if witnessed else 1
        hub_stratum = rng.randrange(first_stratum, m + 1)
        spoke_strata: list[int] = []
        rd_slot = (not witnessed) and rng.random() < 0.15
        for slot in range(size):
            stratum = rng.choice(
                [s for s in range(first_stratum, m + 1) if s != hub_stratum]
            )
            spoke_strata.append(stratum)
            if rd_slot and slot == size - 1:
                place(stratum, RoleAssertion(DOMAIN_ROLE, x, DOMAIN_SINK))
            else:
                place(stratum, ConceptAssertion(SPOKES[slot], x))
        place(hub_stratum, ConceptAssertion(HUB, x))
        star_layout.append((x, hub_stratum, spoke_strata))

    # RD/RW pair conflicts on a shared individual pair (role-level clash).
    for _ in range(rd_pairs):
        x = next(x_iter)
        first, second = rng.sample(range(1, m + 1), 2)
        place(first, RoleAssertion(DOMAIN_ROLE, x, DOMAIN_SINK))
        place(second, RoleAssertion(WITNESS_ROLE, x, DOMAIN_SINK))

    # Witness bundles: anchors always carry the full bundle in both of
    # their strata; witnessed stars answer the queries in every occupied
    # stratum but carry the conflict-free support atom only twice.
    conflict_free_target = max(12, n // 10)
    bundled_individuals = 0

    for x, j in anchor_individuals:
        if budget() >= 4:
            for stratum in (1, j):
                place(stratum, RoleAssertion(WITNESS_ROLE, x, QUERY_SINK))
                place(stratum, ConceptAssertion(PRIMARY_SAFE, x))
            bundled_individuals += 1

    for x, hub_stratum, spoke_strata in star_layout[:witnessed_star_target]:
        occupied = sorted({hub_stratum, *spoke_strata})
        fillers_reserve = 2 * max(
            0, conflict_free_target - bundled_individuals - witnessed_star_target
        )
        if budget() - (len(occupied) + 2) < fillers_reserve:
            break
        for stratum in occupied:
            place(stratum, RoleAssertion(WITNESS_ROLE, x, QUERY_SINK))
        place(hub_stratum, ConceptAssertion(PRIMARY_SAFE, x))
        place(spoke_strata[0], ConceptAssertion(PRIMARY_SAFE, x))
        bundled_individuals += 1

    # Bundle fillers: top the conflict-free support mass up to the target.
    bundle_index = 0
    while (
        bundled_individuals < conflict_free_target
        and budget() >= 2
        and bundle_pool
    ):
        y = bundle_pool[bundle_index % len(bundle_pool)]
        bundle_index += 1
        stratum = rng.randrange(1, m + 1)
        placed = place(stratum, RoleAssertion(WITNESS_ROLE, y, QUERY_SINK))
        placed |= place(stratum, ConceptAssertion(PRIMARY_SAFE, y))
        if placed:
            bundled_individuals += 1
        if bundle_index > 4 * conflict_free_target:
            break

    # Remaining budget: fillers outside the benchmark queries' reach.
    safe_concepts = _extra_safe_concepts(spec.concepts)
    plain_roles = _extra_roles(spec.roles)
    attempts = 0
    max_attempts = 60 * max(n, 1)
    while budget() > 0:
        attempts += 1
        if attempts > max_attempts:
            raise InfeasibleSpec(
                "filler vocabulary exhausted before reaching the assertion count"
            )
        if not misc_pool:
            raise InfeasibleSpec("no individuals left for filler assertions")
        stratum = rng.randrange(1, m + 1)
        y = rng.choice(misc_pool)
        pick = rng.random()
        if pick < 0.35 and safe_concepts:
            place(stratum, ConceptAssertion(rng.choice(safe_concepts), y))
        elif pick < 0.55:
            place(stratum, ConceptAssertion(rng.choice(CHAIN), y))
        elif pick < 0.90:
            if plain_roles and rng.random() < 0.5:
                other = rng.choice(misc_pool)
                place(stratum, RoleAssertion(rng.choice(plain_roles), y, other))
            else:
                place(stratum, RoleAssertion(SUPER_ROLE, y, SAFE_SINK))
        else:
            place(stratum, RoleAssertion(DOMAIN_ROLE, y, DOMAIN_SINK))

    layers: list[set[Assertion]] = [set() for _ in range(m)]
    for stratum, assertion in entries:
        layers[stratum - 1].add(assertion)
    return PrioritizedKB(
        tbox=tbox,
        strata=tuple(
            Stratum(i, frozenset(layer)) for i, layer in enumerate(layers, start=1)
        ),
    )


def ground_query_individual(spec: GenSpec) -> str:
    """The individual the default ground benchmark query asks about."""
    return "x1" if spec.target_conflicts > 0 else "y1"
