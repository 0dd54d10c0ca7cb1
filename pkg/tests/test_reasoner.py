from __future__ import annotations

from conftest import ca, ra
from lite_repair.model import (
    AtomicConcept,
    ConceptInclusion,
    ExistentialConcept,
    Role,
    RoleInclusion,
)
from lite_repair.reasoner import (
    check_strata,
    conflict_involved,
    conflicts,
    free_set,
    incoherent_concepts,
    is_consistent,
    negative_closure,
)


def A(name):
    return AtomicConcept(name)


def test_closure_of_the_fixture_tbox(ex_kb):
    closure = negative_closure(ex_kb.tbox)
    pairs = {p for p in closure.concept_disjoint}
    assert frozenset({A("A"), A("B")}) in pairs
    assert frozenset({A("A"), A("E")}) in pairs
    # nothing else: D and P carry no negative constraints
    assert len(pairs) == 2
    assert closure.role_disjoint == frozenset()


def test_closure_empty_tbox():
    closure = negative_closure(frozenset())
    assert closure.concept_disjoint == frozenset()
    assert closure.role_disjoint == frozenset()


def test_closure_one_propagation_step():
    tbox = frozenset(
        {
            ConceptInclusion(A("A"), A("B")),
            ConceptInclusion(A("B"), A("C"), negative=True),
        }
    )
    closure = negative_closure(tbox)
    assert frozenset({A("A"), A("C")}) in closure.concept_disjoint
    assert frozenset({A("B"), A("C")}) in closure.concept_disjoint


def test_closure_role_inclusion_propagates_to_domains():
    tbox = frozenset(
        {
            RoleInclusion(Role("R"), Role("P")),
            ConceptInclusion(ExistentialConcept(Role("P")), A("C"), negative=True),
        }
    )
    closure = negative_closure(tbox)
    assert frozenset({ExistentialConcept(Role("R")), A("C")}) in closure.concept_disjoint


def test_closure_role_disjointness_propagates_through_inclusions():
    tbox = frozenset(
        {
            RoleInclusion(Role("R"), Role("P")),
            RoleInclusion(Role("S"), Role("P"), negative=True),
        }
    )
    closure = negative_closure(tbox)
    assert closure.roles_disjoint(Role("S"), Role("R"))
    assert closure.roles_disjoint(Role("S", True), Role("R", True))


def test_closure_is_a_fixpoint(ex_kb):
    closure = negative_closure(ex_kb.tbox)
    again = negative_closure(ex_kb.tbox)
    assert closure == again


def test_consistency_on_fixture(ex_kb):
    closure = negative_closure(ex_kb.tbox)
    assert not is_consistent(closure, {ca("A", "a"), ca("B", "a")})
    assert is_consistent(closure, frozenset())
    assert is_consistent(closure, ex_kb.strata[0].assertions)


def test_conflicts_on_fixture_profiles(ex_kb, ex_query):
    from lite_repair.queries import answer_profile

    closure = negative_closure(ex_kb.tbox)
    qps = answer_profile(ex_query, ex_kb).layers()
    assert conflicts(closure, qps.union()) == {
        frozenset({ca("A", "a"), ca("B", "a")}),
        frozenset({ca("A", "e"), ca("E", "e")}),
    }
    assert conflicts(closure, ex_kb.union()) == {
        frozenset({ca("A", "a"), ca("B", "a")}),
        frozenset({ca("A", "e"), ca("E", "e")}),
        frozenset({ca("A", "c"), ca("B", "c")}),
    }
    assert conflicts(closure, frozenset()) == frozenset()


def test_free_sets_on_fixture(ex_kb, ex_query):
    from lite_repair.queries import answer_profile

    closure = negative_closure(ex_kb.tbox)
    qps = answer_profile(ex_query, ex_kb).layers()
    assert free_set(closure, qps.union()) == {ca("A", "b"), ca("A", "c")}
    assert free_set(closure, ex_kb.union()) == {
        ra("R", "a", "z"),
        ra("R", "b", "z"),
        ca("A", "b"),
        ra("R", "e", "z"),
        ra("R", "c", "z"),
    }
    consistent = {ca("A", "a"), ca("D", "d")}
    assert free_set(closure, consistent) == consistent


def test_free_and_involved_partition(ex_kb):
    closure = negative_closure(ex_kb.tbox)
    universe = ex_kb.union()
    free = free_set(closure, universe)
    involved = conflict_involved(closure, universe)
    assert free | involved == universe
    assert not free & involved


def test_incoherent_concepts():
    assert incoherent_concepts(frozenset()) == frozenset()
    tbox = frozenset(
        {
            ConceptInclusion(A("A"), A("B")),
            ConceptInclusion(A("A"), A("B"), negative=True),
        }
    )
    assert incoherent_concepts(tbox) == {A("A")}


def test_incoherent_fixture_tbox_is_coherent(ex_kb):
    assert incoherent_concepts(ex_kb.tbox) == frozenset()


def test_singleton_conflict_from_incoherent_concept():
    tbox = frozenset(
        {
            ConceptInclusion(A("A"), A("B")),
            ConceptInclusion(A("A"), A("B"), negative=True),
        }
    )
    closure = negative_closure(tbox)
    assert conflicts(closure, {ca("A", "a"), ca("B", "b")}) == {
        frozenset({ca("A", "a")})
    }
    # the pair with the poisoned assertion is not minimal
    assert not is_consistent(closure, {ca("A", "a")})


def test_self_inverse_role_disjointness():
    tbox = frozenset({RoleInclusion(Role("R"), Role("R", True), negative=True)})
    closure = negative_closure(tbox)
    # R(a, a) instantiates R and R- on the same pair
    assert conflicts(closure, {ra("R", "a", "a")}) == {frozenset({ra("R", "a", "a")})}
    assert conflicts(closure, {ra("R", "a", "b"), ra("R", "b", "a")}) == {
        frozenset({ra("R", "a", "b"), ra("R", "b", "a")})
    }
    assert is_consistent(closure, {ra("R", "a", "b")})


def test_empty_role_empties_its_domain():
    tbox = frozenset(
        {
            RoleInclusion(Role("R"), Role("R"), negative=True),
            ConceptInclusion(A("A"), ExistentialConcept(Role("R"))),
        }
    )
    closure = negative_closure(tbox)
    assert not is_consistent(closure, {ca("A", "a")})
    assert conflicts(closure, {ca("A", "a")}) == {frozenset({ca("A", "a")})}


def test_check_strata_names_offender(ex_kb):
    closure = negative_closure(ex_kb.tbox)
    bad_layers = [
        frozenset({ca("A", "a")}),
        frozenset({ca("A", "b"), ca("B", "b")}),
    ]
    findings = check_strata(closure, bad_layers)
    assert findings == [(2, frozenset({ca("A", "b"), ca("B", "b")}))]
