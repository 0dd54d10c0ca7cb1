from __future__ import annotations

import pytest

from conftest import ca, ra
from lite_repair.queries import (
    Atom,
    ConjunctiveQuery,
    Var,
    answer_profile,
    answers_from_assertions,
    canonical_form,
    evaluate,
    rewrite,
    saturate_named,
)

X, Y = Var("x"), Var("y")


def shapes(queries):
    return {tuple(sorted(a.render() for a in q.body)) for q in queries}


def test_rewrite_no_applicable_inclusion(ex_kb):
    query = ConjunctiveQuery((X,), (Atom("R", (X, "z")),))
    assert shapes(rewrite(query, ex_kb.tbox)) == {("R(?x, z)",)}


def test_rewrite_through_role_inclusion(ex_kb):
    query = ConjunctiveQuery((X,), (Atom("P", (X, "z")),))
    assert shapes(rewrite(query, ex_kb.tbox)) == {("P(?x, z)",), ("R(?x, z)",)}


def test_rewrite_through_concept_inclusion(ex_kb):
    query = ConjunctiveQuery((X,), (Atom("D", (X,)),))
    assert shapes(rewrite(query, ex_kb.tbox)) == {("D(?x)",), ("E(?x)",)}


def test_rewrite_existential_head_axiom():
    from lite_repair.model import (
        AtomicConcept,
        ConceptInclusion,
        ExistentialConcept,
        Role,
    )

    tbox = frozenset(
        {ConceptInclusion(AtomicConcept("A"), ExistentialConcept(Role("R")))}
    )
    # R(x, y) with y unshared rewrites to A(x); the shared-variable variant
    # must not.
    open_query = ConjunctiveQuery((X,), (Atom("R", (X, Y)),))
    assert ("A(?x)",) in shapes(rewrite(open_query, tbox))
    closed_query = ConjunctiveQuery((X, Y), (Atom("R", (X, Y)),))
    assert ("A(?x)",) not in shapes(rewrite(closed_query, tbox))


def test_rewrite_reduce_unlocks_specialization():
    from lite_repair.model import (
        AtomicConcept,
        ConceptInclusion,
        ExistentialConcept,
        Role,
    )

    tbox = frozenset(
        {ConceptInclusion(AtomicConcept("A"), ExistentialConcept(Role("R")))}
    )
    # q() :- R(x, y), R(z, y): unifying the atoms frees y, after which the
    # existential axiom applies; {A(a)} must then entail the query.
    query = ConjunctiveQuery(
        (), (Atom("R", (Var("x"), Y)), Atom("R", (Var("z"), Y)))
    )
    assert evaluate(query, tbox, {ca("A", "a")}) == {()}


def test_canonical_form_identifies_renamings():
    q1 = ConjunctiveQuery((X,), (Atom("R", (X, Y)),))
    q2 = ConjunctiveQuery((Var("u"),), (Atom("R", (Var("u"), Var("w"))),))
    assert canonical_form(q1) == canonical_form(q2)
    q3 = ConjunctiveQuery((X,), (Atom("R", (Y, X)),))
    assert canonical_form(q1) != canonical_form(q3)


def test_evaluate_fixture_strata(ex_kb, ex_query):
    assert evaluate(ex_query, ex_kb.tbox, ex_kb.strata[0].assertions) == {("a",)}
    assert evaluate(ex_query, ex_kb.tbox, ex_kb.strata[4].assertions) == {
        ("e",),
        ("c",),
    }
    assert evaluate(ex_query, ex_kb.tbox, frozenset()) == frozenset()


def test_evaluate_boolean_query(ex_kb):
    yes = ConjunctiveQuery((), (Atom("A", ("a",)),))
    assert evaluate(yes, ex_kb.tbox, ex_kb.strata[0].assertions) == {()}
    assert evaluate(yes, ex_kb.tbox, ex_kb.strata[1].assertions) == frozenset()


def test_evaluate_monotone_in_abox(ex_kb, ex_query):
    small = ex_kb.strata[0].assertions
    large = small | ex_kb.strata[4].assertions
    assert evaluate(ex_query, ex_kb.tbox, small) <= evaluate(
        ex_query, ex_kb.tbox, large
    )


def test_profile_matches_worked_values(ex_kb, ex_query):
    profile = answer_profile(ex_query, ex_kb)
    assert profile.answers == (
        frozenset({("a",)}),
        frozenset({("b",)}),
        frozenset({("a",)}),
        frozenset({("e",)}),
        frozenset({("e",), ("c",)}),
    )
    assert profile.support_sets == (
        frozenset({ca("A", "a")}),
        frozenset({ca("A", "b")}),
        frozenset({ca("B", "a")}),
        frozenset({ca("E", "e")}),
        frozenset({ca("A", "e"), ca("A", "c")}),
    )


def test_profile_supports_have_no_role_assertions(ex_kb, ex_query):
    profile = answer_profile(ex_query, ex_kb)
    for support in profile.support_sets:
        assert all(a.render()[0].isupper() for a in support)
        assert all(not hasattr(a, "object") for a in support)


def test_profile_empty_answers_empty_support(ex_kb):
    query = ConjunctiveQuery((X,), (Atom("D", (X,)),))
    profile = answer_profile(query, ex_kb)
    assert profile.answers[0] == frozenset()
    assert profile.support_sets[0] == frozenset()


def test_instantiation_mode_supports_are_query_instances(ex_kb, ex_query):
    profile = answer_profile(ex_query, ex_kb, mode="instantiation")
    assert profile.support_sets[0] == {ra("R", "a", "z")}
    assert profile.support_sets[4] == {ra("R", "e", "z"), ra("R", "c", "z")}
    # instantiation supports instantiate exactly the query's atoms
    for support in profile.support_sets:
        for assertion in support:
            assert assertion.render().startswith("R(")


def test_instantiation_mode_includes_entailed_instances(ex_kb):
    query = ConjunctiveQuery((X,), (Atom("P", (X, "z")),))
    profile = answer_profile(query, ex_kb, mode="instantiation")
    # P(a, z) is entailed through R <= P even though only R(a, z) is asserted
    assert ra("P", "a", "z") in profile.support_sets[0]


def test_saturate_named(ex_kb):
    saturated = saturate_named(ex_kb.tbox, {ra("R", "a", "z"), ca("E", "e")})
    assert ra("P", "a", "z") in saturated
    assert ca("D", "e") in saturated


def test_answers_from_assertions_examples(ex_kb, ex_query):
    profile = answer_profile(ex_query, ex_kb)
    assert answers_from_assertions(profile, {ca("A", "a"), ca("A", "b")}) == {
        ("a",),
        ("b",),
    }
    assert answers_from_assertions(profile, frozenset()) == frozenset()
    assert answers_from_assertions(
        profile, {ca("A", "a"), ca("A", "b"), ca("E", "e"), ca("A", "c")}
    ) == {("a",), ("b",), ("e",), ("c",)}


def test_answers_from_assertions_rejects_foreign_assertions(ex_kb, ex_query):
    profile = answer_profile(ex_query, ex_kb)
    with pytest.raises(ValueError):
        answers_from_assertions(profile, {ca("D", "d")})


def test_unbound_head_variable_rejected():
    with pytest.raises(ValueError):
        ConjunctiveQuery((X,), (Atom("A", ("a",)),))


def test_query_kinds(ex_query):
    assert ex_query.kind == "instance"
    assert ConjunctiveQuery((), (Atom("A", ("a",)),)).kind == "ground"
    assert (
        ConjunctiveQuery((X,), (Atom("R", (X, Y)), Atom("A", (X,)))).kind
        == "conjunctive"
    )
