"""Inconsistency-tolerant query answering over prioritized DL-Lite knowledge bases.

The package answers conjunctive queries over stratified assertion bases that
may contradict their ontology, by repairing either the whole base (before
querying) or just the assertions supporting the query's answers (after
querying), with three strategies built on a logarithmic consistency-rank
search.
"""

from lite_repair.model import (
    Assertion,
    AtomicConcept,
    BasicConcept,
    ConceptAssertion,
    ConceptInclusion,
    ExistentialConcept,
    PrioritizedKB,
    Role,
    RoleAssertion,
    RoleInclusion,
    StratifiedAssertions,
    Stratum,
    TBoxAxiom,
)
from lite_repair.reasoner import (
    NegativeClosure,
    conflicts,
    free_set,
    incoherent_concepts,
    is_consistent,
    negative_closure,
)
from lite_repair.queries import (
    AnswerProfile,
    Atom,
    ConjunctiveQuery,
    Var,
    answer_profile,
    answers_from_assertions,
    evaluate,
    rewrite,
)
from lite_repair.repair import (
    Repair,
    cns_rank,
    linear_repair,
    nd_prefix_table,
    nd_repair,
    pi_repair,
    repair_answers,
)

__all__ = [
    "Assertion",
    "AtomicConcept",
    "BasicConcept",
    "ConceptAssertion",
    "ConceptInclusion",
    "ExistentialConcept",
    "PrioritizedKB",
    "Role",
    "RoleAssertion",
    "RoleInclusion",
    "StratifiedAssertions",
    "Stratum",
    "TBoxAxiom",
    "NegativeClosure",
    "conflicts",
    "free_set",
    "incoherent_concepts",
    "is_consistent",
    "negative_closure",
    "AnswerProfile",
    "Atom",
    "ConjunctiveQuery",
    "Var",
    "answer_profile",
    "answers_from_assertions",
    "evaluate",
    "rewrite",
    "Repair",
    "cns_rank",
    "linear_repair",
    "nd_prefix_table",
    "nd_repair",
    "pi_repair",
    "repair_answers",
]
