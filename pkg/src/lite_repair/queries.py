"""Conjunctive queries: rewriting, certain-answer evaluation, answer profiles.

Evaluation is rewriting-based: the input query is compiled, using the
positive TBox inclusions only, into a finite union of conjunctive queries
whose plain evaluation over any assertion set yields exactly the certain
answers over that set plus the TBox. The rewriting loop alternates two
moves until no new query (up to variable renaming) appears:

* atom specialization — an atom is replaced through one inclusion read
  right to left; `exists R` on the left of an inclusion turns a concept
  atom into a role atom with a fresh, unshared variable; role atoms are
  rewritten through role inclusions, and through `B <= exists R` when the
  non-matched position holds an unshared variable;
* atom unification — two body atoms with the same predicate are unified
  and merged, which can free up further specializations.

Answers range over named individuals only; a boolean query answers with the
empty tuple. Per-stratum evaluation of a query over a prioritized KB yields
the answer profile: the stratum answers S_i together with the assertions
supporting them, in one of two support readings (see `answer_profile`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

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
    TBoxAxiom,
)

SUPPORT_MODES = ("about-answers", "instantiation")


@dataclass(frozen=True)
class Var:
    name: str

    def render(self) -> str:
        return f"?{self.name}"


Term = Union[Var, str]  # individuals are plain strings


def render_term(term: Term) -> str:
    return term.render() if isinstance(term, Var) else term


@dataclass(frozen=True)
class Atom:
    """A body atom: concept atom (arity 1) or role atom (arity 2)."""

    pred: str
    args: tuple[Term, ...]

    def render(self) -> str:
        inner = ", ".join(render_term(t) for t in self.args)
        return f"{self.pred}({inner})"

    def variables(self) -> tuple[Var, ...]:
        return tuple(t for t in self.args if isinstance(t, Var))


@dataclass(frozen=True)
class ConjunctiveQuery:
    """head(x1..xk) :- atom, atom, ...

    User-written queries carry only variables in the head; rewriting may
    internally specialize head positions to individuals.
    """

    head: tuple[Term, ...]
    body: tuple[Atom, ...]

    def __post_init__(self) -> None:
        body_vars = {v for atom in self.body for v in atom.variables()}
        for term in self.head:
            if isinstance(term, Var) and term not in body_vars:
                raise ValueError(f"unbound head variable {term.render()}")

    @property
    def kind(self) -> str:
        has_vars = any(
            isinstance(t, Var) for atom in self.body for t in atom.args
        ) or any(isinstance(t, Var) for t in self.head)
        if not has_vars:
            return "ground"
        if len(self.body) == 1 and any(isinstance(t, Var) for t in self.head):
            return "instance"
        return "conjunctive"

    def render(self) -> str:
        head_inner = ", ".join(render_term(t) for t in self.head)
        body = ", ".join(atom.render() for atom in self.body)
        return f"q({head_inner}) :- {body}"


AnswerTuple = tuple  # of individual names; () means "true" for boolean queries


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------


def _positive_inclusions(tbox: Iterable[TBoxAxiom]):
    concept_incl: list[tuple[BasicConcept, BasicConcept]] = []
    role_incl: list[tuple[Role, Role]] = []
    for axiom in tbox:
        if isinstance(axiom, ConceptInclusion) and not axiom.negative:
            concept_incl.append((axiom.lhs, axiom.rhs))
        elif isinstance(axiom, RoleInclusion) and not axiom.negative:
            role_incl.append((axiom.lhs, axiom.rhs))
            role_incl.append((axiom.lhs.inverse(), axiom.rhs.inverse()))
    return concept_incl, role_incl


def _role_atom(role: Role, first: Term, second: Term) -> Atom:
    if role.inverted:
        return Atom(role.name, (second, first))
    return Atom(role.name, (first, second))


def _concept_atom(concept: BasicConcept, term: Term, fresh: Var) -> Atom:
    if isinstance(concept, AtomicConcept):
        return Atom(concept.name, (term,))
    return _role_atom(concept.role, term, fresh)


def _unshared(term: Term, query: ConjunctiveQuery) -> bool:
    """A variable occurring exactly once in the body and nowhere in the head."""
    if not isinstance(term, Var):
        return False
    if term in query.head:
        return False
    occurrences = sum(
        1 for atom in query.body for t in atom.args if t == term
    )
    return occurrences == 1


def _substitute(query: ConjunctiveQuery, sigma: Mapping[Var, Term]) -> ConjunctiveQuery:
    def walk(term: Term) -> Term:
        while isinstance(term, Var) and term in sigma:
            term = sigma[term]
        return term

    body = tuple(
        dict.fromkeys(
            Atom(a.pred, tuple(walk(t) for t in a.args)) for a in query.body
        )
    )
    head = tuple(walk(t) for t in query.head)
    return ConjunctiveQuery(head, body)


def _unify(left: Atom, right: Atom) -> Mapping[Var, Term] | None:
    if left.pred != right.pred or len(left.args) != len(right.args):
        return None
    sigma: dict[Var, Term] = {}

    def walk(term: Term) -> Term:
        while isinstance(term, Var) and term in sigma:
            term = sigma[term]
        return term

    for a, b in zip(left.args, right.args):
        a, b = walk(a), walk(b)
        if a == b:
            continue
        if isinstance(a, Var):
            sigma[a] = b
        elif isinstance(b, Var):
            sigma[b] = a
        else:
            return None
    return sigma


_MAX_CANONICAL_VARS = 8


def canonical_form(query: ConjunctiveQuery) -> str:
    """A renaming-invariant key: equal queries get equal keys.

    Head variables are numbered by first occurrence in the head; the
    remaining (existential) variables are renamed by exhausting all
    bijections and keeping the least rendering. Queries are small here, so
    the factorial search is cheap; beyond 8 existential variables the
    query is out of this package's scope.
    """
    head_names: dict[Var, str] = {}
    for term in query.head:
        if isinstance(term, Var) and term not in head_names:
            head_names[term] = f"H{len(head_names)}"
    existential = []
    for atom in query.body:
        for term in atom.args:
            if isinstance(term, Var) and term not in head_names and term not in existential:
                existential.append(term)
    if len(existential) > _MAX_CANONICAL_VARS:
        raise ValueError(
            f"query with {len(existential)} existential variables is not supported"
        )

    def rendered(naming: Mapping[Var, str]) -> str:
        def nm(term: Term) -> str:
            if isinstance(term, Var):
                return naming[term]
            return f"'{term}"

        atoms = sorted(
            f"{a.pred}({','.join(nm(t) for t in a.args)})" for a in query.body
        )
        head = ",".join(
            head_names[t] if isinstance(t, Var) else f"'{t}" for t in query.head
        )
        return f"{head}<-" + "&".join(atoms)

    if not existential:
        return rendered(head_names)
    best = None
    labels = [f"E{i}" for i in range(len(existential))]
    for perm in itertools.permutations(labels):
        naming = dict(head_names)
        naming.update(zip(existential, perm))
        candidate = rendered(naming)
        if best is None or candidate < best:
            best = candidate
    return best


def rewrite(query: ConjunctiveQuery, tbox: Iterable[TBoxAxiom]) -> frozenset[ConjunctiveQuery]:
    """Compile the query into its certain-answer-complete union of queries."""
    concept_incl, role_incl = _positive_inclusions(tbox)
    fresh_counter = itertools.count()

    def fresh() -> Var:
        return Var(f"_r{next(fresh_counter)}")

    seen: dict[str, ConjunctiveQuery] = {canonical_form(query): query}
    frontier = [query]
    while frontier:
        current = frontier.pop()
        produced: list[ConjunctiveQuery] = []

        for i, atom in enumerate(current.body):
            replacements: list[Atom] = []
            if len(atom.args) == 1:
                target = AtomicConcept(atom.pred)
                for lhs, rhs in concept_incl:
                    if rhs == target:
                        replacements.append(_concept_atom(lhs, atom.args[0], fresh()))
            else:
                first, second = atom.args
                for lhs, rhs in concept_incl:
                    if rhs == ExistentialConcept(Role(atom.pred)) and _unshared(second, current):
                        replacements.append(_concept_atom(lhs, first, fresh()))
                    if rhs == ExistentialConcept(Role(atom.pred, True)) and _unshared(first, current):
                        replacements.append(_concept_atom(lhs, second, fresh()))
                for sub, sup in role_incl:
                    if sup == Role(atom.pred):
                        replacements.append(_role_atom(sub, first, second))
                    elif sup == Role(atom.pred, True):
                        replacements.append(_role_atom(sub, second, first))
            for replacement in replacements:
                body = tuple(
                    dict.fromkeys(
                        current.body[:i] + (replacement,) + current.body[i + 1 :]
                    )
                )
                produced.append(ConjunctiveQuery(current.head, body))

        # Unifying two body atoms merges them (the substituted atoms become
        # equal and collapse), which can unlock further specializations.
        for i, j in itertools.combinations(range(len(current.body)), 2):
            sigma = _unify(current.body[i], current.body[j])
            if sigma is not None:
                produced.append(_substitute(current, sigma))

        for candidate in produced:
            key = canonical_form(candidate)
            if key not in seen:
                seen[key] = candidate
                frontier.append(candidate)
    return frozenset(seen.values())


# ---------------------------------------------------------------------------
# Direct evaluation
# ---------------------------------------------------------------------------


@dataclass
class _Index:
    """Lookup structures over one assertion set."""

    concept_members: dict = field(default_factory=dict)  # name -> set[str]
    role_pairs: dict = field(default_factory=dict)  # name -> set[(str, str)]
    by_subject: dict = field(default_factory=dict)  # name -> {subj -> set[obj]}
    by_object: dict = field(default_factory=dict)  # name -> {obj -> set[subj]}

    @classmethod
    def build(cls, assertions: Iterable[Assertion]) -> "_Index":
        index = cls()
        for assertion in assertions:
            if isinstance(assertion, ConceptAssertion):
                index.concept_members.setdefault(assertion.concept, set()).add(
                    assertion.individual
                )
            else:
                pair = (assertion.subject, assertion.object)
                index.role_pairs.setdefault(assertion.role, set()).add(pair)
                index.by_subject.setdefault(assertion.role, {}).setdefault(
                    assertion.subject, set()
                ).add(assertion.object)
                index.by_object.setdefault(assertion.role, {}).setdefault(
                    assertion.object, set()
                ).add(assertion.subject)
        return index


def _match_query(query: ConjunctiveQuery, index: _Index, first_only: bool = False):
    """All substitutions of the body into the index; yields head tuples."""
    results: set[AnswerTuple] = set()

    def resolve(term: Term, subst: Mapping[Var, str]) -> Term:
        if isinstance(term, Var):
            return subst.get(term, term)
        return term

    # Cheapest-first: concept atoms and atoms with constants tend to bind less.
    body = sorted(
        query.body,
        key=lambda a: sum(1 for t in a.args if isinstance(t, Var)),
    )

    def extend(i: int, subst: dict) -> bool:
        if i == len(body):
            results.add(
                tuple(resolve(t, subst) for t in query.head)
            )
            return first_only
        atom = body[i]
        if len(atom.args) == 1:
            term = resolve(atom.args[0], subst)
            members = index.concept_members.get(atom.pred, set())
            if isinstance(term, Var):
                for individual in members:
                    subst[term] = individual
                    if extend(i + 1, subst):
                        del subst[term]
                        return True
                    del subst[term]
            elif term in members:
                if extend(i + 1, subst):
                    return True
            return False
        first, second = (resolve(t, subst) for t in atom.args)
        first_var = isinstance(first, Var)
        second_var = isinstance(second, Var)
        if not first_var and not second_var:
            if (first, second) in index.role_pairs.get(atom.pred, set()):
                if extend(i + 1, subst):
                    return True
        elif not first_var:
            for obj in index.by_subject.get(atom.pred, {}).get(first, set()):
                subst[second] = obj
                if extend(i + 1, subst):
                    del subst[second]
                    return True
                del subst[second]
        elif not second_var:
            for subj in index.by_object.get(atom.pred, {}).get(second, set()):
                subst[first] = subj
                if extend(i + 1, subst):
                    del subst[first]
                    return True
                del subst[first]
        else:
            for subj, obj in index.role_pairs.get(atom.pred, set()):
                if first == second and subj != obj:
                    continue
                subst[first] = subj
                subst[second] = obj
                if extend(i + 1, subst):
                    del subst[first]
                    if second in subst:
                        del subst[second]
                    return True
                del subst[second]
                if first in subst:
                    del subst[first]
        return False

    extend(0, {})
    return results


def _match_union(queries: Iterable[ConjunctiveQuery], index: _Index) -> frozenset[AnswerTuple]:
    answers: set[AnswerTuple] = set()
    for query in queries:
        boolean = not query.head
        if boolean and answers:
            break
        answers |= _match_query(query, index, first_only=boolean)
    return frozenset(answers)


def evaluate(
    query: ConjunctiveQuery,
    tbox: Iterable[TBoxAxiom],
    assertions: Iterable[Assertion],
) -> frozenset[AnswerTuple]:
    """Certain answers of the query over the TBox plus the assertion set."""
    rewritten = rewrite(query, tbox)
    return _match_union(rewritten, _Index.build(assertions))


# ---------------------------------------------------------------------------
# Named-individual saturation (for the instantiation support mode)
# ---------------------------------------------------------------------------


def saturate_named(
    tbox: Iterable[TBoxAxiom], assertions: Iterable[Assertion]
) -> frozenset[Assertion]:
    """All atomic assertions over named individuals entailed by the input.

    Positive inclusions are applied forward; existential heads are skipped
    because they never produce assertions about named individuals.
    """
    concept_incl, role_incl = _positive_inclusions(tbox)
    facts: set[Assertion] = set(assertions)
    changed = True
    while changed:
        changed = False
        members: dict[BasicConcept, set[str]] = {}
        for fact in facts:
            if isinstance(fact, ConceptAssertion):
                members.setdefault(AtomicConcept(fact.concept), set()).add(
                    fact.individual
                )
            else:
                role = Role(fact.role)
                members.setdefault(ExistentialConcept(role), set()).add(fact.subject)
                members.setdefault(ExistentialConcept(role.inverse()), set()).add(
                    fact.object
                )
        for lhs, rhs in concept_incl:
            if not isinstance(rhs, AtomicConcept):
                continue
            for individual in members.get(lhs, set()):
                derived = ConceptAssertion(rhs.name, individual)
                if derived not in facts:
                    facts.add(derived)
                    changed = True
        for sub, sup in role_incl:
            for fact in list(facts):
                if not isinstance(fact, RoleAssertion):
                    continue
                pair = None
                if sub == Role(fact.role):
                    pair = (fact.subject, fact.object)
                elif sub == Role(fact.role, True):
                    pair = (fact.object, fact.subject)
                if pair is None:
                    continue
                if sup.inverted:
                    derived = RoleAssertion(sup.name, pair[1], pair[0])
                else:
                    derived = RoleAssertion(sup.name, pair[0], pair[1])
                if derived not in facts:
                    facts.add(derived)
                    changed = True
    return frozenset(facts)


# ---------------------------------------------------------------------------
# Answer profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnswerProfile:
    """Per-stratum answers and the assertions supporting them.

    `supports[i]` maps each answer tuple of stratum i+1 to the assertions
    backing it there; `support_sets` collapses those maps into one
    assertion set per stratum, which is what the repair engine consumes.
    """

    query: ConjunctiveQuery
    mode: str
    answers: tuple[frozenset[AnswerTuple], ...]
    supports: tuple[Mapping[AnswerTuple, frozenset[Assertion]], ...]

    @property
    def support_sets(self) -> tuple[frozenset[Assertion], ...]:
        out = []
        for per_answer in self.supports:
            merged: set[Assertion] = set()
            for assertions in per_answer.values():
                merged |= assertions
            out.append(frozenset(merged))
        return tuple(out)

    @property
    def raw_answers(self) -> frozenset[AnswerTuple]:
        """All answers across strata, consistency ignored."""
        merged: set[AnswerTuple] = set()
        for answers in self.answers:
            merged |= answers
        return frozenset(merged)

    def layers(self) -> StratifiedAssertions:
        return StratifiedAssertions(self.support_sets)


def _ground_image(atom: Atom, subst: Mapping[Var, str]) -> Assertion:
    args = [subst[t] if isinstance(t, Var) else t for t in atom.args]
    if len(args) == 1:
        return ConceptAssertion(atom.pred, args[0])
    return RoleAssertion(atom.pred, args[0], args[1])


def _instantiation_supports(
    query: ConjunctiveQuery, saturated_index: _Index
) -> dict[AnswerTuple, frozenset[Assertion]]:
    """Ground images of the query body under every named witnessing match."""
    supports: dict[AnswerTuple, set[Assertion]] = {}

    def extend(i: int, subst: dict) -> None:
        if i == len(query.body):
            answer = tuple(
                subst[t] if isinstance(t, Var) else t for t in query.head
            )
            image = frozenset(_ground_image(a, subst) for a in query.body)
            supports.setdefault(answer, set()).update(image)
            return
        atom = query.body[i]
        if len(atom.args) == 1:
            (term,) = atom.args
            value = subst.get(term, term) if isinstance(term, Var) else term
            members = saturated_index.concept_members.get(atom.pred, set())
            if isinstance(value, Var):
                for individual in members:
                    subst[term] = individual
                    extend(i + 1, subst)
                    del subst[term]
            elif value in members:
                extend(i + 1, subst)
            return
        t1, t2 = atom.args
        for subj, obj in saturated_index.role_pairs.get(atom.pred, set()):
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
    return {answer: frozenset(image) for answer, image in supports.items()}


def answer_profile(
    query: ConjunctiveQuery, kb: PrioritizedKB, mode: str = "about-answers"
) -> AnswerProfile:
    """Evaluate the query stratum by stratum and collect answer supports.

    Two support readings exist:

    * ``about-answers`` (default): an answer's support in stratum i is the
      set of concept assertions of that stratum naming any individual of
      the answer tuple;
    * ``instantiation``: an answer's support is the set of ground instances
      of the query's own body atoms under its witnessing matches, where the
      match targets are the entailed atoms of the stratum over named
      individuals. Answers witnessed only through anonymous individuals
      get no support in this mode.
    """
    if mode not in SUPPORT_MODES:
        raise ValueError(f"unknown support mode {mode!r}")
    rewritten = rewrite(query, kb.tbox)
    answers_per_stratum: list[frozenset[AnswerTuple]] = []
    supports_per_stratum: list[dict[AnswerTuple, frozenset[Assertion]]] = []
    for stratum in kb.strata:
        index = _Index.build(stratum.assertions)
        answers = _match_union(rewritten, index)
        answers_per_stratum.append(answers)
        if mode == "about-answers":
            support: dict[AnswerTuple, frozenset[Assertion]] = {}
            for answer in answers:
                named = set(answer)
                support[answer] = frozenset(
                    a
                    for a in stratum.assertions
                    if isinstance(a, ConceptAssertion) and a.individual in named
                )
            supports_per_stratum.append(support)
        else:
            saturated = saturate_named(kb.tbox, stratum.assertions)
            matches = _instantiation_supports(query, _Index.build(saturated))
            supports_per_stratum.append(
                {answer: image for answer, image in matches.items() if answer in answers}
            )
    return AnswerProfile(
        query=query,
        mode=mode,
        answers=tuple(answers_per_stratum),
        supports=tuple(supports_per_stratum),
    )


def answers_from_assertions(
    profile: AnswerProfile, retained: Iterable[Assertion]
) -> frozenset[AnswerTuple]:
    """Answers with at least one support assertion, in any stratum, retained."""
    retained = frozenset(retained)
    everything: set[Assertion] = set()
    for support_set in profile.support_sets:
        everything |= support_set
    if not retained <= everything:
        stray = next(iter(retained - everything))
        raise ValueError(
            f"retained assertion {stray.render()} is outside the profile's supports"
        )
    kept: set[AnswerTuple] = set()
    for per_answer in profile.supports:
        for answer, support in per_answer.items():
            if support & retained:
                kept.add(answer)
    return frozenset(kept)
