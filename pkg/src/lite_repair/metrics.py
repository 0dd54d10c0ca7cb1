"""Retrieval-style quality measures for repairs.

Ground truth is fixed by the pre-repair universe: an assertion is
conflict-involved if it belongs to some minimal conflict of the universe,
conflict-free otherwise. A repair then retrieves a subset, and the four
counts classify the universe:

    CR   conflict-free and retained          (correctly retrieved)
    IR   conflict-involved but retained      (noise)
    CNR  conflict-free but dropped           (silence)
    INR  conflict-involved and dropped       (correctly suppressed)

Precision CR/(CR+IR), recall CR/(CR+CNR), and their harmonic mean follow;
ratios with an empty denominator are reported as 0 with the corresponding
`*_defined` flag cleared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from lite_repair.model import Assertion, PrioritizedKB
from lite_repair.queries import AnswerProfile, ConjunctiveQuery, evaluate
from lite_repair.reasoner import ClosureOrTBox, as_closure, conflict_involved


@dataclass(frozen=True)
class ClassificationMetrics:
    cr: int
    cnr: int
    ir: int
    inr: int
    precision: float
    recall: float
    f_measure: float
    precision_defined: bool
    recall_defined: bool
    f_defined: bool


def metrics(
    tbox_or_closure: ClosureOrTBox,
    universe: Iterable[Assertion],
    retained: Iterable[Assertion],
) -> ClassificationMetrics:
    universe = frozenset(universe)
    retained = frozenset(retained)
    if not retained <= universe:
        stray = next(iter(retained - universe))
        raise ValueError(f"retained assertion {stray.render()} outside the universe")
    closure = as_closure(tbox_or_closure)
    involved = conflict_involved(closure, universe)
    conflict_free = universe - involved

    cr = len(retained & conflict_free)
    ir = len(retained & involved)
    cnr = len(conflict_free - retained)
    inr = len(involved - retained)

    precision_defined = (cr + ir) > 0
    recall_defined = (cr + cnr) > 0
    precision = cr / (cr + ir) if precision_defined else 0.0
    recall = cr / (cr + cnr) if recall_defined else 0.0
    f_defined = (precision + recall) > 0
    f_measure = (
        2 * precision * recall / (precision + recall) if f_defined else 0.0
    )
    return ClassificationMetrics(
        cr=cr,
        cnr=cnr,
        ir=ir,
        inr=inr,
        precision=precision,
        recall=recall,
        f_measure=f_measure,
        precision_defined=precision_defined,
        recall_defined=recall_defined,
        f_defined=f_defined,
    )


def productivity(
    retained_answers: Iterable[tuple], baseline_answers: Iterable[tuple]
) -> tuple[float, bool]:
    """Share of the consistency-ignoring answers that survived the repair.

    Returns (ratio, defined); an empty baseline yields (0.0, False).
    """
    baseline = frozenset(baseline_answers)
    if not baseline:
        return 0.0, False
    return len(frozenset(retained_answers)) / len(baseline), True


def productivity_of(
    source: Union[AnswerProfile, PrioritizedKB],
    retained_answers: Iterable[tuple],
    query: ConjunctiveQuery | None = None,
) -> tuple[float, bool]:
    """Productivity against a profile's raw answers or a whole KB.

    When given a KB, the baseline is the query evaluated over the union of
    all strata, consistency ignored; `query` is then required.
    """
    if isinstance(source, AnswerProfile):
        baseline = source.raw_answers
    else:
        if query is None:
            raise ValueError("a query is required to take a baseline from a KB")
        baseline = evaluate(query, source.tbox, source.union())
    return productivity(retained_answers, baseline)
