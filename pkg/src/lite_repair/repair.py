"""Preferred-repair strategies over stratified assertion sets.

All three strategies hinge on the consistency rank: the largest prefix of
layers whose union is still consistent with the TBox. The rank is located
by binary search over the prefix boundary, so a run spends at most
ceil(log2(m)) + 1 consistency tests on an m-layer input (one up-front test
decides the globally consistent case).

The same engine serves two pipelines: `before-query` repairs the raw
layers of a knowledge base, `after-query` repairs the per-stratum answer
supports produced by `queries.answer_profile`, which is typically a far
smaller input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from lite_repair.model import Assertion, PrioritizedKB, StratifiedAssertions
from lite_repair.queries import (
    AnswerProfile,
    AnswerTuple,
    ConjunctiveQuery,
    answer_profile,
    answers_from_assertions,
    evaluate,
)
from lite_repair.reasoner import ClosureOrTBox, as_closure, free_set, is_consistent

STRATEGIES = ("pi", "linear", "nd")
PIPELINES = ("after-query", "before-query")


@dataclass(frozen=True)
class Repair:
    """A consistent assertion subset selected by one strategy.

    `checks_count` counts the consistency tests spent producing it, which
    is what the runtime comparisons measure.
    """

    assertions: frozenset[Assertion]
    strategy: str
    pipeline: str
    rank: int
    checks_count: int


class _Counter:
    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0


def _rank_search(closure, layers: StratifiedAssertions, counter: _Counter) -> int:
    """Largest k with layers 1..k consistent; 0 when even layer 1 is not."""

    def consistent_prefix(k: int) -> bool:
        counter.count += 1
        return is_consistent(closure, layers.union_up_to(k))

    m = layers.layer_count
    if m == 0:
        return 0
    if consistent_prefix(m):
        return m
    low, high = 0, m - 1
    while low < high:
        mid = (low + high + 1) // 2
        if consistent_prefix(mid):
            low = mid
        else:
            high = mid - 1
    return low


def cns_rank(tbox_or_closure: ClosureOrTBox, layers: StratifiedAssertions) -> int:
    """The consistency rank of the layered input."""
    rank, _ = cns_rank_stats(tbox_or_closure, layers)
    return rank


def cns_rank_stats(
    tbox_or_closure: ClosureOrTBox, layers: StratifiedAssertions
) -> tuple[int, int]:
    """The rank together with the number of consistency tests spent."""
    closure = as_closure(tbox_or_closure)
    counter = _Counter()
    rank = _rank_search(closure, layers, counter)
    return rank, counter.count


def pi_repair(
    tbox_or_closure: ClosureOrTBox,
    layers: StratifiedAssertions,
    pipeline: str = "before-query",
) -> Repair:
    """Keep exactly the layers up to the consistency rank."""
    closure = as_closure(tbox_or_closure)
    counter = _Counter()
    rank = _rank_search(closure, layers, counter)
    return Repair(
        assertions=layers.union_up_to(rank),
        strategy="pi",
        pipeline=pipeline,
        rank=rank,
        checks_count=counter.count,
    )


def linear_repair(
    tbox_or_closure: ClosureOrTBox,
    layers: StratifiedAssertions,
    pipeline: str = "before-query",
    on_accumulate: Optional[Callable[[frozenset[Assertion]], None]] = None,
) -> Repair:
    """Extend the rank prefix with every later layer that fits whole.

    Layers past the rank are taken or dropped in order, each accepted only
    if the accumulated set stays consistent. `on_accumulate` is invoked
    with the accumulated set after every iteration (instrumentation for
    the loop-invariant test).
    """
    closure = as_closure(tbox_or_closure)
    counter = _Counter()
    rank = _rank_search(closure, layers, counter)
    accumulated = set(layers.union_up_to(rank))
    for i in range(rank + 1, layers.layer_count + 1):
        candidate = accumulated | layers.layers[i - 1]
        counter.count += 1
        if is_consistent(closure, candidate):
            accumulated = candidate
        if on_accumulate is not None:
            on_accumulate(frozenset(accumulated))
    return Repair(
        assertions=frozenset(accumulated),
        strategy="linear",
        pipeline=pipeline,
        rank=rank,
        checks_count=counter.count,
    )


def nd_repair(
    tbox_or_closure: ClosureOrTBox,
    layers: StratifiedAssertions,
    pipeline: str = "before-query",
) -> Repair:
    """Union of the conflict-free parts of every prefix.

    Prefixes up to the rank are consistent, hence entirely free, so they
    contribute exactly the rank prefix; only the prefixes beyond it need a
    conflict computation.
    """
    closure = as_closure(tbox_or_closure)
    counter = _Counter()
    rank = _rank_search(closure, layers, counter)
    result = set(layers.union_up_to(rank))
    for k in range(rank + 1, layers.layer_count + 1):
        result |= free_set(closure, layers.union_up_to(k))
    return Repair(
        assertions=frozenset(result),
        strategy="nd",
        pipeline=pipeline,
        rank=rank,
        checks_count=counter.count,
    )


def nd_prefix_table(
    tbox_or_closure: ClosureOrTBox, layers: StratifiedAssertions
) -> tuple[frozenset[Assertion], ...]:
    """Cumulative free-prefix sets, one entry per prefix length 1..m.

    Computed straight from the definition, with no rank shortcut; the last
    entry therefore equals `nd_repair(...)`, which is asserted in tests.
    """
    closure = as_closure(tbox_or_closure)
    accumulated: set[Assertion] = set()
    table = []
    for k in range(1, layers.layer_count + 1):
        accumulated |= free_set(closure, layers.union_up_to(k))
        table.append(frozenset(accumulated))
    return tuple(table)


_STRATEGY_FUNCTIONS = {
    "pi": pi_repair,
    "linear": linear_repair,
    "nd": nd_repair,
}

_PIPELINE_ALIASES = {
    "after": "after-query",
    "after-query": "after-query",
    "before": "before-query",
    "before-query": "before-query",
}


def repair_answers(
    query: ConjunctiveQuery,
    kb: PrioritizedKB,
    strategy: str,
    pipeline: str = "after-query",
    mode: str = "about-answers",
    profile: Optional[AnswerProfile] = None,
) -> tuple[Repair, frozenset[AnswerTuple]]:
    """Run one strategy in one pipeline and return the repair plus answers.

    After querying, the strategy runs on the per-stratum answer supports
    and the surviving answers are those keeping at least one support; the
    baseline pipeline repairs the raw layers first and evaluates the query
    over the repair. A prebuilt `profile` may be passed to avoid
    re-evaluating the query per stratum.
    """
    if strategy not in _STRATEGY_FUNCTIONS:
        raise ValueError(f"unknown strategy {strategy!r}")
    pipeline = _PIPELINE_ALIASES.get(pipeline, pipeline)
    if pipeline not in PIPELINES:
        raise ValueError(f"unknown pipeline {pipeline!r}")
    run = _STRATEGY_FUNCTIONS[strategy]
    if pipeline == "after-query":
        if profile is None:
            profile = answer_profile(query, kb, mode)
        repair = run(kb.tbox, profile.layers(), pipeline=pipeline)
        answers = answers_from_assertions(profile, repair.assertions)
    else:
        repair = run(kb.tbox, kb.layers(), pipeline=pipeline)
        answers = evaluate(query, kb.tbox, repair.assertions)
    return repair, answers


def strata_union(layers: Iterable[frozenset[Assertion]]) -> frozenset[Assertion]:
    merged: set[Assertion] = set()
    for layer in layers:
        merged |= layer
    return frozenset(merged)
