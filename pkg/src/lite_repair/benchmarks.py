"""Benchmark harness: repair-strategy grids over generated KBs.

A bench cell fixes (query kind, strategy, pipeline) on one generated KB and
records retrieval metrics, answer productivity and the median wall time of
the repair computation itself. Query evaluation and profile construction
happen outside the timed region for both pipelines, and the TBox closure is
precomputed, so the timings compare exactly the repair work: the after-query
pipeline repairs the per-stratum answer supports, the before-query pipeline
repairs the full assertion base.

Cells are independent; timed runs execute one at a time (plain sequential
loop) so measurements never overlap.

Productivity is answer-count based for both pipelines: retained answers
over all answers of the query across strata with consistency ignored. That
baseline is one of several defensible readings, so the CSV echoes it as a
comment.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, TextIO

from lite_repair.generator import (
    GenSpec,
    PRIMARY_SAFE,
    QUERY_SINK,
    SUPER_ROLE,
    WITNESS_ROLE,
    generate,
    ground_query_individual,
)
from lite_repair.metrics import ClassificationMetrics, metrics, productivity
from lite_repair.queries import (
    Atom,
    ConjunctiveQuery,
    Var,
    answer_profile,
    answers_from_assertions,
    evaluate,
)
from lite_repair.repair import (
    PIPELINES,
    STRATEGIES,
    linear_repair,
    nd_repair,
    pi_repair,
    strata_union,
)
from lite_repair.reasoner import negative_closure

QUERY_KINDS = ("instance", "ground", "conjunctive")

CSV_HEADER = (
    "conflict_size",
    "strata",
    "query_kind",
    "strategy",
    "pipeline",
    "precision",
    "recall",
    "f_measure",
    "productivity",
    "median_ms",
)

_STRATEGY_FUNCTIONS = {
    "pi": pi_repair,
    "linear": linear_repair,
    "nd": nd_repair,
}


@dataclass(frozen=True)
class BenchCell:
    conflict_size: int
    strata: int
    query_kind: str
    strategy: str
    pipeline: str
    quality: ClassificationMetrics
    productivity: float
    productivity_defined: bool
    median_ms: float
    answer_count: int


def default_queries(spec: GenSpec) -> dict[str, tuple[ConjunctiveQuery, str]]:
    """The three benchmark query kinds over the generator's vocabulary.

    The ground query runs with instantiation supports: a boolean answer
    carries no individuals, so the about-answers reading would give it an
    empty support everywhere.
    """
    x, y = Var("x"), Var("y")
    return {
        "instance": (
            ConjunctiveQuery((x,), (Atom(WITNESS_ROLE, (x, QUERY_SINK)),)),
            "about-answers",
        ),
        "ground": (
            ConjunctiveQuery(
                (), (Atom(SUPER_ROLE, (ground_query_individual(spec), QUERY_SINK)),)
            ),
            "instantiation",
        ),
        "conjunctive": (
            ConjunctiveQuery(
                (x,),
                (Atom(WITNESS_ROLE, (x, y)), Atom(PRIMARY_SAFE, (x,))),
            ),
            "about-answers",
        ),
    }


def bench(
    spec: GenSpec,
    queries: Optional[Mapping[str, tuple[ConjunctiveQuery, str]]] = None,
    strategies: Iterable[str] = STRATEGIES,
    pipelines: Iterable[str] = PIPELINES,
    repetitions: int = 3,
) -> list[BenchCell]:
    if repetitions < 3:
        raise ValueError("at least 3 repetitions required for a stable median")
    if queries is None:
        queries = default_queries(spec)
    kb = generate(spec)
    closure = negative_closure(kb.tbox)
    ps_layers = kb.layers()
    ps_universe = kb.union()

    cells: list[BenchCell] = []
    for kind, (query, mode) in queries.items():
        profile = answer_profile(query, kb, mode)
        qps_layers = profile.layers()
        qps_universe = strata_union(profile.support_sets)
        baseline_answers = profile.raw_answers
        for strategy in strategies:
            run = _STRATEGY_FUNCTIONS[strategy]
            for pipeline in pipelines:
                layers = qps_layers if pipeline == "after-query" else ps_layers
                times = []
                repair = None
                for _ in range(repetitions):
                    start = time.perf_counter()
                    repair = run(closure, layers, pipeline=pipeline)
                    times.append((time.perf_counter() - start) * 1000.0)
                if pipeline == "after-query":
                    answers = answers_from_assertions(profile, repair.assertions)
                    universe = qps_universe
                else:
                    answers = evaluate(query, kb.tbox, repair.assertions)
                    universe = ps_universe
                quality = metrics(closure, universe, repair.assertions)
                ratio, defined = productivity(answers, baseline_answers)
                cells.append(
                    BenchCell(
                        conflict_size=spec.target_conflicts,
                        strata=spec.strata_count,
                        query_kind=kind,
                        strategy=strategy,
                        pipeline=pipeline,
                        quality=quality,
                        productivity=ratio,
                        productivity_defined=defined,
                        median_ms=statistics.median(times),
                        answer_count=len(answers),
                    )
                )
    return cells


def write_csv(
    cells: Iterable[BenchCell], stream: TextIO, specs: Iterable[GenSpec] = ()
) -> None:
    """Fixed-header CSV; the generating specs are echoed as comments."""
    for spec in specs:
        stream.write(
            f"# spec: assertions={spec.assertion_count} strata={spec.strata_count}"
            f" conflicts={spec.target_conflicts} concepts={spec.concepts}"
            f" roles={spec.roles} individuals={spec.individuals} seed={spec.seed}\n"
        )
    stream.write(
        "# productivity = retained answers / all answers ignoring consistency\n"
    )
    stream.write(",".join(CSV_HEADER) + "\n")
    for cell in cells:
        stream.write(
            f"{cell.conflict_size},{cell.strata},{cell.query_kind},"
            f"{cell.strategy},{cell.pipeline},"
            f"{cell.quality.precision:.6f},{cell.quality.recall:.6f},"
            f"{cell.quality.f_measure:.6f},{cell.productivity:.6f},"
            f"{cell.median_ms:.3f}\n"
        )
