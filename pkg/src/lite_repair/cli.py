"""Command-line front end.

Exit codes: 0 success, 1 domain error (inconsistent stratum at load,
infeasible generator spec, ...), 2 usage or option errors. Errors print a
single `error: <code>: ...` line on stderr and nothing on stdout; all
regular output is deterministic except the explicitly labelled timing
lines.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from lite_repair.benchmarks import (
    QUERY_KINDS,
    bench,
    default_queries,
    write_csv,
)
from lite_repair.generator import GenSpec, InfeasibleSpec, generate
from lite_repair.metrics import metrics, productivity
from lite_repair.model import PrioritizedKB
from lite_repair.queries import answer_profile
from lite_repair.repair import (
    PIPELINES,
    STRATEGIES,
    cns_rank_stats,
    repair_answers,
    strata_union,
)
from lite_repair.reasoner import conflicts, free_set, negative_closure
from lite_repair.textio import (
    KbValidationError,
    ParseError,
    RunReport,
    emit_report,
    parse_kb,
    parse_query,
    serialize_kb,
    serialize_query,
)


def _load_kb(path: str) -> PrioritizedKB:
    return parse_kb(Path(path).read_text())


def _load_query(path: str):
    return parse_query(Path(path).read_text())


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _query_layers(args, kb):
    """The layered input selected by the flags: q_Ps with a query, else P_s."""
    if getattr(args, "query", None):
        query = _load_query(args.query)
        profile = answer_profile(query, kb, args.mode)
        return profile.layers(), ("query", serialize_query(query)), ("mode", args.mode)
    return kb.layers(), None, None


def _info_header(args, extra=()):
    info = [("kb", args.kb)]
    info.extend(item for item in extra if item is not None)
    return info


def cmd_check(args) -> int:
    kb = _load_kb(args.kb)
    closure = negative_closure(kb.tbox)
    info = _info_header(args, [("strata", str(kb.layer_count))])
    for stratum in kb.strata:
        info.append(
            (f"stratum {stratum.index}", f"ok ({len(stratum.assertions)} assertions)")
        )
    global_conflicts = conflicts(closure, kb.union())
    info.append(("global", "INCONSISTENT" if global_conflicts else "consistent"))
    report = RunReport(
        command="check",
        info=tuple(info),
        conflict_sections=(
            (("conflicts", global_conflicts),) if global_conflicts else ()
        ),
    )
    _write(emit_report(report), args.out)
    return 0


def cmd_conflicts(args) -> int:
    kb = _load_kb(args.kb)
    layers, query_info, mode_info = _query_layers(args, kb)
    found = conflicts(kb.tbox, layers.union())
    report = RunReport(
        command="conflicts",
        info=tuple(_info_header(args, [query_info, mode_info])),
        conflict_sections=(("conflicts", found),),
    )
    _write(emit_report(report), args.out)
    return 0


def cmd_free(args) -> int:
    kb = _load_kb(args.kb)
    layers, query_info, mode_info = _query_layers(args, kb)
    free = free_set(kb.tbox, layers.union())
    report = RunReport(
        command="free",
        info=tuple(_info_header(args, [query_info, mode_info])),
        assertion_sections=(("free", free),),
    )
    _write(emit_report(report), args.out)
    return 0


def cmd_rank(args) -> int:
    kb = _load_kb(args.kb)
    layers, query_info, mode_info = _query_layers(args, kb)
    rank, checks = cns_rank_stats(kb.tbox, layers)
    report = RunReport(
        command="rank",
        info=tuple(
            _info_header(
                args,
                [
                    query_info,
                    mode_info,
                    ("strata", str(layers.layer_count)),
                    ("rank", str(rank)),
                    ("consistency-checks", str(checks)),
                ],
            )
        ),
    )
    _write(emit_report(report), args.out)
    return 0


def cmd_repair(args) -> int:
    kb = _load_kb(args.kb)
    query = _load_query(args.query)
    closure = negative_closure(kb.tbox)
    profile = answer_profile(query, kb, args.mode)
    strategies = STRATEGIES if args.strategy == "all" else (args.strategy,)
    pipeline = "after-query" if args.pipeline == "after" else "before-query"
    blocks = []
    for strategy in strategies:
        start = time.perf_counter()
        repair, answers = repair_answers(
            query, kb, strategy, pipeline, args.mode, profile=profile
        )
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        if pipeline == "after-query":
            universe = strata_union(profile.support_sets)
        else:
            universe = kb.union()
        quality = metrics(closure, universe, repair.assertions)
        ratio, defined = productivity(answers, profile.raw_answers)
        info = _info_header(
            args,
            [
                ("query", serialize_query(query)),
                ("mode", args.mode),
                ("pipeline", pipeline),
                ("strategy", strategy),
                ("strata", str(kb.layer_count)),
                ("rank", str(repair.rank)),
                ("consistency-checks", str(repair.checks_count)),
                (
                    "metrics",
                    f"CR={quality.cr} CNR={quality.cnr} "
                    f"IR={quality.ir} INR={quality.inr}",
                ),
                ("precision", f"{quality.precision:.6f}"),
                ("recall", f"{quality.recall:.6f}"),
                ("f-measure", f"{quality.f_measure:.6f}"),
                (
                    "productivity",
                    f"{ratio:.6f}" + ("" if defined else " (no answers at all)"),
                ),
            ],
        )
        report = RunReport(
            command="repair",
            info=tuple(info),
            assertion_sections=(("repair", repair.assertions),),
            answer_sections=(("answers", answers),),
            timings=None if args.no_time else (("repair-time", elapsed_ms),),
        )
        blocks.append(emit_report(report))
    _write("\n".join(blocks), args.out)
    return 0


def cmd_query(args) -> int:
    kb = _load_kb(args.kb)
    query = _load_query(args.query)
    profile = answer_profile(query, kb, args.mode)
    info = _info_header(
        args,
        [
            ("query", serialize_query(query)),
            ("mode", args.mode),
            ("kind", query.kind),
            ("strata", str(kb.layer_count)),
        ],
    )
    answer_sections = []
    assertion_sections = []
    for i, (answers, support) in enumerate(
        zip(profile.answers, profile.support_sets), start=1
    ):
        answer_sections.append((f"answers in stratum {i}", answers))
        assertion_sections.append((f"support in stratum {i}", support))
    answer_sections.append(("all answers (consistency ignored)", profile.raw_answers))
    report = RunReport(
        command="query",
        info=tuple(info),
        assertion_sections=tuple(assertion_sections),
        answer_sections=tuple(answer_sections),
    )
    _write(emit_report(report), args.out)
    return 0


def cmd_generate(args) -> int:
    spec = GenSpec(
        assertion_count=args.assertions,
        strata_count=args.strata,
        target_conflicts=args.conflicts,
        concepts=args.concepts,
        roles=args.roles,
        individuals=args.individuals,
        seed=args.seed,
    )
    kb = generate(spec)
    text = serialize_kb(kb)
    if args.out:
        Path(args.out).write_text(text)
        sys.stdout.write(
            f"command: generate\nwrote: {args.out}\n"
            f"strata: {kb.layer_count}\n"
            f"assertions: {sum(len(s.assertions) for s in kb.strata)}\n"
        )
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    conflict_sizes = [int(piece) for piece in args.conflicts.split(",")]
    kinds = args.queries.split(",")
    for kind in kinds:
        if kind not in QUERY_KINDS:
            raise ValueError(f"unknown query kind {kind!r}")
    strategies = STRATEGIES if args.strategy == "all" else (args.strategy,)
    pipelines = (
        PIPELINES
        if args.pipeline == "all"
        else ("after-query" if args.pipeline == "after" else "before-query",)
    )
    cells = []
    specs = []
    for size in conflict_sizes:
        spec = GenSpec(
            assertion_count=args.assertions,
            strata_count=args.strata,
            target_conflicts=size,
            concepts=args.concepts,
            roles=args.roles,
            individuals=args.individuals,
            seed=args.seed,
        )
        specs.append(spec)
        queries = {
            kind: spec_queries
            for kind, spec_queries in default_queries(spec).items()
            if kind in kinds
        }
        cells.extend(
            bench(
                spec,
                queries=queries,
                strategies=strategies,
                pipelines=pipelines,
                repetitions=args.repetitions,
            )
        )
    if args.csv:
        with open(args.csv, "w") as handle:
            write_csv(cells, handle, specs)
        sys.stdout.write(f"command: bench\nwrote: {args.csv}\ncells: {len(cells)}\n")
    else:
        write_csv(cells, sys.stdout, specs)
    return 0


def _add_mode(parser) -> None:
    parser.add_argument(
        "--mode",
        choices=("about-answers", "instantiation"),
        default="about-answers",
        help="how answer supports are collected (default: about-answers)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lite-repair",
        description=(
            "Query prioritized, possibly inconsistent DL-Lite knowledge "
            "bases with repair-based answer cleaning."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate a KB and list its conflicts")
    p_check.add_argument("--kb", required=True)
    p_check.add_argument("--out")
    p_check.set_defaults(func=cmd_check)

    for name, func, section_help in (
        ("conflicts", cmd_conflicts, "minimal conflicts of the KB or of the answer supports"),
        ("free", cmd_free, "assertions outside every conflict"),
        ("rank", cmd_rank, "largest consistent stratum prefix"),
    ):
        p = sub.add_parser(name, help=section_help)
        p.add_argument("--kb", required=True)
        p.add_argument("--query")
        _add_mode(p)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p_repair = sub.add_parser("repair", help="repair and answer a query")
    p_repair.add_argument("--kb", required=True)
    p_repair.add_argument("--query", required=True)
    p_repair.add_argument(
        "--strategy", choices=STRATEGIES + ("all",), default="all"
    )
    p_repair.add_argument("--pipeline", choices=("after", "before"), default="after")
    _add_mode(p_repair)
    p_repair.add_argument("--out")
    p_repair.add_argument(
        "--no-time", action="store_true", help="omit the timing line"
    )
    p_repair.set_defaults(func=cmd_repair)

    p_query = sub.add_parser("query", help="per-stratum answers and supports")
    p_query.add_argument("--kb", required=True)
    p_query.add_argument("--query", required=True)
    _add_mode(p_query)
    p_query.add_argument("--out")
    p_query.set_defaults(func=cmd_query)

    p_gen = sub.add_parser("generate", help="emit a synthetic stratified KB")
    p_gen.add_argument("--assertions", type=int, required=True)
    p_gen.add_argument("--strata", type=int, required=True)
    p_gen.add_argument("--conflicts", type=int, required=True)
    p_gen.add_argument("--concepts", type=int, default=8)
    p_gen.add_argument("--roles", type=int, default=3)
    p_gen.add_argument("--individuals", type=int, default=400)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("bench", help="run a repair benchmark grid")
    p_bench.add_argument("--assertions", type=int, default=1000)
    p_bench.add_argument("--strata", type=int, default=5)
    p_bench.add_argument(
        "--conflicts", default="50,200,500", help="comma-separated conflict counts"
    )
    p_bench.add_argument("--concepts", type=int, default=8)
    p_bench.add_argument("--roles", type=int, default=3)
    p_bench.add_argument("--individuals", type=int, default=400)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--repetitions", type=int, default=3)
    p_bench.add_argument(
        "--queries", default="instance,ground,conjunctive", help="comma-separated kinds"
    )
    p_bench.add_argument("--strategy", choices=STRATEGIES + ("all",), default="all")
    p_bench.add_argument(
        "--pipeline", choices=("after", "before", "all"), default="all"
    )
    p_bench.add_argument("--csv")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, KbValidationError, InfeasibleSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: file-not-found: {exc.filename}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
