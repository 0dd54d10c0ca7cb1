"""Reading and writing knowledge bases, queries and result reports.

File grammar (normative, bit-exact):

* KB files (`.dlkb`): a `[tbox]` section of axiom lines followed by
  `[stratum 1]`, `[stratum 2]`, ... sections of assertion lines.
  Axioms::

      LHS <= RHS          positive concept inclusion
      LHS <= !RHS         negative concept inclusion
      role R <= S         positive role inclusion
      role R- <= !S       negative role inclusion

  where a concept expression is `NAME` or `exists ROLE`, and a role
  expression is `NAME` optionally followed by `-` (a single inverse; `--`
  is rejected). Assertions are `NAME(ind)` or `NAME(ind, ind)`.

* Query files (`.dlq`): one rule `q(?x, ...) :- atom, atom, ...` with
  variables prefixed by `?`; a `q()` head makes a boolean query.

* `%` starts a comment running to the end of the line; identifiers match
  `[A-Za-z_][A-Za-z0-9_]*`; concept, role and individual names may not
  overlap within one document.

Loading a KB also verifies that each stratum on its own is consistent
with the TBox, and reports the first offending stratum together with a
witnessing conflict.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

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
    Stratum,
    TBoxAxiom,
    sorted_assertions,
)
from lite_repair.queries import Atom, ConjunctiveQuery, Var
from lite_repair.reasoner import check_strata, negative_closure


class ParseError(ValueError):
    """Syntax or namespace error, located by line and column (1-based)."""

    def __init__(self, code: str, message: str, line: int, column: int):
        super().__init__(f"{code}: {message} (line {line}, column {column})")
        self.code = code
        self.line = line
        self.column = column


class KbValidationError(ValueError):
    """A stratum is inconsistent with the TBox on its own."""

    def __init__(self, stratum: int, conflict: frozenset):
        rendered = "{" + ", ".join(sorted(a.render() for a in conflict)) + "}"
        super().__init__(
            f"inconsistent-stratum: stratum {stratum} conflicts with the "
            f"ontology, witness {rendered}"
        )
        self.code = "inconsistent-stratum"
        self.stratum = stratum
        self.conflict = conflict


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<qvar>\?[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow><=)"
    r"|(?P<turnstile>:-)"
    r"|(?P<sym>[!\-(),]))"
)


def _tokenize(text: str, line_no: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            column = pos + (len(text[pos:]) - len(stripped)) + 1
            raise ParseError(
                "syntax-error", f"unexpected character {stripped[0]!r}", line_no, column
            )
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append((kind, value, match.start(kind) + 1))
        pos = match.end()
    return tokens


class _Cursor:
    def __init__(self, tokens: list, line_no: int):
        self.tokens = tokens
        self.line_no = line_no
        self.pos = 0

    def peek(self) -> Optional[tuple[str, str, int]]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self) -> tuple[str, str, int]:
        token = self.peek()
        if token is None:
            last_col = self.tokens[-1][2] if self.tokens else 1
            raise ParseError("syntax-error", "unexpected end of line", self.line_no, last_col)
        self.pos += 1
        return token

    def expect(self, kind: str, value: Optional[str] = None) -> tuple[str, str, int]:
        token = self.next()
        if token[0] != kind or (value is not None and token[1] != value):
            wanted = value if value is not None else kind
            raise ParseError(
                "syntax-error", f"expected {wanted!r}, found {token[1]!r}", self.line_no, token[2]
            )
        return token

    def done(self) -> None:
        token = self.peek()
        if token is not None:
            raise ParseError(
                "syntax-error", f"unexpected {token[1]!r}", self.line_no, token[2]
            )


@dataclass
class _Namespaces:
    kinds: dict = field(default_factory=dict)  # name -> "concept" | "role" | "individual"

    def register(self, name: str, kind: str, line: int, column: int) -> None:
        known = self.kinds.get(name)
        if known is None:
            self.kinds[name] = kind
        elif known != kind:
            raise ParseError(
                "namespace-clash",
                f"{name!r} already used as a {known}, now as a {kind}",
                line,
                column,
            )


_SECTION_RE = re.compile(r"^\[(tbox|stratum\s+(\d+))\]$")


def _strip_comment(line: str) -> str:
    cut = line.find("%")
    if cut >= 0:
        line = line[:cut]
    return line.rstrip()


def _parse_role(cursor: _Cursor, names: _Namespaces) -> Role:
    kind, value, column = cursor.expect("id")
    names.register(value, "role", cursor.line_no, column)
    inverted = False
    token = cursor.peek()
    if token is not None and token[0] == "sym" and token[1] == "-":
        cursor.next()
        inverted = True
        trailing = cursor.peek()
        if trailing is not None and trailing[0] == "sym" and trailing[1] == "-":
            raise ParseError(
                "syntax-error", "nested inverse is not allowed", cursor.line_no, trailing[2]
            )
    return Role(value, inverted)


def _parse_concept(cursor: _Cursor, names: _Namespaces) -> BasicConcept:
    kind, value, column = cursor.expect("id")
    if value == "exists":
        return ExistentialConcept(_parse_role(cursor, names))
    names.register(value, "concept", cursor.line_no, column)
    return AtomicConcept(value)


def _parse_axiom(cursor: _Cursor, names: _Namespaces) -> TBoxAxiom:
    token = cursor.peek()
    if token is not None and token[0] == "id" and token[1] == "role":
        cursor.next()
        lhs = _parse_role(cursor, names)
        cursor.expect("arrow")
        negative = False
        nxt = cursor.peek()
        if nxt is not None and nxt[0] == "sym" and nxt[1] == "!":
            cursor.next()
            negative = True
        rhs = _parse_role(cursor, names)
        cursor.done()
        return RoleInclusion(lhs, rhs, negative)
    lhs = _parse_concept(cursor, names)
    cursor.expect("arrow")
    negative = False
    nxt = cursor.peek()
    if nxt is not None and nxt[0] == "sym" and nxt[1] == "!":
        cursor.next()
        negative = True
    rhs = _parse_concept(cursor, names)
    cursor.done()
    return ConceptInclusion(lhs, rhs, negative)


def _parse_assertion(cursor: _Cursor, names: _Namespaces) -> Assertion:
    kind, pred, pred_col = cursor.expect("id")
    cursor.expect("sym", "(")
    _, first, first_col = cursor.expect("id")
    names.register(first, "individual", cursor.line_no, first_col)
    token = cursor.next()
    if token[0] == "sym" and token[1] == ")":
        names.register(pred, "concept", cursor.line_no, pred_col)
        cursor.done()
        return ConceptAssertion(pred, first)
    if token[0] == "sym" and token[1] == ",":
        _, second, second_col = cursor.expect("id")
        names.register(second, "individual", cursor.line_no, second_col)
        cursor.expect("sym", ")")
        names.register(pred, "role", cursor.line_no, pred_col)
        cursor.done()
        return RoleAssertion(pred, first, second)
    raise ParseError(
        "syntax-error", f"expected ',' or ')', found {token[1]!r}", cursor.line_no, token[2]
    )


def parse_kb(text: str) -> PrioritizedKB:
    """Parse and validate a KB document."""
    names = _Namespaces()
    tbox: set[TBoxAxiom] = set()
    strata: list[set[Assertion]] = []
    section: Optional[str] = None  # None | "tbox" | "stratum"
    saw_tbox = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        stripped = line.strip()
        header = _SECTION_RE.match(stripped)
        if header is not None:
            if header.group(1) == "tbox":
                if saw_tbox:
                    raise ParseError("syntax-error", "duplicate [tbox] section", line_no, 1)
                saw_tbox = True
                section = "tbox"
            else:
                index = int(header.group(2))
                if not saw_tbox:
                    raise ParseError(
                        "syntax-error", "[tbox] must come before strata", line_no, 1
                    )
                if index != len(strata) + 1:
                    raise ParseError(
                        "syntax-error",
                        f"expected [stratum {len(strata) + 1}], found [stratum {index}]",
                        line_no,
                        1,
                    )
                strata.append(set())
                section = "stratum"
            continue
        cursor = _Cursor(_tokenize(line, line_no), line_no)
        if section == "tbox":
            tbox.add(_parse_axiom(cursor, names))
        elif section == "stratum":
            strata[-1].add(_parse_assertion(cursor, names))
        else:
            raise ParseError(
                "syntax-error", "content before any section header", line_no, 1
            )

    if not saw_tbox:
        raise ParseError("syntax-error", "missing [tbox] section", 1, 1)
    if not strata:
        raise ParseError("syntax-error", "at least one [stratum i] section required", 1, 1)

    kb = PrioritizedKB(
        tbox=frozenset(tbox),
        strata=tuple(
            Stratum(i, frozenset(layer)) for i, layer in enumerate(strata, start=1)
        ),
    )
    closure = negative_closure(kb.tbox)
    findings = check_strata(closure, (s.assertions for s in kb.strata))
    if findings:
        stratum, conflict = findings[0]
        raise KbValidationError(stratum, conflict)
    return kb


def parse_query(text: str) -> ConjunctiveQuery:
    """Parse a query document (one rule, comments and blank lines allowed)."""
    rule_line = None
    rule_line_no = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if rule_line is not None:
            raise ParseError("syntax-error", "more than one query rule", line_no, 1)
        rule_line = line
        rule_line_no = line_no
    if rule_line is None:
        raise ParseError("syntax-error", "empty query", 1, 1)

    names = _Namespaces()
    cursor = _Cursor(_tokenize(rule_line, rule_line_no), rule_line_no)
    cursor.expect("id")  # head predicate name, conventionally q
    cursor.expect("sym", "(")
    head: list[Var] = []
    token = cursor.next()
    if not (token[0] == "sym" and token[1] == ")"):
        while True:
            if token[0] != "qvar":
                raise ParseError(
                    "syntax-error",
                    f"head terms must be ?variables, found {token[1]!r}",
                    cursor.line_no,
                    token[2],
                )
            head.append(Var(token[1][1:]))
            token = cursor.next()
            if token[0] == "sym" and token[1] == ")":
                break
            if not (token[0] == "sym" and token[1] == ","):
                raise ParseError(
                    "syntax-error",
                    f"expected ',' or ')', found {token[1]!r}",
                    cursor.line_no,
                    token[2],
                )
            token = cursor.next()
    cursor.expect("turnstile")

    atoms: list[Atom] = []
    while True:
        _, pred, pred_col = cursor.expect("id")
        cursor.expect("sym", "(")
        args = []
        token = cursor.next()
        while True:
            if token[0] == "qvar":
                args.append(Var(token[1][1:]))
            elif token[0] == "id":
                names.register(token[1], "individual", cursor.line_no, token[2])
                args.append(token[1])
            else:
                raise ParseError(
                    "syntax-error", f"bad term {token[1]!r}", cursor.line_no, token[2]
                )
            token = cursor.next()
            if token[0] == "sym" and token[1] == ")":
                break
            if not (token[0] == "sym" and token[1] == ","):
                raise ParseError(
                    "syntax-error",
                    f"expected ',' or ')', found {token[1]!r}",
                    cursor.line_no,
                    token[2],
                )
            token = cursor.next()
        if len(args) == 1:
            names.register(pred, "concept", cursor.line_no, pred_col)
        elif len(args) == 2:
            names.register(pred, "role", cursor.line_no, pred_col)
        else:
            raise ParseError(
                "syntax-error",
                f"atoms take one or two terms, {pred!r} got {len(args)}",
                cursor.line_no,
                pred_col,
            )
        atoms.append(Atom(pred, tuple(args)))
        nxt = cursor.peek()
        if nxt is None:
            break
        cursor.expect("sym", ",")

    body_vars = {v for atom in atoms for v in atom.variables()}
    for var in head:
        if var not in body_vars:
            raise ParseError(
                "unbound-head-variable",
                f"head variable {var.render()} does not occur in the body",
                rule_line_no,
                1,
            )
    return ConjunctiveQuery(tuple(head), tuple(atoms))


def serialize_kb(kb: PrioritizedKB) -> str:
    """Canonical text for a KB: sections in order, lines sorted."""
    lines = ["[tbox]"]
    lines.extend(sorted(axiom.render() for axiom in kb.tbox))
    for stratum in kb.strata:
        lines.append("")
        lines.append(f"[stratum {stratum.index}]")
        lines.extend(a.render() for a in sorted_assertions(stratum.assertions))
    return "\n".join(lines) + "\n"


def serialize_query(query: ConjunctiveQuery) -> str:
    return query.render()


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunReport:
    """A structured result: ordered key/value info plus typed sections.

    Rendering is deterministic byte for byte, except that timing entries
    (naturally nondeterministic) are segregated under `timings` so callers
    can omit them.
    """

    command: str
    info: tuple[tuple[str, str], ...] = ()
    assertion_sections: tuple[tuple[str, frozenset], ...] = ()
    answer_sections: tuple[tuple[str, frozenset], ...] = ()
    conflict_sections: tuple[tuple[str, frozenset], ...] = ()
    timings: Optional[tuple[tuple[str, float], ...]] = None


def _render_answer(answer: tuple) -> str:
    if len(answer) == 1:
        return answer[0]
    return "(" + ", ".join(answer) + ")"


def render_answers(answers: frozenset) -> str:
    if not answers:
        return "(none)"
    if answers == frozenset({()}):
        return "yes"
    return ", ".join(sorted(_render_answer(a) for a in answers))


def emit_report(report: RunReport) -> str:
    lines = [f"command: {report.command}"]
    for key, value in report.info:
        lines.append(f"{key}: {value}")
    for title, conflict_set in report.conflict_sections:
        rendered = sorted(
            "{" + ", ".join(sorted(a.render() for a in conflict)) + "}"
            for conflict in conflict_set
        )
        lines.append(f"{title} ({len(rendered)}):")
        lines.extend(f"  {snippet}" for snippet in rendered)
    for title, assertions in report.assertion_sections:
        lines.append(f"{title} ({len(assertions)}):")
        lines.extend(f"  {a.render()}" for a in sorted_assertions(assertions))
    for title, answers in report.answer_sections:
        lines.append(f"{title} ({len(answers)}): {render_answers(answers)}")
    if report.timings:
        for label, millis in report.timings:
            lines.append(f"{label}: {millis:.3f} ms")
    return "\n".join(lines) + "\n"
