"""A small SPARQL subset: PREFIX, SELECT (variables or *), basic graph
patterns, OPTIONAL, FILTER (in)equality, ORDER BY, LIMIT and OFFSET.

Evaluation is deliberately simple: patterns join left to right with
index-backed matching, each OPTIONAL is a left outer join, and filters
run innermost group first.  Bag semantics; no DISTINCT.  ORDER BY uses
a fixed total order over terms: unbound < blank < IRI < literal, with
lexical comparison inside each kind.

Unsupported query forms (CONSTRUCT, ASK, DESCRIBE, UNION, property
paths, ...) are rejected with a named error rather than misparsed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .rdf import (
    XSD_INTEGER,
    XSD_STRING,
    Blank,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Term,
    UndeclaredPrefixError,
)


class QueryError(Exception):
    """Query syntax or unsupported-feature error with source position."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class Var:
    name: str


Slot = Union[Term, Var]


@dataclass(frozen=True)
class TriplePattern:
    subject: Slot
    predicate: Slot  # IRI or variable
    object: Slot

    def variables(self) -> set[str]:
        return {s.name for s in (self.subject, self.predicate, self.object) if isinstance(s, Var)}


@dataclass(frozen=True)
class Filter:
    left: Slot
    op: str  # "=" or "!="
    right: Slot


@dataclass
class GroupPattern:
    required: list[TriplePattern] = field(default_factory=list)
    optionals: list["GroupPattern"] = field(default_factory=list)
    filters: list[Filter] = field(default_factory=list)

    def variables(self) -> set[str]:
        out = set()
        for tp in self.required:
            out |= tp.variables()
        for opt in self.optionals:
            out |= opt.variables()
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupPattern):
            return NotImplemented
        return (
            self.required == other.required
            and self.optionals == other.optionals
            and self.filters == other.filters
        )


@dataclass
class QueryAST:
    prefixes: PrefixMap
    projection: Optional[list[str]]  # None means SELECT *
    pattern: GroupPattern
    order_by: list[tuple[str, bool]] = field(default_factory=list)  # (var, ascending)
    limit: Optional[int] = None
    offset: Optional[int] = None
    warnings: list[str] = field(default_factory=list)


_UNSUPPORTED = {
    "CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "UNION", "MINUS",
    "GRAPH", "SERVICE", "BIND", "VALUES", "GROUP", "HAVING", "EXISTS",
    "DISTINCT", "REDUCED",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+|\#[^\n]*)
    | (?P<iriref><[^<>\s]*>)
    | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<neq>!=)
    | (?P<punct>[{}().,;=*])
    | (?P<langtag>@[A-Za-z][A-Za-z0-9\-]*)
    | (?P<dtype>\^\^)
    | (?P<blank>_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)
    | (?P<integer>[+-]?[0-9]+)
    | (?P<pname>(?:[A-Za-z][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_][A-Za-z0-9_\-]*)?)
    | (?P<word>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QueryError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup or ""
        value = m.group(0)
        if kind != "ws":
            tokens.append(_Tok(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Tok("eof", "", line, col))
    return tokens


class _QueryParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.prefixes = PrefixMap()

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def _next(self) -> _Tok:
        tok = self.tok
        self.i += 1
        return tok

    def _error(self, message: str, tok: Optional[_Tok] = None) -> QueryError:
        tok = tok or self.tok
        return QueryError(tok.line, tok.column, message)

    def _expect_punct(self, ch: str) -> None:
        if self.tok.kind not in ("punct", "neq") or self.tok.value != ch:
            shown = self.tok.value or "end of input"
            raise self._error(f"expected {ch!r}, found {shown!r}")
        self._next()

    def _keyword(self) -> Optional[str]:
        if self.tok.kind == "word":
            return self.tok.value.upper()
        return None

    def parse(self) -> QueryAST:
        while self._keyword() == "PREFIX":
            self._next()
            if self.tok.kind != "pname" or not self.tok.value.endswith(":"):
                raise self._error("expected prefix label")
            label = self._next().value[:-1]
            if self.tok.kind != "iriref":
                raise self._error("expected namespace IRI")
            self.prefixes.declare(label, self._next().value[1:-1])

        kw = self._keyword()
        if kw in _UNSUPPORTED:
            raise self._error(f"unsupported query form: {kw}")
        if kw != "SELECT":
            raise self._error("expected SELECT")
        self._next()

        if self._keyword() in ("DISTINCT", "REDUCED"):
            raise self._error(f"unsupported modifier: {self._keyword()}")

        projection: Optional[list[str]]
        if self.tok.kind == "punct" and self.tok.value == "*":
            self._next()
            projection = None
        else:
            projection = []
            while self.tok.kind == "var":
                projection.append(self._next().value[1:])
            if not projection:
                raise self._error("expected projection variables or *")

        if self._keyword() != "WHERE":
            raise self._error("expected WHERE")
        self._next()
        pattern = self._group()

        order_by: list[tuple[str, bool]] = []
        if self._keyword() == "ORDER":
            self._next()
            if self._keyword() != "BY":
                raise self._error("expected BY after ORDER")
            self._next()
            while True:
                if self.tok.kind == "var":
                    order_by.append((self._next().value[1:], True))
                elif self._keyword() in ("ASC", "DESC"):
                    ascending = self._keyword() == "ASC"
                    self._next()
                    self._expect_punct("(")
                    if self.tok.kind != "var":
                        raise self._error("expected variable in ORDER BY")
                    order_by.append((self._next().value[1:], ascending))
                    self._expect_punct(")")
                else:
                    break
            if not order_by:
                raise self._error("expected sort condition after ORDER BY")

        limit = offset = None
        while self._keyword() in ("LIMIT", "OFFSET"):
            kw = self._keyword()
            self._next()
            if self.tok.kind != "integer":
                raise self._error(f"expected integer after {kw}")
            value = int(self._next().value)
            if kw == "LIMIT":
                limit = value
            else:
                offset = value

        if self.tok.kind != "eof":
            raise self._error(f"unexpected trailing input: {self.tok.value!r}")

        ast = QueryAST(self.prefixes, projection, pattern, order_by, limit, offset)
        if projection is not None:
            pattern_vars = pattern.variables()
            for name in projection:
                if name not in pattern_vars:
                    ast.warnings.append(f"projected variable ?{name} is never bound")
        return ast

    def _group(self) -> GroupPattern:
        self._expect_punct("{")
        group = GroupPattern()
        while True:
            if self.tok.kind == "punct" and self.tok.value == "}":
                self._next()
                return group
            kw = self._keyword()
            if kw == "OPTIONAL":
                self._next()
                group.optionals.append(self._group())
            elif kw == "FILTER":
                self._next()
                group.filters.append(self._filter())
            elif kw in _UNSUPPORTED:
                raise self._error(f"unsupported feature: {kw}")
            elif self.tok.kind == "punct" and self.tok.value == "{":
                # A bare nested group only occurs in alternation; name it.
                self._group()
                if self._keyword() == "UNION":
                    raise self._error("unsupported feature: UNION")
                raise self._error("unsupported feature: nested group pattern")
            elif self.tok.kind == "eof":
                raise self._error("unexpected end of input inside group")
            else:
                group.required.append(self._triple_pattern())
                if self.tok.kind == "punct" and self.tok.value == ".":
                    self._next()
        return group

    def _filter(self) -> Filter:
        self._expect_punct("(")
        left = self._slot(allow_literal=True)
        if self.tok.kind == "neq":
            op = "!="
        elif self.tok.kind == "punct" and self.tok.value == "=":
            op = "="
        else:
            raise self._error("expected = or != in FILTER")
        self._next()
        right = self._slot(allow_literal=True)
        self._expect_punct(")")
        return Filter(left, op, right)

    def _triple_pattern(self) -> TriplePattern:
        subject = self._slot()
        if isinstance(subject, Literal):
            raise self._error("literal may not appear in subject position")
        predicate = self._slot(allow_a=True)
        if not isinstance(predicate, (Var, Iri)):
            raise self._error("predicate must be an IRI or a variable")
        obj = self._slot(allow_literal=True)
        return TriplePattern(subject, predicate, obj)

    def _slot(self, allow_literal: bool = False, allow_a: bool = False) -> Slot:
        tok = self.tok
        if tok.kind == "var":
            self._next()
            return Var(tok.value[1:])
        if tok.kind == "iriref":
            self._next()
            return Iri(tok.value[1:-1])
        if tok.kind == "pname":
            self._next()
            try:
                return self.prefixes.expand(tok.value)
            except UndeclaredPrefixError as exc:
                raise QueryError(tok.line, tok.column, str(exc)) from None
        if tok.kind == "blank":
            self._next()
            return Blank(tok.value[2:])
        if allow_a and tok.kind == "word" and tok.value == "a":
            self._next()
            return Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
        if tok.kind == "word" and tok.value.upper() in _UNSUPPORTED:
            raise self._error(f"unsupported feature: {tok.value.upper()}")
        if allow_literal and tok.kind == "string":
            self._next()
            lexical = _unescape(tok.value[1:-1])
            if self.tok.kind == "langtag":
                return Literal(lexical, language=self._next().value[1:])
            if self.tok.kind == "dtype":
                self._next()
                dt = self._slot()
                if not isinstance(dt, Iri):
                    raise self._error("expected datatype IRI")
                return Literal(lexical, datatype=dt.value)
            return Literal(lexical)
        if allow_literal and tok.kind == "integer":
            self._next()
            return Literal(tok.value, datatype=XSD_INTEGER)
        shown = tok.value or "end of input"
        raise self._error(f"expected term or variable, found {shown!r}")


def _unescape(text: str) -> str:
    return (
        text.replace("\\n", "\n")
        .replace("\\t", "\t")
        .replace("\\r", "\r")
        .replace('\\"', '"')
        .replace("\\\\", "\\")
    )


def parse_query(text: str) -> QueryAST:
    """Parse a query; raises QueryError with line/column on failure."""
    return _QueryParser(text).parse()


# ---------------------------------------------------------------------------
# evaluation

Row = dict  # variable name -> Term


@dataclass
class SolutionTable:
    header: list[str]
    rows: list[Row]

    def render_text(self) -> str:
        cells = [[("?" + v) for v in self.header]]
        for row in self.rows:
            cells.append([row[v].n3() if v in row else "" for v in self.header])
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.header))] if self.header else []
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        return "\n".join(lines)


def _term_order_key(term: Optional[Term]) -> tuple:
    if term is None:
        return (0, "", "", "")
    if isinstance(term, Blank):
        return (1, term.label, "", "")
    if isinstance(term, Iri):
        return (2, term.value, "", "")
    return (3, term.lexical, term.datatype or "", term.language or "")


def _substitute(slot: Slot, row: Row) -> Optional[Term]:
    if isinstance(slot, Var):
        return row.get(slot.name)
    return slot


def _match_pattern(graph: Graph, pattern: TriplePattern, row: Row) -> list[Row]:
    s = _substitute(pattern.subject, row)
    p = _substitute(pattern.predicate, row)
    o = _substitute(pattern.object, row)
    out = []
    for t in graph.match(s, p, o):
        extended = dict(row)
        ok = True
        for slot, value in ((pattern.subject, t.subject), (pattern.predicate, t.predicate), (pattern.object, t.object)):
            if isinstance(slot, Var):
                bound = extended.get(slot.name)
                if bound is None:
                    extended[slot.name] = value
                elif bound != value:
                    ok = False
                    break
        if ok:
            out.append(extended)
    return out


def _apply_filter(rows: list[Row], flt: Filter) -> list[Row]:
    out = []
    for row in rows:
        left = _substitute(flt.left, row)
        right = _substitute(flt.right, row)
        if left is None or right is None:
            continue  # errors eliminate the solution
        equal = left == right
        if (flt.op == "=" and equal) or (flt.op == "!=" and not equal):
            out.append(row)
    return out


def _eval_group(group: GroupPattern, graph: Graph, rows: list[Row]) -> list[Row]:
    for pattern in group.required:
        rows = [ext for row in rows for ext in _match_pattern(graph, pattern, row)]
    for optional in group.optionals:
        joined = []
        for row in rows:
            extensions = _eval_group(optional, graph, [row])
            joined.extend(extensions if extensions else [row])
        rows = joined
    for flt in group.filters:
        rows = _apply_filter(rows, flt)
    return rows


def evaluate(ast: QueryAST, graph: Graph) -> SolutionTable:
    """Run a parsed query against a graph."""
    rows = _eval_group(ast.pattern, graph, [{}])

    for var, ascending in reversed(ast.order_by):
        rows.sort(key=lambda r: _term_order_key(r.get(var)), reverse=not ascending)

    if ast.projection is None:
        header = _vars_in_appearance_order(ast.pattern)
    else:
        header = list(ast.projection)
    projected = [{v: row[v] for v in header if v in row} for row in rows]

    start = ast.offset or 0
    end = start + ast.limit if ast.limit is not None else None
    projected = projected[start:end]
    return SolutionTable(header, projected)


def _vars_in_appearance_order(group: GroupPattern) -> list[str]:
    seen: list[str] = []

    def visit(g: GroupPattern) -> None:
        for tp in g.required:
            for slot in (tp.subject, tp.predicate, tp.object):
                if isinstance(slot, Var) and slot.name not in seen:
                    seen.append(slot.name)
        for opt in g.optionals:
            visit(opt)

    visit(group)
    return seen


def to_json_results(table: SolutionTable) -> str:
    """Standard SPARQL JSON results rendering."""
    bindings = []
    for row in table.rows:
        binding = {}
        for var in table.header:
            if var not in row:
                continue
            term = row[var]
            if isinstance(term, Iri):
                binding[var] = {"type": "uri", "value": term.value}
            elif isinstance(term, Blank):
                binding[var] = {"type": "bnode", "value": term.label}
            else:
                entry: dict = {"type": "literal", "value": term.lexical}
                if term.language is not None:
                    entry["xml:lang"] = term.language
                elif term.datatype is not None and term.datatype != XSD_STRING:
                    entry["datatype"] = term.datatype
                binding[var] = entry
        bindings.append(binding)
    return json.dumps(
        {"head": {"vars": table.header}, "results": {"bindings": bindings}},
        indent=2,
    )


# ---------------------------------------------------------------------------
# printer (round-trips through parse_query)


def _print_slot(slot: Slot) -> str:
    if isinstance(slot, Var):
        return f"?{slot.name}"
    return slot.n3()


def _print_group(group: GroupPattern, indent: str) -> str:
    inner = indent + "  "
    lines = ["{"]
    for tp in group.required:
        lines.append(f"{inner}{_print_slot(tp.subject)} {_print_slot(tp.predicate)} {_print_slot(tp.object)} .")
    for opt in group.optionals:
        lines.append(f"{inner}OPTIONAL {_print_group(opt, inner)}")
    for flt in group.filters:
        lines.append(f"{inner}FILTER ( {_print_slot(flt.left)} {flt.op} {_print_slot(flt.right)} )")
    lines.append(indent + "}")
    return "\n".join(lines)


def print_query(ast: QueryAST) -> str:
    """Render an AST back to query text; parse_query inverts this."""
    lines = [f"PREFIX {label}: <{ns}>" for label, ns in ast.prefixes.items()]
    projection = "*" if ast.projection is None else " ".join(f"?{v}" for v in ast.projection)
    lines.append(f"SELECT {projection}")
    lines.append("WHERE " + _print_group(ast.pattern, ""))
    if ast.order_by:
        parts = [f"?{v}" if asc else f"DESC(?{v})" for v, asc in ast.order_by]
        lines.append("ORDER BY " + " ".join(parts))
    if ast.limit is not None:
        lines.append(f"LIMIT {ast.limit}")
    if ast.offset is not None:
        lines.append(f"OFFSET {ast.offset}")
    return "\n".join(lines) + "\n"
