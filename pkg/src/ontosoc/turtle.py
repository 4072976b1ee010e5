"""Turtle subset reader and writer.

Covers what the schema, alignment and corpus files need: @prefix/@base,
the `a` keyword, `;` predicate lists, `,` object lists, IRIs, prefixed
names, string literals with language tags or datatype annotations,
integers, labeled blank nodes and comments.  Collections and anonymous
blank nodes are deliberately out.

The serializer emits a byte-stable layout: prefix declarations first,
subjects sorted lexically, predicates and objects sorted within each
subject block.  Serializer output always re-parses to an equal graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional
from urllib.parse import urljoin

from .rdf import (
    XSD_INTEGER,
    XSD_STRING,
    Blank,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Term,
    TermError,
    Triple,
    UndeclaredPrefixError,
    term_key,
)


class ParseError(Exception):
    """Syntax or resolution error with a 1-based source position."""

    def __init__(self, line: int, column: int, message: str, snippet: str = ""):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.snippet = snippet


@dataclass
class Document:
    graph: Graph = field(default_factory=Graph)
    prefixes: PrefixMap = field(default_factory=PrefixMap)
    base: Optional[str] = None


_PN_LOCAL = re.compile(r"[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?$|^$")
_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


@dataclass
class _Token:
    kind: str
    value: str
    line: int
    column: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.lines = text.split("\n")

    def error(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        line = self.line if line is None else line
        col = self.col if col is None else col
        snippet = self.lines[line - 1] if 0 < line <= len(self.lines) else ""
        return ParseError(line, col, message, snippet)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _skip_ws(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next(self) -> _Token:
        self._skip_ws()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Token("eof", "", line, col)
        ch = self.text[self.pos]

        if ch == "<":
            end = self.text.find(">", self.pos + 1)
            if end == -1 or "\n" in self.text[self.pos : end]:
                raise self.error("unterminated IRI", line, col)
            value = self.text[self.pos + 1 : end]
            self._advance(end + 1 - self.pos)
            return _Token("iriref", value, line, col)

        if ch == '"':
            return self._string(line, col)

        if ch in ".,;":
            self._advance()
            return _Token(ch, ch, line, col)

        if ch == "^" and self.text[self.pos : self.pos + 2] == "^^":
            self._advance(2)
            return _Token("^^", "^^", line, col)

        if ch == "@":
            m = re.match(r"@([A-Za-z][A-Za-z0-9\-]*)", self.text[self.pos :])
            if not m:
                raise self.error("bad '@' token", line, col)
            word = m.group(1)
            self._advance(len(m.group(0)))
            if word in ("prefix", "base"):
                return _Token("@" + word, word, line, col)
            return _Token("langtag", word, line, col)

        if ch == "_" and self.text[self.pos : self.pos + 2] == "_:":
            # a trailing '.' belongs to the statement, not the label
            m = re.match(r"_:([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)", self.text[self.pos :])
            if not m:
                raise self.error("bad blank node label", line, col)
            self._advance(len(m.group(0)))
            return _Token("blank", m.group(1), line, col)

        m = re.match(r"[+-]?[0-9]+", self.text[self.pos :])
        if m:
            self._advance(len(m.group(0)))
            return _Token("integer", m.group(0), line, col)

        m = re.match(r"([A-Za-z][A-Za-z0-9_\-]*)?:([A-Za-z0-9_][A-Za-z0-9_\-]*)?", self.text[self.pos :])
        if m:
            self._advance(len(m.group(0)))
            return _Token("pname", m.group(0), line, col)

        m = re.match(r"[A-Za-z][A-Za-z0-9_]*", self.text[self.pos :])
        if m:
            self._advance(len(m.group(0)))
            return _Token("word", m.group(0), line, col)

        raise self.error(f"unexpected character {ch!r}", line, col)

    def _string(self, line: int, col: int) -> _Token:
        out = []
        self._advance()  # opening quote
        while True:
            if self.pos >= len(self.text) or self.text[self.pos] == "\n":
                raise self.error("unterminated string literal", line, col)
            ch = self.text[self.pos]
            if ch == '"':
                self._advance()
                return _Token("string", "".join(out), line, col)
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    raise self.error("unterminated escape", line, col)
                esc = self.text[self.pos + 1]
                mapping = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}
                if esc in mapping:
                    out.append(mapping[esc])
                    self._advance(2)
                elif esc == "u":
                    hexpart = self.text[self.pos + 2 : self.pos + 6]
                    if len(hexpart) != 4 or not re.match(r"[0-9A-Fa-f]{4}$", hexpart):
                        raise self.error("bad \\u escape", self.line, self.col)
                    out.append(chr(int(hexpart, 16)))
                    self._advance(6)
                else:
                    raise self.error(f"unknown escape \\{esc}", self.line, self.col)
            else:
                out.append(ch)
                self._advance()


class _Parser:
    def __init__(self, text: str, base: Optional[str] = None):
        self.lexer = _Lexer(text)
        self.doc = Document(base=base)
        self.tok = self.lexer.next()

    def _next(self) -> None:
        self.tok = self.lexer.next()

    def _expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise self.lexer.error(
                f"expected {kind!r}, found {self.tok.value!r}" if self.tok.value else f"expected {kind!r}, found end of input",
                self.tok.line,
                self.tok.column,
            )
        tok = self.tok
        self._next()
        return tok

    def parse(self) -> Document:
        while self.tok.kind != "eof":
            if self.tok.kind == "@prefix":
                self._next()
                label_tok = self._expect("pname")
                if not label_tok.value.endswith(":"):
                    raise self.lexer.error("prefix label must end with ':'", label_tok.line, label_tok.column)
                ns = self._expect("iriref")
                self.doc.prefixes.declare(label_tok.value[:-1], self._resolve(ns.value))
                self._expect(".")
            elif self.tok.kind == "@base":
                self._next()
                iri = self._expect("iriref")
                self.doc.base = self._resolve(iri.value)
                self._expect(".")
            else:
                self._triples()
                self._expect(".")
        return self.doc

    def _resolve(self, iri: str) -> str:
        if _SCHEME.match(iri) or not self.doc.base:
            return iri
        return urljoin(self.doc.base, iri)

    def _triples(self) -> None:
        subject = self._subject()
        self._predicate_object_list(subject)

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self._verb()
            while True:
                obj = self._object()
                try:
                    self.doc.graph.add(Triple(subject, predicate, obj))
                except TermError as exc:
                    raise self.lexer.error(str(exc), self.tok.line, self.tok.column)
                if self.tok.kind == ",":
                    self._next()
                    continue
                break
            if self.tok.kind == ";":
                while self.tok.kind == ";":
                    self._next()
                if self.tok.kind == ".":  # trailing semicolon
                    return
                continue
            return

    def _subject(self) -> Term:
        tok = self.tok
        if tok.kind == "iriref":
            self._next()
            return Iri(self._resolve(tok.value))
        if tok.kind == "pname":
            self._next()
            return self._expand(tok)
        if tok.kind == "blank":
            self._next()
            return Blank(tok.value)
        raise self.lexer.error(
            f"expected subject, found {tok.value!r}" if tok.value else "expected subject, found end of input",
            tok.line,
            tok.column,
        )

    def _verb(self) -> Iri:
        tok = self.tok
        if tok.kind == "word" and tok.value == "a":
            self._next()
            return Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
        if tok.kind == "iriref":
            self._next()
            return Iri(self._resolve(tok.value))
        if tok.kind == "pname":
            self._next()
            term = self._expand(tok)
            return term
        raise self.lexer.error(
            f"expected predicate, found {tok.value!r}" if tok.value else "expected predicate, found end of input",
            tok.line,
            tok.column,
        )

    def _object(self) -> Term:
        tok = self.tok
        if tok.kind == "iriref":
            self._next()
            return Iri(self._resolve(tok.value))
        if tok.kind == "pname":
            self._next()
            return self._expand(tok)
        if tok.kind == "blank":
            self._next()
            return Blank(tok.value)
        if tok.kind == "integer":
            self._next()
            return Literal(tok.value, datatype=XSD_INTEGER)
        if tok.kind == "string":
            self._next()
            if self.tok.kind == "langtag":
                lang = self.tok.value
                self._next()
                return Literal(tok.value, language=lang)
            if self.tok.kind == "^^":
                self._next()
                dt_tok = self.tok
                if dt_tok.kind == "iriref":
                    self._next()
                    return Literal(tok.value, datatype=self._resolve(dt_tok.value))
                if dt_tok.kind == "pname":
                    self._next()
                    return Literal(tok.value, datatype=self._expand(dt_tok).value)
                raise self.lexer.error("expected datatype IRI", dt_tok.line, dt_tok.column)
            return Literal(tok.value)
        raise self.lexer.error(
            f"expected object, found {tok.value!r}" if tok.value else "expected object, found end of input",
            tok.line,
            tok.column,
        )

    def _expand(self, tok: _Token) -> Iri:
        try:
            return self.doc.prefixes.expand(tok.value)
        except UndeclaredPrefixError as exc:
            raise self.lexer.error(str(exc), tok.line, tok.column) from None


def parse_turtle(text: str, base: Optional[str] = None) -> Document:
    """Parse Turtle text; raises ParseError at the first offense."""
    return _Parser(text, base=base).parse()


def _compress(iri: Iri, prefixes: PrefixMap) -> str:
    best_label, best_ns = None, ""
    for label, ns in prefixes.items():
        if iri.value.startswith(ns) and len(ns) > len(best_ns):
            local = iri.value[len(ns) :]
            if _PN_LOCAL.match(local) and "." not in local:
                best_label, best_ns = label, ns
    if best_label is None:
        return iri.n3()
    return f"{best_label}:{iri.value[len(best_ns):]}"


def _render(term: Term, prefixes: PrefixMap) -> str:
    if isinstance(term, Iri):
        return _compress(term, prefixes)
    if isinstance(term, Literal) and term.datatype not in (None, XSD_STRING) and term.language is None:
        return f'"{term.lexical}"^^{_compress(Iri(term.datatype), prefixes)}' if '"' not in term.lexical and "\\" not in term.lexical and "\n" not in term.lexical else term.n3()
    return term.n3()


def serialize_turtle(doc: Document) -> str:
    """Write a Document as Turtle with a deterministic layout."""
    out = []
    for label, ns in sorted(doc.prefixes.items()):
        out.append(f"@prefix {label}: <{ns}> .")
    if out:
        out.append("")

    by_subject: dict[str, tuple[Term, list[Triple]]] = {}
    for t in doc.graph:
        key = term_key(t.subject)
        by_subject.setdefault(key, (t.subject, []))[1].append(t)

    for key in sorted(by_subject):
        subject, triples = by_subject[key]
        pairs = sorted(
            {(term_key(t.predicate), term_key(t.object), t.predicate, t.object) for t in triples}
        )
        lines = []
        current_pred = None
        for _, _, pred, obj in pairs:
            if pred != current_pred:
                lines.append((pred, [obj]))
                current_pred = pred
            else:
                lines[-1][1].append(obj)
        rendered = []
        for pred, objs in lines:
            pred_txt = "a" if pred.value == "http://www.w3.org/1999/02/22-rdf-syntax-ns#type" else _render(pred, doc.prefixes)
            obj_txt = ", ".join(_render(o, doc.prefixes) for o in objs)
            rendered.append(f"    {pred_txt} {obj_txt}")
        out.append(_render(subject, doc.prefixes) + "\n" + " ;\n".join(rendered) + " .")
    return "\n".join(out) + ("\n" if out else "")


def load_turtle_file(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_turtle(fh.read())
