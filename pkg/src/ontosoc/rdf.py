"""In-memory RDF model: terms, triples, prefix maps, and an indexed graph.

The graph keeps three permutation indexes (subject-predicate-object,
predicate-object-subject, object-subject-predicate) so that any pattern
with at least one bound slot is answered without a full scan.  Match
results are always returned sorted lexicographically by the N3 rendering
of (subject, predicate, object), which makes query output deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"

RDF_TYPE = RDF_NS + "type"
RDFS_SUBCLASSOF = RDFS_NS + "subClassOf"
RDFS_DOMAIN = RDFS_NS + "domain"
RDFS_RANGE = RDFS_NS + "range"
RDFS_LABEL = RDFS_NS + "label"
OWL_CLASS = OWL_NS + "Class"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DISJOINT_WITH = OWL_NS + "disjointWith"
OWL_EQUIVALENT_CLASS = OWL_NS + "equivalentClass"
OWL_EQUIVALENT_PROPERTY = OWL_NS + "equivalentProperty"


class TermError(ValueError):
    """Raised for malformed terms and triples."""


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise TermError("IRI must be non-empty")
        if any(ch.isspace() for ch in self.value):
            raise TermError(f"IRI contains whitespace: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class Blank:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise TermError("blank node label must be non-empty")

    def n3(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.language is not None:
            raise TermError("literal may carry a datatype or a language tag, not both")
        # Plain literals normalize to xsd:string; language-tagged ones stay bare.
        if self.datatype is None and self.language is None:
            object.__setattr__(self, "datatype", XSD_STRING)

    def n3(self) -> str:
        body = f'"{_escape(self.lexical)}"'
        if self.language is not None:
            return f"{body}@{self.language}"
        if self.datatype is not None and self.datatype != XSD_STRING:
            return f"{body}^^<{self.datatype}>"
        return body


Term = Union[Iri, Blank, Literal]


def term_key(term: Term) -> str:
    """Sort key used for all deterministic term orderings."""
    return term.n3()


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise TermError("literal may not appear in subject position")
        if not isinstance(self.predicate, Iri):
            raise TermError("predicate must be an IRI")

    def sort_key(self) -> tuple:
        return (term_key(self.subject), term_key(self.predicate), term_key(self.object))

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


class UndeclaredPrefixError(KeyError):
    def __init__(self, label: str):
        super().__init__(label)
        self.label = label

    def __str__(self) -> str:
        return f"undeclared prefix: {self.label!r}"


class PrefixMap:
    """Ordered mapping from prefix label (possibly empty) to namespace IRI."""

    def __init__(self, pairs: Optional[Iterable[tuple[str, str]]] = None):
        self._map: dict[str, str] = {}
        if pairs:
            for label, ns in pairs:
                self.declare(label, ns)

    def declare(self, label: str, namespace: str) -> None:
        self._map[label] = namespace

    def namespace(self, label: str) -> str:
        try:
            return self._map[label]
        except KeyError:
            raise UndeclaredPrefixError(label) from None

    def expand(self, qname: str) -> Iri:
        label, _, local = qname.partition(":")
        return Iri(self.namespace(label) + local)

    def items(self) -> list[tuple[str, str]]:
        return list(self._map.items())

    def copy(self) -> "PrefixMap":
        return PrefixMap(self._map.items())

    def __contains__(self, label: str) -> bool:
        return label in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrefixMap):
            return NotImplemented
        return self._map == other._map

    def __repr__(self) -> str:
        return f"PrefixMap({self._map!r})"


class Graph:
    """A set of triples with SPO, POS and OSP indexes kept in lockstep.

    Set semantics throughout: adding a triple twice is a no-op.  Safe for
    many concurrent readers; mutation requires exclusive access.
    """

    def __init__(self, triples: Optional[Iterable[Triple]] = None):
        self._triples: set[Triple] = set()
        self._spo: dict[Term, dict[Iri, set[Term]]] = {}
        self._pos: dict[Iri, dict[Term, set[Term]]] = {}
        self._osp: dict[Term, dict[Term, set[Iri]]] = {}
        if triples:
            for t in triples:
                self.add(t)

    def add(self, t: Triple) -> bool:
        """Insert a triple; returns True iff it was absent before."""
        if not isinstance(t, Triple):
            raise TermError("not a triple")
        if t in self._triples:
            return False
        self._triples.add(t)
        s, p, o = t.subject, t.predicate, t.object
        self._spo.setdefault(s, {}).setdefault(p, set()).add(o)
        self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
        return True

    def remove(self, t: Triple) -> bool:
        """Remove a triple; returns True iff it was present."""
        if t not in self._triples:
            return False
        self._triples.discard(t)
        s, p, o = t.subject, t.predicate, t.object
        self._prune(self._spo, s, p, o)
        self._prune(self._pos, p, o, s)
        self._prune(self._osp, o, s, p)
        return True

    @staticmethod
    def _prune(index: dict, a, b, c) -> None:
        index[a][b].discard(c)
        if not index[a][b]:
            del index[a][b]
        if not index[a]:
            del index[a]

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.add(t))

    def match(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples matching the pattern; None is a wildcard.

        Picks the index with the longest bound prefix; the result is
        sorted by (subject, predicate, object) N3 strings.
        """
        s, p, o = subject, predicate, object
        result: list[Triple]
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            result = [t] if t in self._triples else []
        elif s is not None and p is not None:
            objs = self._spo.get(s, {}).get(p, ())
            result = [Triple(s, p, x) for x in objs]
        elif p is not None and o is not None:
            subs = self._pos.get(p, {}).get(o, ())
            result = [Triple(x, p, o) for x in subs]
        elif o is not None and s is not None:
            preds = self._osp.get(o, {}).get(s, ())
            result = [Triple(s, x, o) for x in preds]
        elif s is not None:
            result = [
                Triple(s, pred, obj)
                for pred, objs in self._spo.get(s, {}).items()
                for obj in objs
            ]
        elif p is not None:
            result = [
                Triple(sub, p, obj)
                for obj, subs in self._pos.get(p, {}).items()
                for sub in subs
            ]
        elif o is not None:
            result = [
                Triple(sub, pred, o)
                for sub, preds in self._osp.get(o, {}).items()
                for pred in preds
            ]
        else:
            result = list(self._triples)
        result.sort(key=Triple.sort_key)
        return result

    def subjects(self) -> set[Term]:
        return set(self._spo)

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __repr__(self) -> str:
        return f"<Graph of {len(self._triples)} triples>"


def _blank_partition(graph: Graph) -> dict[Blank, str]:
    """Canonical labels for blank nodes by iterative signature refinement.

    Each blank node's color is refined from the multiset of its incident
    triples, with neighbouring blanks abstracted to their current color.
    Ties are broken by the lexical order of final signatures; exact
    isomorphism is not attempted (adequate for the small graphs here).
    """
    blanks = {t.subject for t in graph if isinstance(t.subject, Blank)}
    blanks |= {t.object for t in graph if isinstance(t.object, Blank)}
    if not blanks:
        return {}
    color: dict[Blank, str] = {b: "" for b in blanks}

    def render(term: Term) -> str:
        if isinstance(term, Blank):
            return f"~{color[term]}"
        return term.n3()

    for _ in range(len(blanks) + 1):
        new_color = {}
        for b in blanks:
            sig = []
            for t in graph.match(subject=b):
                sig.append(("s", t.predicate.n3(), render(t.object)))
            for t in graph.match(object=b):
                sig.append(("o", t.predicate.n3(), render(t.subject)))
            sig.sort()
            new_color[b] = repr(sig)
        if new_color == color:
            break
        color = new_color
    ordered = sorted(blanks, key=lambda b: (color[b], b.label))
    return {b: f"b{i}" for i, b in enumerate(ordered)}


def canonical_triples(graph: Graph) -> frozenset[Triple]:
    """The graph's triple set with blank nodes canonically relabeled."""
    relabel = _blank_partition(graph)

    def conv(term: Term) -> Term:
        if isinstance(term, Blank):
            return Blank(relabel[term])
        return term

    return frozenset(
        Triple(conv(t.subject), t.predicate, conv(t.object)) for t in graph
    )


def graph_equal(g1: Graph, g2: Graph) -> bool:
    """True iff the triple sets agree up to a blank-node bijection."""
    if len(g1) != len(g2):
        return False
    return canonical_triples(g1) == canonical_triples(g2)
