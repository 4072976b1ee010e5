"""Instance-graph checking against a schema.

Three checks: domain/range conformance of every triple whose predicate
is a schema property, disjointness of each instance's (entailed) types,
and subclass-closure type entailment feeding both.  Typing is closed:
an untyped subject or object of a schema property is itself a violation
(found classes empty), since silence would hide population mistakes.

Schema-vocabulary triples (type declarations, subclass, domain/range,
disjointness, equivalence, labels) are never checked as instance data.
Both checks run type entailment internally, so callers may pass raw
graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .rdf import (
    OWL_DISJOINT_WITH,
    OWL_EQUIVALENT_CLASS,
    OWL_EQUIVALENT_PROPERTY,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_LABEL,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    Blank,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    term_key,
)
from .schema import PropertyDef, SchemaDef

DOMAIN = "domain"
RANGE = "range"
DISJOINTNESS = "disjointness"

_VOCAB_PREDICATES = {
    RDF_TYPE,
    RDFS_SUBCLASSOF,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_LABEL,
    OWL_DISJOINT_WITH,
    OWL_EQUIVALENT_CLASS,
    OWL_EQUIVALENT_PROPERTY,
}


@dataclass(frozen=True)
class Violation:
    kind: str  # domain | range | disjointness
    message: str
    triple: Optional[Triple] = None
    instance: Optional[Term] = None
    expected: Optional[str] = None
    found: frozenset = frozenset()

    def machine_line(self) -> str:
        if self.kind == DISJOINTNESS:
            node = self.instance.n3() if self.instance is not None else "-"
            found = ",".join(sorted(self.found))
            return f"{self.kind}\t{node}\t-\t-\t-\t{found}"
        t = self.triple
        assert t is not None
        found = ",".join(sorted(self.found)) if self.found else "-"
        return (
            f"{self.kind}\t{t.subject.n3()}\t{t.predicate.n3()}\t{t.object.n3()}"
            f"\t{self.expected or '-'}\t{found}"
        )

    def sort_key(self) -> tuple:
        if self.triple is not None:
            return (self.triple.sort_key(), self.kind, self.message)
        node = term_key(self.instance) if self.instance is not None else ""
        return ((node, "", ""), self.kind, self.message)


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checked_triples: int = 0
    entailed_types: int = 0
    skipped_predicates: int = 0

    @property
    def conforms(self) -> bool:
        return not self.violations

    def render_text(self) -> str:
        lines = [
            f"{len(self.violations)} violations "
            f"({self.checked_triples} triples checked, "
            f"{self.entailed_types} types entailed, "
            f"{self.skipped_predicates} unknown-predicate triples skipped)"
        ]
        for v in self.violations:
            lines.append(f"  [{v.kind}] {v.message}")
        return "\n".join(lines)

    def render_machine(self) -> str:
        return "\n".join(v.machine_line() for v in self.violations)


def infer_types(graph: Graph, schema: SchemaDef) -> Graph:
    """Add every supertype of each instance's declared types; idempotent."""
    out = graph.copy()
    class_iris = schema.class_iris()
    for t in graph.match(predicate=Iri(RDF_TYPE)):
        if isinstance(t.object, Iri) and t.object.value in class_iris:
            for sup in schema.superclass_closure(t.object.value):
                out.add(Triple(t.subject, Iri(RDF_TYPE), Iri(sup)))
    return out


def _entailed_type_count(graph: Graph, schema: SchemaDef) -> int:
    return len(infer_types(graph, schema)) - len(graph)


def _types_of(graph: Graph, node: Term, schema: SchemaDef) -> frozenset:
    if isinstance(node, Literal):
        return frozenset()
    class_iris = schema.class_iris()
    return frozenset(
        t.object.value
        for t in graph.match(subject=node, predicate=Iri(RDF_TYPE))
        if isinstance(t.object, Iri) and t.object.value in class_iris
    )


def _slot_ok(types: frozenset, expected: str) -> bool:
    return expected in types


def check_domain_range(graph: Graph, schema: SchemaDef) -> list[Violation]:
    """Domain/range conformance for every schema-property triple.

    Performs type entailment internally.  A triple on a canonical
    predicate IRI conforms when any of its declared signatures is fully
    satisfied; reported classes come from the best-matching signature.
    """
    entailed = infer_types(graph, schema)
    violations = []
    for t in sorted(graph, key=Triple.sort_key):
        if t.predicate.value in _VOCAB_PREDICATES:
            continue
        signatures = schema.signatures_for(t.predicate.value)
        if not signatures:
            continue
        s_types = _types_of(entailed, t.subject, schema)
        o_types = _types_of(entailed, t.object, schema)

        def score(sig: PropertyDef) -> int:
            n = 0
            if _slot_ok(s_types, sig.domain):
                n += 1
            if not isinstance(t.object, Literal) and _slot_ok(o_types, sig.range):
                n += 1
            return n

        best = max(signatures, key=score)
        if score(best) == 2:
            continue
        if not _slot_ok(s_types, best.domain):
            violations.append(
                Violation(
                    DOMAIN,
                    f"subject of {t.predicate.value} must be a {best.domain}; "
                    f"found {{{', '.join(sorted(s_types)) or ''}}} on {t.subject.n3()}",
                    triple=t,
                    expected=best.domain,
                    found=s_types,
                )
            )
        if isinstance(t.object, Literal):
            violations.append(
                Violation(
                    RANGE,
                    f"object of object property {t.predicate.value} is a literal; "
                    f"expected a {best.range}",
                    triple=t,
                    expected=best.range,
                )
            )
        elif not _slot_ok(o_types, best.range):
            violations.append(
                Violation(
                    RANGE,
                    f"object of {t.predicate.value} must be a {best.range}; "
                    f"found {{{', '.join(sorted(o_types)) or ''}}} on {t.object.n3()}",
                    triple=t,
                    expected=best.range,
                    found=o_types,
                )
            )
    return violations


def check_disjointness(graph: Graph, schema: SchemaDef) -> list[Violation]:
    """One violation per instance per disjoint class pair it violates."""
    entailed = infer_types(graph, schema)
    disjoint = {(ax.class_a, ax.class_b) for ax in schema.disjointness}
    violations = []
    typed_nodes = sorted(
        {t.subject for t in entailed.match(predicate=Iri(RDF_TYPE))}, key=term_key
    )
    for node in typed_nodes:
        types = _types_of(entailed, node, schema)
        for a, b in sorted(disjoint):
            if a in types and b in types:
                violations.append(
                    Violation(
                        DISJOINTNESS,
                        f"{node.n3()} is typed with disjoint classes {a} and {b}",
                        instance=node,
                        found=frozenset((a, b)),
                    )
                )
    return violations


def validate(graph: Graph, schema: SchemaDef) -> ValidationReport:
    """Entail types, run both checks, aggregate counts."""
    report = ValidationReport()
    report.entailed_types = _entailed_type_count(graph, schema)
    checked = skipped = 0
    for t in graph:
        if t.predicate.value in _VOCAB_PREDICATES:
            continue
        if schema.signatures_for(t.predicate.value):
            checked += 1
        else:
            skipped += 1
    report.checked_triples = checked
    report.skipped_predicates = skipped
    report.violations = sorted(
        check_domain_range(graph, schema) + check_disjointness(graph, schema),
        key=Violation.sort_key,
    )
    return report
