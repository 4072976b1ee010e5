from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontosoc.rdf import RDF_TYPE, Graph, Iri, Literal, Triple
from ontosoc.schema import (
    ONTOSOC_NS,
    ClassDef,
    SchemaDef,
    builtin_schema,
    schema_to_graph,
)
from ontosoc.turtle import parse_turtle
from ontosoc.validation import (
    DISJOINTNESS,
    DOMAIN,
    RANGE,
    check_disjointness,
    check_domain_range,
    infer_types,
    validate,
)

from .oracles import brute_force_violation_count

FIXTURES = Path(__file__).parent / "fixtures"


def _c(name):
    return ONTOSOC_NS + name


def _i(name):
    return Iri("http://example.org/soc/" + name)


def _typed(graph, name, cls):
    graph.add(Triple(_i(name), Iri(RDF_TYPE), Iri(_c(cls))))


class TestInferTypes:
    def test_subclass_entails_supertype(self, schema):
        g = Graph()
        _typed(g, "e", "CulturalActivity")
        out = infer_types(g, schema)
        assert Triple(_i("e"), Iri(RDF_TYPE), Iri(_c("Activity"))) in out

    def test_no_type_triples_unchanged(self, schema):
        g = Graph([Triple(_i("a"), Iri(_c("isMemberOf")), _i("b"))])
        assert set(infer_types(g, schema)) == set(g)

    def test_depth_three_chain_entails_two(self):
        base = builtin_schema()
        classes = base.classes + (
            ClassDef(_c("FestivalActivity"), "", _c("CulturalActivity")),
        )
        schema = SchemaDef(classes, base.properties, base.disjointness, base.alignments)
        g = Graph()
        _typed(g, "leaf", "FestivalActivity")
        out = infer_types(g, schema)
        assert len(out) - len(g) == 2  # CulturalActivity and Activity

    def test_idempotent_and_monotone(self, schema, corpus_graph):
        once = infer_types(corpus_graph, schema)
        twice = infer_types(once, schema)
        assert set(once) == set(twice)
        assert set(corpus_graph) <= set(once)


class TestDomainRange:
    def test_conformant_membership(self, schema):
        g = Graph()
        _typed(g, "Tangoche", "Individual")
        _typed(g, "Naakosenda", "Community")
        g.add(Triple(_i("Tangoche"), Iri(_c("isMemberOf")), _i("Naakosenda")))
        assert check_domain_range(g, schema) == []

    def test_range_violation_reports_expected_and_found(self, schema):
        g = Graph()
        _typed(g, "Tangoche", "Individual")
        _typed(g, "Mokolo", "Locality")
        g.add(Triple(_i("Tangoche"), Iri(_c("isMemberOf")), _i("Mokolo")))
        [v] = check_domain_range(g, schema)
        assert v.kind == RANGE
        assert v.expected == _c("Community")
        assert v.found == frozenset({_c("Locality")})

    def test_empty_graph(self, schema):
        assert check_domain_range(Graph(), schema) == []

    def test_untyped_subject_is_domain_violation(self, schema):
        g = Graph()
        _typed(g, "Naakosenda", "Community")
        g.add(Triple(_i("Ghost"), Iri(_c("isMemberOf")), _i("Naakosenda")))
        [v] = check_domain_range(g, schema)
        assert v.kind == DOMAIN
        assert v.found == frozenset()

    def test_subclass_satisfies_range(self, schema):
        g = Graph()
        _typed(g, "Organizer", "Role")
        _typed(g, "Event", "CulturalActivity")
        g.add(Triple(_i("Organizer"), Iri(_c("isRealisedBy")), _i("Event")))
        assert check_domain_range(g, schema) == []

    def test_alias_validates_against_own_signature(self, schema):
        g = Graph()
        _typed(g, "Event", "CulturalActivity")
        _typed(g, "Organizer", "Role")
        g.add(Triple(_i("Event"), Iri(_c("isRealizeBy")), _i("Organizer")))
        assert check_domain_range(g, schema) == []

    def test_query_direction_tool_usage_is_accepted(self, schema):
        g = Graph()
        _typed(g, "Organizer", "Role")
        _typed(g, "Drums", "Resource")
        g.add(Triple(_i("Organizer"), Iri(_c("isUsedBy")), _i("Drums")))
        assert check_domain_range(g, schema) == []

    def test_unknown_predicates_skipped(self, schema):
        g = Graph([Triple(_i("a"), Iri("http://other/prop"), _i("b"))])
        assert check_domain_range(g, schema) == []
        report = validate(g, schema)
        assert report.skipped_predicates == 1
        assert report.checked_triples == 0


class TestDisjointness:
    def test_disjoint_pair_violation(self, schema):
        g = Graph()
        _typed(g, "x", "Community")
        _typed(g, "x", "Activity")
        [v] = check_disjointness(g, schema)
        assert v.kind == DISJOINTNESS
        assert v.found == frozenset({_c("Community"), _c("Activity")})

    def test_subclass_is_not_disjoint_from_superclass(self, schema):
        g = Graph()
        _typed(g, "x", "CulturalActivity")
        _typed(g, "x", "Activity")
        assert check_disjointness(g, schema) == []

    def test_three_disjoint_classes_three_violations(self, schema):
        g = Graph()
        for cls in ("Individual", "Community", "Role"):
            _typed(g, "y", cls)
        assert len(check_disjointness(g, schema)) == 3


class TestValidate:
    def test_conformant_corpus(self, schema, corpus_graph):
        report = validate(corpus_graph, schema)
        assert report.conforms
        assert report.violations == []

    def test_one_injected_range_error(self, schema, corpus_graph):
        g = corpus_graph.copy()
        g.add(Triple(_i("Tangoche"), Iri(_c("isMemberOf")), _i("Mokolo")))
        report = validate(g, schema)
        assert len(report.violations) == 1
        assert report.violations[0].kind == RANGE

    def test_empty_graph(self, schema):
        report = validate(Graph(), schema)
        assert report.conforms
        assert report.checked_triples == 0

    def test_schema_graph_validates_clean(self, schema):
        report = validate(schema_to_graph(schema), schema)
        assert report.conforms

    def test_machine_format_line_per_violation(self, schema, corpus_graph):
        g = corpus_graph.copy()
        g.add(Triple(_i("Tangoche"), Iri(_c("isMemberOf")), _i("Mokolo")))
        report = validate(g, schema)
        lines = report.render_machine().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("range\t")

    def test_counts_match_brute_force_on_corpus(self, schema, corpus_graph):
        g = corpus_graph.copy()
        g.add(Triple(_i("Tangoche"), Iri(_c("isMemberOf")), _i("Mokolo")))
        g.add(Triple(_i("Mixed"), Iri(RDF_TYPE), Iri(_c("Community"))))
        g.add(Triple(_i("Mixed"), Iri(RDF_TYPE), Iri(_c("Resource"))))
        entailed = infer_types(g, schema)
        report = validate(g, schema)
        assert len(report.violations) == brute_force_violation_count(entailed, schema)


FAULT_EXPECTATIONS = [
    ("fault_domain_untyped_subject.ttl", DOMAIN, 1),
    ("fault_domain_wrong_class.ttl", DOMAIN, 1),
    ("fault_range_wrong_class.ttl", RANGE, 1),
    ("fault_range_literal_object.ttl", RANGE, 1),
    ("fault_disjoint_pair.ttl", DISJOINTNESS, 1),
    ("fault_disjoint_three_classes.ttl", DISJOINTNESS, 3),
]


@pytest.mark.parametrize("name,kind,count", FAULT_EXPECTATIONS)
def test_fault_fixture_counts(schema, name, kind, count):
    doc = parse_turtle((FIXTURES / name).read_text(encoding="utf-8"))
    report = validate(doc.graph, schema)
    assert len(report.violations) == count
    assert all(v.kind == kind for v in report.violations)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_violations_monotone_under_property_triple_addition(schema, data):
    names = ["n1", "n2", "n3"]
    classes = ["Individual", "Community", "Role", "Resource"]
    g = Graph()
    for name in names:
        if data.draw(st.booleans()):
            _typed(g, name, data.draw(st.sampled_from(classes)))
    props = ["isMemberOf", "plays", "isUsedBy"]
    for _ in range(data.draw(st.integers(0, 4))):
        g.add(
            Triple(
                _i(data.draw(st.sampled_from(names))),
                Iri(_c(data.draw(st.sampled_from(props)))),
                _i(data.draw(st.sampled_from(names))),
            )
        )
    before = validate(g, schema)
    g2 = g.copy()
    g2.add(
        Triple(
            _i(data.draw(st.sampled_from(names))),
            Iri(_c(data.draw(st.sampled_from(props)))),
            _i(data.draw(st.sampled_from(names))),
        )
    )
    after = validate(g2, schema)
    assert len(after.violations) >= len(before.violations)
