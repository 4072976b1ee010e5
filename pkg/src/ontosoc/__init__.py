"""Schema-aware sociocultural knowledge-base engine.

Triple store, Turtle IO, the OntoSOC schema and its derivation pipeline,
instance validation, a SPARQL subset, a CLI and an HTTP service.
"""

from .rdf import Blank, Graph, Iri, Literal, PrefixMap, Triple, graph_equal
from .schema import SchemaDef, builtin_schema, schema_from_graph, schema_to_graph
from .sparql import evaluate, parse_query, to_json_results
from .turtle import Document, ParseError, parse_turtle, serialize_turtle
from .validation import ValidationReport, validate

__version__ = "0.1.0"

__all__ = [
    "Blank",
    "Document",
    "Graph",
    "Iri",
    "Literal",
    "ParseError",
    "PrefixMap",
    "SchemaDef",
    "Triple",
    "ValidationReport",
    "builtin_schema",
    "evaluate",
    "graph_equal",
    "parse_query",
    "parse_turtle",
    "schema_from_graph",
    "schema_to_graph",
    "serialize_turtle",
    "to_json_results",
    "validate",
]
