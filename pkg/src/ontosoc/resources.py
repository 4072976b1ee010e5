"""Access to the packaged default data: decision table, corpus, query."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .turtle import Document, parse_turtle


def _data_root() -> Path:
    return Path(str(resources.files("ontosoc") / "data"))


def decision_table_path() -> Path:
    return _data_root() / "decisions.txt"


def load_decision_table():
    from .hat import parse_decision_table

    return parse_decision_table(decision_table_path().read_text(encoding="utf-8"))


def corpus_paths() -> list[Path]:
    return sorted((_data_root() / "corpus").glob("*.ttl"))


def load_corpus() -> Document:
    """The three use-case files merged into one document."""
    merged = Document()
    for path in corpus_paths():
        doc = parse_turtle(path.read_text(encoding="utf-8"))
        for label, ns in doc.prefixes.items():
            merged.prefixes.declare(label, ns)
        merged.graph.update(doc.graph)
    return merged


def community_activities_query_path() -> Path:
    return _data_root() / "community_activities.rq"


def community_activities_query() -> str:
    """The shipped community/activity/role/resource report query."""
    return community_activities_query_path().read_text(encoding="utf-8")
