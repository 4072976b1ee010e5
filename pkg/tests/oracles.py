"""Independent brute-force oracles the implementation is checked against.

These stay deliberately naive: linear scans and exhaustive enumeration,
with no use of the engine's indexes or join machinery.
"""

from itertools import product

from ontosoc.rdf import Blank, Graph, Iri, Literal, Term, Triple
from ontosoc.sparql import TriplePattern, Var


def brute_force_match(graph: Graph, s=None, p=None, o=None) -> set[Triple]:
    """Linear-scan filter over all triples."""
    out = set()
    for t in graph:
        if s is not None and t.subject != s:
            continue
        if p is not None and t.predicate != p:
            continue
        if o is not None and t.object != o:
            continue
        out.add(t)
    return out


def _graph_terms(graph: Graph) -> list[Term]:
    terms = set()
    for t in graph:
        terms.update((t.subject, t.predicate, t.object))
    return sorted(terms, key=lambda t: t.n3())


def brute_force_bgp(graph: Graph, patterns: list[TriplePattern]) -> set[frozenset]:
    """Enumerate every assignment of pattern variables over graph terms
    and keep those under which all patterns are triples of the graph."""
    variables = sorted({v for p in patterns for v in p.variables()})
    terms = _graph_terms(graph)
    if not variables:
        ok = all(_grounded(p, {}) in graph for p in patterns)
        return {frozenset()} if ok else set()
    solutions = set()
    for assignment in product(terms, repeat=len(variables)):
        binding = dict(zip(variables, assignment))
        grounded = [_grounded(p, binding) for p in patterns]
        if all(g is not None and g in graph for g in grounded):
            solutions.add(frozenset(binding.items()))
    return solutions


def _grounded(pattern: TriplePattern, binding: dict):
    def sub(slot):
        return binding[slot.name] if isinstance(slot, Var) else slot

    s, p, o = sub(pattern.subject), sub(pattern.predicate), sub(pattern.object)
    if isinstance(s, Literal) or not isinstance(p, Iri):
        return None
    return Triple(s, p, o)


def brute_force_violation_count(graph: Graph, schema) -> int:
    """Re-count violations by scanning every triple against the signature
    table and every typed node against the disjointness axioms."""
    from ontosoc.rdf import RDF_TYPE

    vocab = {
        "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
        "http://www.w3.org/2000/01/rdf-schema#subClassOf",
        "http://www.w3.org/2000/01/rdf-schema#domain",
        "http://www.w3.org/2000/01/rdf-schema#range",
        "http://www.w3.org/2000/01/rdf-schema#label",
        "http://www.w3.org/2002/07/owl#disjointWith",
        "http://www.w3.org/2002/07/owl#equivalentClass",
        "http://www.w3.org/2002/07/owl#equivalentProperty",
    }
    class_iris = schema.class_iris()

    def types_of(node) -> set[str]:
        found = set()
        for t in graph:
            if (
                t.subject == node
                and t.predicate.value == RDF_TYPE
                and isinstance(t.object, Iri)
                and t.object.value in class_iris
            ):
                for sup in schema.superclass_closure(t.object.value):
                    found.add(sup)
        return found

    count = 0
    for t in graph:
        if t.predicate.value in vocab:
            continue
        sigs = schema.signatures_for(t.predicate.value)
        if not sigs:
            continue
        s_types = types_of(t.subject)
        o_types = types_of(t.object) if not isinstance(t.object, Literal) else set()
        fits = [
            (sig.domain in s_types)
            and (not isinstance(t.object, Literal) and sig.range in o_types)
            for sig in sigs
        ]
        if any(fits):
            continue
        best = max(sigs, key=lambda sig: (sig.domain in s_types) + (not isinstance(t.object, Literal) and sig.range in o_types))
        if best.domain not in s_types:
            count += 1
        if isinstance(t.object, Literal) or best.range not in o_types:
            count += 1

    typed = {t.subject for t in graph if t.predicate.value == RDF_TYPE}
    for node in typed:
        types = types_of(node)
        for ax in schema.disjointness:
            if ax.class_a in types and ax.class_b in types:
                count += 1
    return count
