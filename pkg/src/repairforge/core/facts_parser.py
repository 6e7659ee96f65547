import logging
from typing import TextIO

from src.repairforge.core.grammar import (
    FACTS_GRAMMAR,
    ValueTransformer,
    parse_text,
    read_source,
)
from src.repairforge.core.model import Database, Fact
from src.repairforge.errors import ArityMismatchError, FactsSyntaxError


class _FactsTransformer(ValueTransformer):
    def fact(self, children):
        fact, line, column = children[0]
        return ("fact", fact, line, column)

    def start(self, children):
        return children


def parse_facts(source: str | TextIO) -> Database:
    """Reads a facts file into a Database.

    Duplicate facts collapse. Arity comes from a `#relation` header when one
    precedes the first fact of a relation, otherwise from that first fact.
    """
    items = parse_text(
        read_source(source),
        FACTS_GRAMMAR,
        _FactsTransformer(FactsSyntaxError),
        FactsSyntaxError,
    )
    schema: dict[str, int] = {}
    facts: set[Fact] = set()
    duplicates = 0
    for item in items:
        if item[0] == "header":
            _, relation, arity, line, column = item
            _declare(schema, relation, arity, line, column)
            continue
        _, fact, line, column = item
        _declare(schema, fact.relation, fact.arity, line, column)
        if fact in facts:
            duplicates += 1
        facts.add(fact)
    if duplicates:
        logging.debug("parse_facts: collapsed %d duplicate facts", duplicates)
    return Database(frozenset(facts), schema)


def _declare(schema: dict[str, int], relation: str, arity: int, line: int, column: int):
    expected = schema.setdefault(relation, arity)
    if expected != arity:
        raise ArityMismatchError(relation, expected, arity, line, column)


def serialize_facts(db: Database) -> str:
    """Renders a Database in the facts-file format, headers first."""
    lines = [f"#relation {name}/{db.schema[name]}." for name in db.relations]
    lines.extend(f"{fact}." for fact in db)
    return "\n".join(lines) + "\n" if lines else ""
