"""Plain-word query sketches turned into runnable SQL.

The grammar is deliberately tiny and documented in the cheat sheet below:
one verb, a projection list or "all", a source table, and optional where /
grouped by / sorted by clauses. Unknown tables or columns do not fail the
generation; they come back as warnings, because the user may be sketching
a schema that does not exist yet.
"""

from __future__ import annotations

from dataclasses import dataclass

from pgstudio.catalog.model import SchemaCatalog
from pgstudio.graph.properties import parse_value
from pgstudio.sqlast import CanonicalSql, render_select
from pgstudio.sqlast.nodes import (
    STAR,
    BaseTable,
    BinaryOp,
    ColumnRef,
    OrderItem,
    SelectItem,
    SelectQuery,
    and_join,
)

PSEUDOCODE_CHEAT_SHEET = (
    "Write one line that reads like a request:\n"
    "  get name, age from customers where age greater than 30\n"
    "  show all from orders sorted by total descending\n"
    "  list city from customers grouped by city\n"
    "Verbs: get, show, find, list. Comparisons: greater than, less than, "
    "equals, is, not. Combine filters with and; quote text values like "
    "'New York'."
)

VERBS = ("get", "show", "find", "list")

_COMPARATORS = {
    ("greater", "than"): ">",
    ("less", "than"): "<",
    ("is", "not"): "<>",
    ("equals",): "=",
    ("is",): "=",
    ("not",): "<>",
}


class UnrecognizedPseudocode(Exception):
    """A word the grammar cannot place, plus the grammar itself."""

    def __init__(self, word: str) -> None:
        self.word = word
        self.cheat_sheet = PSEUDOCODE_CHEAT_SHEET
        super().__init__(
            f'Could not understand "{word}".\n{PSEUDOCODE_CHEAT_SHEET}'
        )


@dataclass(frozen=True)
class PseudoQuery:
    """A recognized sketch. projections is the word "all" or column words."""

    action: str
    projections: tuple[str, ...] | str
    source: str
    filters: tuple[tuple[str, str, str], ...] = ()
    sort: tuple[str, str] | None = None
    grouping: str | None = None


@dataclass(frozen=True)
class PseudocodeResult:
    sql: CanonicalSql
    query: SelectQuery
    warnings: tuple[str, ...]


def parse_pseudocode(text: str) -> PseudoQuery:
    words = text.replace(",", " ").split()
    if not words:
        raise UnrecognizedPseudocode("(nothing)")
    reader = _Reader(words)

    verb = reader.take()
    if verb.lower() not in VERBS:
        raise UnrecognizedPseudocode(verb)

    projections = _read_projections(reader)
    reader.expect("from")
    source = reader.take_name("a table name")

    filters: list[tuple[str, str, str]] = []
    sort: tuple[str, str] | None = None
    grouping: str | None = None
    while not reader.done():
        word = reader.take()
        lowered = word.lower()
        if lowered == "where" and not filters:
            filters.append(_read_filter(reader))
            while reader.peek() == "and":
                reader.take()
                filters.append(_read_filter(reader))
        elif lowered in ("sorted", "ordered") and sort is None:
            reader.expect("by")
            column = reader.take_name("a column to sort by")
            direction = "ascending"
            if reader.peek() in ("ascending", "descending"):
                direction = reader.take().lower()
            sort = (column, direction)
        elif lowered == "grouped" and grouping is None:
            reader.expect("by")
            grouping = reader.take_name("a column to group by")
        else:
            raise UnrecognizedPseudocode(word)

    return PseudoQuery(
        action="select",
        projections=projections,
        source=source,
        filters=tuple(filters),
        sort=sort,
        grouping=grouping,
    )


def generate_from_pseudocode(
    pq: PseudoQuery, catalog: SchemaCatalog
) -> PseudocodeResult:
    warnings: list[str] = []
    table = catalog.resolve_table(pq.source)
    if table is None:
        warnings.append(f'Table "{pq.source}" not found in catalog.')
    known = set(table.column_names()) if table is not None else None

    def check(column: str) -> None:
        if known is not None and column not in known:
            warnings.append(
                f'Column "{column}" not found in table "{pq.source}".'
            )

    if pq.projections == "all":
        select: object = STAR
    else:
        for name in pq.projections:
            check(name)
        select = tuple(SelectItem(ColumnRef(name)) for name in pq.projections)

    where_parts = []
    for column, operator, value in pq.filters:
        check(column)
        where_parts.append(
            BinaryOp(operator, ColumnRef(column), parse_value(value, ()))
        )

    group_by: tuple = ()
    if pq.grouping is not None:
        check(pq.grouping)
        group_by = (ColumnRef(pq.grouping),)

    order_by: tuple = ()
    if pq.sort is not None:
        column, direction = pq.sort
        check(column)
        order_by = (OrderItem(ColumnRef(column), descending=direction == "descending"),)

    query = SelectQuery(
        select=select,
        from_table=BaseTable(pq.source),
        where=and_join(where_parts),
        group_by=group_by,
        order_by=order_by,
    )
    return PseudocodeResult(
        sql=render_select(query), query=query, warnings=tuple(warnings)
    )


class _Reader:
    def __init__(self, words: list[str]) -> None:
        self.words = words
        self.at = 0

    def done(self) -> bool:
        return self.at >= len(self.words)

    def peek(self) -> str | None:
        if self.done():
            return None
        return self.words[self.at].lower()

    def take(self) -> str:
        if self.done():
            raise UnrecognizedPseudocode("(end of text)")
        word = self.words[self.at]
        self.at += 1
        return word

    def take_name(self, wanted: str) -> str:
        if self.done():
            raise UnrecognizedPseudocode(f"(end of text, expected {wanted})")
        return self.take().lower()

    def expect(self, keyword: str) -> None:
        word = self.take()
        if word.lower() != keyword:
            raise UnrecognizedPseudocode(word)

    def take_value(self) -> str:
        """One value word, or a quoted run of words joined back together."""
        word = self.take()
        if word.startswith("'") and not (word.endswith("'") and len(word) > 1):
            parts = [word]
            while True:
                parts.append(self.take())
                if parts[-1].endswith("'"):
                    return " ".join(parts)
        return word


def _read_projections(reader: _Reader) -> tuple[str, ...] | str:
    words: list[str] = []
    while reader.peek() not in (None, "from"):
        words.append(reader.take().lower())
    if not words:
        raise UnrecognizedPseudocode(reader.peek() or "(end of text)")
    if words == ["all"]:
        return "all"
    return tuple(words)


def _read_filter(reader: _Reader) -> tuple[str, str, str]:
    column = reader.take_name("a column to filter on")
    first = reader.take().lower()
    second = reader.peek()
    if (first, second) in _COMPARATORS:
        reader.take()
        operator = _COMPARATORS[(first, second)]
    elif (first,) in _COMPARATORS:
        operator = _COMPARATORS[(first,)]
    else:
        raise UnrecognizedPseudocode(first)
    return (column, operator, reader.take_value())
