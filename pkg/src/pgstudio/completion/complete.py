"""Context-sensitive completion for half-typed statements.

Works line-locally: the text up to the cursor is scanned for the most recent
clause keyword, and that clause decides what gets offered (columns after
SELECT, tables after FROM, columns then comparison operators after WHERE).
No parse is attempted, so completion keeps working on text that does not
parse yet.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from pgstudio.catalog.model import SchemaCatalog, TableDef

RANK_COLUMN = 10
RANK_STAR = 20
RANK_FUNCTION = 30
RANK_OPERATOR = 40
RANK_KEYWORD = 50

_AGGREGATES = {
    "COUNT": "Aggregate: counts the rows in each group.",
    "SUM": "Aggregate: adds up a column over each group.",
    "AVG": "Aggregate: averages a column over each group.",
    "MIN": "Aggregate: the smallest value in each group.",
    "MAX": "Aggregate: the largest value in each group.",
}

_OPERATORS = {
    "=": "Keeps rows where both sides are equal.",
    "<>": "Keeps rows where the sides differ.",
    "<": "Keeps rows where the left side is smaller.",
    "<=": "Keeps rows where the left side is smaller or equal.",
    ">": "Keeps rows where the left side is larger.",
    ">=": "Keeps rows where the left side is larger or equal.",
}

_CLAUSE_KEYWORDS = {
    "WHERE": "Filters rows before any grouping happens.",
    "GROUP BY": "Groups rows so aggregates summarize each group.",
    "HAVING": "Filters the groups built by GROUP BY.",
    "ORDER BY": "Sorts the result rows.",
    "UNION": "Appends another query's rows, removing duplicates.",
}

_WORD_AT_END = re.compile(r"[\w.*]+$")
_WORD_SPLIT = re.compile(r"[,\s()]+")


@dataclass(frozen=True)
class CompletionCandidate:
    text: str
    kind: str  # keyword | table | column | function | snippet
    rank: int
    explanation: str


def replacement_start(text: str, cursor: int) -> int:
    """Offset where the word under the cursor begins; candidates replace
    text[replacement_start:cursor]."""
    line_start = text.rfind("\n", 0, cursor) + 1
    line = text[line_start:cursor]
    match = _WORD_AT_END.search(line)
    return line_start + (match.start() if match else len(line))


def complete(text: str, cursor: int, catalog: SchemaCatalog) -> list[CompletionCandidate]:
    if not 0 <= cursor <= len(text):
        raise ValueError(f"cursor {cursor} is outside the text (length {len(text)})")

    start = replacement_start(text, cursor)
    prefix = text[start:cursor].lower()
    line_start = text.rfind("\n", 0, cursor) + 1
    words = [w.lower() for w in _WORD_SPLIT.split(text[line_start:start]) if w]

    pool = _candidates_for_context(words, catalog)
    seen: set[str] = set()
    out = []
    for candidate in pool:
        if candidate.text.lower().startswith(prefix) and candidate.text not in seen:
            seen.add(candidate.text)
            out.append(candidate)
    out.sort(key=lambda c: (c.rank, c.text))
    return out


def _candidates_for_context(
    words: list[str], catalog: SchemaCatalog
) -> list[CompletionCandidate]:
    if not words:
        return [CompletionCandidate(
            "SELECT", "keyword", RANK_KEYWORD, "Starts a query that reads rows."
        )]

    clause, tail = _last_clause(words)
    scope = _scope_columns(words, catalog)

    if clause in ("group", "order") :
        # "GROUP" or "ORDER" typed without its BY yet
        return [CompletionCandidate(
            "BY", "keyword", RANK_KEYWORD, f"Completes {clause.upper()} BY."
        )]
    if clause == "select":
        return (
            _column_candidates(scope)
            + [CompletionCandidate("*", "snippet", RANK_STAR, "Every column of the table.")]
            + _function_candidates(RANK_FUNCTION)
        )
    if clause == "from":
        if tail:  # a table is already named; offer what may follow it
            return [
                CompletionCandidate(word, "keyword", RANK_KEYWORD, explanation)
                for word, explanation in _CLAUSE_KEYWORDS.items()
            ]
        return _table_candidates(catalog)
    if clause == "where":
        return _column_candidates(scope) + _operator_candidates()
    if clause == "having":
        return (
            _function_candidates(RANK_COLUMN)
            + _column_candidates(scope, rank=RANK_STAR)
            + _operator_candidates()
        )
    if clause in ("group by", "order by"):
        return _column_candidates(scope)
    if clause == "union":
        return [
            CompletionCandidate(
                "SELECT", "keyword", RANK_KEYWORD, "Starts the query after UNION."
            ),
            CompletionCandidate(
                "ALL", "keyword", RANK_KEYWORD,
                "UNION ALL keeps duplicate rows instead of removing them.",
            ),
        ]
    return []


def _last_clause(words: list[str]) -> tuple[str | None, list[str]]:
    """The most recent clause marker and the words typed after it."""
    for i in range(len(words) - 1, -1, -1):
        word = words[i]
        if word == "by" and i > 0 and words[i - 1] in ("group", "order"):
            return f"{words[i - 1]} by", words[i + 1:]
        if word in ("select", "from", "where", "having", "union", "group", "order"):
            return word, words[i + 1:]
    return None, words


def _scope_columns(words: list[str], catalog: SchemaCatalog) -> dict[str, list[str]]:
    """column name -> owning tables; from the named FROM table when it
    resolves, otherwise from the whole catalog."""
    tables: list[TableDef] = []
    for i, word in enumerate(words):
        if word == "from" and i + 1 < len(words):
            resolved = catalog.resolve_table(words[i + 1])
            if resolved is not None:
                tables = [resolved]
    if not tables:
        tables = [catalog.resolve_table(name) for name in catalog.table_names()]
    columns: dict[str, list[str]] = {}
    for table in tables:
        for name in table.column_names():
            columns.setdefault(name, []).append(table.name)
    return columns


def _column_candidates(
    columns: dict[str, list[str]], rank: int = RANK_COLUMN
) -> list[CompletionCandidate]:
    out = []
    for name, owners in columns.items():
        if len(owners) == 1:
            explanation = f"Column of {owners[0]}."
        else:
            explanation = f"Column found in {len(owners)} tables."
        out.append(CompletionCandidate(name, "column", rank, explanation))
    return out


def _table_candidates(catalog: SchemaCatalog) -> list[CompletionCandidate]:
    out = []
    for name in catalog.table_names():
        table = catalog.resolve_table(name)
        out.append(CompletionCandidate(
            name, "table", RANK_COLUMN,
            f"Table with {len(table.columns)} columns.",
        ))
    return out


def _function_candidates(rank: int) -> list[CompletionCandidate]:
    return [
        CompletionCandidate(name, "function", rank, explanation)
        for name, explanation in _AGGREGATES.items()
    ]


def _operator_candidates() -> list[CompletionCandidate]:
    return [
        CompletionCandidate(symbol, "snippet", RANK_OPERATOR, explanation)
        for symbol, explanation in _OPERATORS.items()
    ]
