"""Context-menu actions offered for each kind of schema object.

The lists are fixed on the server so every client shows the same menu and
the UI never has to invent operations.
"""

from __future__ import annotations


class UnknownObjectKind(Exception):
    def __init__(self, kind: str) -> None:
        self.kind = kind
        known = ", ".join(sorted(_ACTIONS))
        super().__init__(f"No context actions exist for {kind!r}. Known kinds: {known}.")


# (action id, menu label) pairs, in menu order
_ACTIONS: dict[str, tuple[tuple[str, str], ...]] = {
    "database": (
        ("create_table", "Create new table"),
        ("view_tables", "View existing tables"),
        ("drop_database", "Drop database"),
    ),
    "schema": (
        ("create_table", "Create table in schema"),
        ("view_tables", "View tables"),
        ("drop_schema", "Drop schema"),
    ),
    "table": (
        ("add_column", "Add column"),
        ("view_columns", "View columns"),
        ("drop_table", "Drop table"),
    ),
    "column": (
        ("describe_type", "Explain data type"),
        ("drop_column", "Drop column"),
    ),
    "index": (
        ("view_definition", "View definition"),
        ("drop_index", "Drop index"),
    ),
}


def context_actions(kind: str) -> list[dict[str, str]]:
    """Menu entries for a right click on one object, as {id, label} dicts."""
    key = kind.strip().lower()
    if key not in _ACTIONS:
        raise UnknownObjectKind(kind)
    return [{"id": action_id, "label": label} for action_id, label in _ACTIONS[key]]


def object_kinds() -> tuple[str, ...]:
    return tuple(sorted(_ACTIONS))
