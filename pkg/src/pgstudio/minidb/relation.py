"""Relations as bags of tuples."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

Scalar = Any  # int | float | str | bool | None


@dataclass
class Relation:
    columns: tuple[str, ...]
    rows: list[tuple[Scalar, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(set(self.columns)) != len(self.columns):
            raise ValueError(f"duplicate column names in {self.columns}")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row {row!r} has {len(row)} values for {len(self.columns)} columns"
                )

    @classmethod
    def from_rows(cls, columns: list[str] | tuple[str, ...], rows) -> "Relation":
        return cls(tuple(columns), [tuple(r) for r in rows])

    def to_dicts(self) -> list[dict[str, Scalar]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def bag_of(relation: Relation) -> Counter:
    return Counter(relation.rows)


def bags_equal(a: Relation, b: Relation) -> bool:
    """Same multiset of rows; column names and row order are ignored."""
    if len(a.columns) != len(b.columns):
        return False
    return bag_of(a) == bag_of(b)


@dataclass
class MiniDb:
    tables: dict[str, Relation] = field(default_factory=dict)

    def table(self, name: str) -> Relation | None:
        return self.tables.get(name.lower())

    def put(self, name: str, relation: Relation) -> None:
        self.tables[name.lower()] = relation

    def to_fixture(self) -> dict:
        return {
            "tables": [
                {"name": name, "columns": list(rel.columns), "rows": [list(r) for r in rel.rows]}
                for name, rel in sorted(self.tables.items())
            ]
        }

    @classmethod
    def from_fixture(cls, doc: dict) -> "MiniDb":
        db = cls()
        for table in doc.get("tables", []):
            db.put(table["name"], Relation.from_rows(table["columns"], table["rows"]))
        return db

    def dump_json(self) -> str:
        return json.dumps(self.to_fixture(), indent=2, sort_keys=True)

    @classmethod
    def load_json(cls, text: str) -> "MiniDb":
        return cls.from_fixture(json.loads(text))
