"""Seeded random databases and the bag-equivalence check for rewrites.

The generator is deliberately collision-happy: values are drawn from tiny
pools so duplicates, NULL handling and empty groups actually get exercised
within a few trials. Trial 0 is always the all-empty database and trial 1
repeats a single row wherever constraints allow, because those are the two
shapes that break naive rewrites most often.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from pgstudio.minidb.evaluate import EvalError, eval_select
from pgstudio.minidb.relation import MiniDb, Relation, bags_equal
from pgstudio.sqlast.nodes import SelectQuery

MAX_ROWS = 20

_TEXT_POOL = ["ada", "bo", "cy", "dee"]
_FLOAT_POOL = [0.0, 0.5, 1.0, 2.5]


@dataclass(frozen=True)
class ColumnProfile:
    name: str
    kind: str = "int"  # int | text | float | bool
    nullable: bool = True
    unique: bool = False


@dataclass(frozen=True)
class TableProfile:
    name: str
    columns: tuple[ColumnProfile, ...]


@dataclass
class EquivalenceVerdict:
    equivalent: bool
    trials_run: int
    counterexample: MiniDb | None = None
    left_rows: list | None = None
    right_rows: list | None = None
    detail: str = ""


def profiles_from_catalog(catalog, table_names=None) -> tuple[TableProfile, ...]:
    """Derive generator profiles from catalog table definitions."""
    from pgstudio.catalog.datatypes import describe_data_type
    from pgstudio.catalog.errors import UnknownDataType
    from pgstudio.catalog.model import ConstraintKind

    profiles = []
    names = table_names if table_names is not None else [
        t.name for _, t in sorted(catalog.tables.items())
    ]
    for name in names:
        table = catalog.resolve_table(name)
        if table is None:
            continue
        unique_nn = catalog.unique_not_null_columns(table.name)
        columns = []
        for column in table.columns:
            try:
                category = describe_data_type(column.data_type).category
            except UnknownDataType:
                category = "other"
            kind = {
                "numeric": "int",
                "serial": "int",
                "character": "text",
                "boolean": "bool",
            }.get(category, "int")
            if column.data_type.strip().lower() in ("real", "double precision"):
                kind = "float"
            not_null = column.has(ConstraintKind.NOT_NULL) or category == "serial"
            columns.append(
                ColumnProfile(
                    name=column.name,
                    kind=kind,
                    nullable=not not_null,
                    unique=column.name.lower() in unique_nn,
                )
            )
        profiles.append(TableProfile(name=table.name, columns=tuple(columns)))
    return tuple(profiles)


def _value(rng: random.Random, kind: str):
    if kind == "int":
        return rng.randint(0, 5)
    if kind == "float":
        return rng.choice(_FLOAT_POOL)
    if kind == "text":
        return rng.choice(_TEXT_POOL)
    if kind == "bool":
        return rng.choice([True, False])
    return rng.randint(0, 5)


def _unique_values(rng: random.Random, kind: str, count: int) -> list:
    if kind == "int":
        return rng.sample(range(0, max(count * 3, 10)), count)
    if kind == "float":
        base = rng.sample(range(0, max(count * 3, 10)), count)
        return [v + 0.5 for v in base]
    if kind == "text":
        pool = [f"{w}{i}" for i in range(max(count, 1)) for w in _TEXT_POOL]
        return rng.sample(pool, count)
    if kind == "bool":
        if count > 2:
            raise ValueError("cannot generate more than two unique booleans")
        return rng.sample([True, False], count)
    return rng.sample(range(0, max(count * 3, 10)), count)


def generate_db(
    profiles: tuple[TableProfile, ...], rng: random.Random, mode: str = "random"
) -> MiniDb:
    """Build one database. Modes: "empty", "duplicates", "random"."""
    db = MiniDb()
    for profile in profiles:
        # a unique boolean column can only ever hold two distinct rows
        cap = MAX_ROWS
        if any(c.unique and c.kind == "bool" for c in profile.columns):
            cap = 2
        if mode == "empty":
            size = 0
        elif mode == "duplicates":
            size = min(rng.randint(2, 6), cap)
        else:
            size = rng.randint(0, min(MAX_ROWS, cap))

        columns = tuple(c.name for c in profile.columns)
        rows: list[tuple] = []
        if mode == "duplicates" and size:
            # one row repeated; unique columns still get distinct values
            template = [
                None
                if (c.nullable and rng.random() < 0.3)
                else _value(rng, c.kind)
                for c in profile.columns
            ]
            unique_pools = {
                i: _unique_values(rng, c.kind, size)
                for i, c in enumerate(profile.columns)
                if c.unique
            }
            for row_index in range(size):
                row = list(template)
                for i, pool in unique_pools.items():
                    row[i] = pool[row_index]
                rows.append(tuple(row))
        else:
            unique_pools = {
                i: _unique_values(rng, c.kind, size)
                for i, c in enumerate(profile.columns)
                if c.unique
            }
            for row_index in range(size):
                row = []
                for i, column in enumerate(profile.columns):
                    if i in unique_pools:
                        row.append(unique_pools[i][row_index])
                    elif column.nullable and rng.random() < 0.15:
                        row.append(None)
                    else:
                        row.append(_value(rng, column.kind))
                rows.append(tuple(row))
        db.put(profile.name, Relation(columns, rows))
    return db


def assert_equivalent(
    query_a: SelectQuery,
    query_b: SelectQuery,
    profiles: tuple[TableProfile, ...],
    seed: int = 0,
    trials: int = 100,
) -> EquivalenceVerdict:
    """Run both queries over seeded random databases and compare bags.

    Returns a verdict instead of raising so callers can inspect the
    counterexample database. Deterministic for a given (seed, trials).
    """
    rng = random.Random(seed)
    for trial in range(trials):
        if trial == 0:
            mode = "empty"
        elif trial == 1:
            mode = "duplicates"
        else:
            mode = "random"
        db = generate_db(profiles, rng, mode)
        try:
            left = eval_select(query_a, db)
            right = eval_select(query_b, db)
        except EvalError as error:
            return EquivalenceVerdict(
                equivalent=False,
                trials_run=trial + 1,
                counterexample=db,
                detail=f"trial {trial}: {error}",
            )
        if not bags_equal(left, right):
            return EquivalenceVerdict(
                equivalent=False,
                trials_run=trial + 1,
                counterexample=db,
                left_rows=left.rows,
                right_rows=right.rows,
                detail=f"trial {trial}: results differ",
            )
    return EquivalenceVerdict(equivalent=True, trials_run=trials)
