"""Catalog object definitions, their validators, and the catalog itself.

Validators return a ValidationResult rather than raising, so callers can
show every problem at once. The mutating add_* methods raise
InvalidDefinition on the first failed validation and leave the catalog
untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from pgstudio.catalog.datatypes import is_registered, nearest_type_name
from pgstudio.catalog.errors import DuplicateObject, InvalidDefinition
from pgstudio.catalog.identifiers import validate_identifier
from pgstudio.catalog.validation import ValidationResult, Violation
from pgstudio.sqlast.nodes import Expr


class ConstraintKind(Enum):
    NOT_NULL = "not_null"
    UNIQUE = "unique"
    CHECK = "check"
    FOREIGN_KEY = "foreign_key"
    EXCLUSION = "exclusion"


class IndexMethod(Enum):
    BTREE = "btree"
    HASH = "hash"
    GIST = "gist"
    GIN = "gin"


UNIQUE_CAPABLE_METHODS = frozenset({IndexMethod.BTREE})


class TriggerTiming(Enum):
    BEFORE = "BEFORE"
    AFTER = "AFTER"
    INSTEAD_OF = "INSTEAD OF"


class TriggerEvent(Enum):
    INSERT = "INSERT"
    UPDATE = "UPDATE"
    DELETE = "DELETE"


@dataclass(frozen=True)
class ConstraintDef:
    kind: ConstraintKind
    # Table-level constraints name the columns they cover; column-level ones
    # leave this empty because they attach to their column directly.
    columns: tuple[str, ...] = ()
    check_expression: Expr | None = None
    referenced_table: str | None = None
    referenced_columns: tuple[str, ...] = ()
    exclusion_operator: str | None = None


@dataclass(frozen=True)
class ColumnDef:
    name: str
    data_type: str
    constraints: tuple[ConstraintDef, ...] = ()

    def has(self, kind: ConstraintKind) -> bool:
        return any(c.kind is kind for c in self.constraints)


@dataclass(frozen=True)
class DatabaseDef:
    name: str
    owner: str | None = None
    template: str | None = None
    lc_collate: str | None = None
    lc_ctype: str | None = None
    connection_limit: int = -1  # -1 means unlimited
    description: str | None = None


@dataclass(frozen=True)
class TableDef:
    name: str
    schema: str = "public"
    columns: tuple[ColumnDef, ...] = ()
    constraints: tuple[ConstraintDef, ...] = ()
    description: str | None = None

    @property
    def key(self) -> str:
        return f"{self.schema.lower()}.{self.name.lower()}"

    def column(self, name: str) -> ColumnDef | None:
        wanted = name.lower()
        for col in self.columns:
            if col.name.lower() == wanted:
                return col
        return None

    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


@dataclass(frozen=True)
class IndexColumn:
    name: str
    descending: bool = False


@dataclass(frozen=True)
class IndexDef:
    name: str
    table: str
    columns: tuple[IndexColumn, ...]
    method: IndexMethod = IndexMethod.BTREE
    unique: bool = False


@dataclass(frozen=True)
class TriggerDef:
    name: str
    timing: TriggerTiming
    event: TriggerEvent
    target: str
    function_name: str
    target_is_view: bool = False


# --- validators --------------------------------------------------------------


def _identifier_violations(name: str, field_name: str) -> tuple[Violation, ...]:
    return validate_identifier(name, field=field_name).violations


def validate_database(definition: DatabaseDef) -> ValidationResult:
    violations = list(_identifier_violations(definition.name, "name"))
    if definition.owner is not None:
        violations.extend(_identifier_violations(definition.owner, "owner"))
    if definition.template is not None:
        violations.extend(_identifier_violations(definition.template, "template"))
    if definition.connection_limit < -1:
        violations.append(
            Violation(
                code="bad_connection_limit",
                message="The connection limit must be -1 (unlimited) or a non-negative number.",
                field="connection_limit",
            )
        )
    return ValidationResult(tuple(violations))


def validate_table(
    definition: TableDef, catalog: "SchemaCatalog | None" = None
) -> ValidationResult:
    violations = list(_identifier_violations(definition.name, "name"))
    violations.extend(_identifier_violations(definition.schema, "schema"))

    if not definition.columns:
        violations.append(
            Violation(
                code="no_columns",
                message="A table needs at least one column.",
                field="columns",
            )
        )

    seen: set[str] = set()
    declared: set[str] = set()
    for column in definition.columns:
        violations.extend(_identifier_violations(column.name, f"columns.{column.name}"))
        lowered = column.name.lower()
        if lowered in seen:
            violations.append(
                Violation(
                    code="duplicate_column",
                    message=f'The column name "{column.name}" is used more than once.',
                    field=f"columns.{column.name}",
                    hint="give every column a distinct name",
                )
            )
        seen.add(lowered)
        declared.add(lowered)
        if not is_registered(column.data_type):
            suggestion = nearest_type_name(column.data_type.strip().lower())
            hint = f'did you mean "{suggestion}"?' if suggestion else None
            violations.append(
                Violation(
                    code="unknown_data_type",
                    message=f'"{column.data_type}" is not a known data type.',
                    field=f"columns.{column.name}",
                    hint=hint,
                )
            )
        violations.extend(_column_constraint_violations(column))

    for constraint in definition.constraints:
        violations.extend(_table_constraint_violations(constraint, declared, catalog))

    return ValidationResult(tuple(violations))


def _column_constraint_violations(column: ColumnDef) -> list[Violation]:
    out: list[Violation] = []
    for constraint in column.constraints:
        if constraint.columns:
            out.append(
                Violation(
                    code="misplaced_constraint",
                    message=(
                        f'The constraint on column "{column.name}" names other columns; '
                        "multi-column constraints belong at the table level."
                    ),
                    field=f"columns.{column.name}",
                )
            )
        if constraint.kind is ConstraintKind.CHECK and constraint.check_expression is None:
            out.append(
                Violation(
                    code="missing_check_expression",
                    message=f'The CHECK constraint on "{column.name}" has no condition.',
                    field=f"columns.{column.name}",
                )
            )
        if constraint.kind is ConstraintKind.FOREIGN_KEY and not constraint.referenced_table:
            out.append(
                Violation(
                    code="missing_reference",
                    message=f'The foreign key on "{column.name}" does not say which table it points to.',
                    field=f"columns.{column.name}",
                )
            )
        if constraint.kind is ConstraintKind.EXCLUSION:
            out.append(
                Violation(
                    code="misplaced_constraint",
                    message="Exclusion constraints belong at the table level.",
                    field=f"columns.{column.name}",
                )
            )
    return out


def _table_constraint_violations(
    constraint: ConstraintDef, declared: set[str], catalog: "SchemaCatalog | None"
) -> list[Violation]:
    out: list[Violation] = []
    if constraint.kind is ConstraintKind.NOT_NULL:
        # NOT NULL has no table-level spelling in PostgreSQL.
        out.append(
            Violation(
                code="misplaced_constraint",
                message="NOT NULL applies to a single column; set it on the column itself.",
                field="constraints",
            )
        )
        return out
    for name in constraint.columns:
        if name.lower() not in declared:
            out.append(
                Violation(
                    code="unknown_column",
                    message=f'The constraint names "{name}", which is not a column of this table.',
                    field="constraints",
                )
            )
    if not constraint.columns:
        out.append(
            Violation(
                code="missing_columns",
                message="A table-level constraint must say which columns it covers.",
                field="constraints",
            )
        )
    if constraint.kind is ConstraintKind.CHECK and constraint.check_expression is None:
        out.append(
            Violation(
                code="missing_check_expression",
                message="The CHECK constraint has no condition.",
                field="constraints",
            )
        )
    if constraint.kind is ConstraintKind.EXCLUSION and not constraint.exclusion_operator:
        out.append(
            Violation(
                code="missing_operator",
                message="An exclusion constraint needs the operator to compare rows with.",
                field="constraints",
            )
        )
    if constraint.kind is ConstraintKind.FOREIGN_KEY:
        if not constraint.referenced_table:
            out.append(
                Violation(
                    code="missing_reference",
                    message="The foreign key does not say which table it points to.",
                    field="constraints",
                )
            )
        elif catalog is not None:
            target = catalog.resolve_table(constraint.referenced_table)
            if target is None:
                out.append(
                    Violation(
                        code="unknown_table",
                        message=f'The foreign key points at "{constraint.referenced_table}", which does not exist.',
                        field="constraints",
                    )
                )
            else:
                for name in constraint.referenced_columns:
                    if target.column(name) is None:
                        out.append(
                            Violation(
                                code="unknown_column",
                                message=(
                                    f'The foreign key points at "{constraint.referenced_table}.{name}", '
                                    "which does not exist."
                                ),
                                field="constraints",
                            )
                        )
    return out


def validate_index(definition: IndexDef, catalog: "SchemaCatalog") -> ValidationResult:
    violations = list(_identifier_violations(definition.name, "name"))
    ui_hints: dict[str, bool] = {}

    if definition.method not in UNIQUE_CAPABLE_METHODS:
        # The form should not even offer the unique checkbox for these methods.
        ui_hints["hide_unique"] = True

    table = catalog.resolve_table(definition.table)
    if table is None:
        violations.append(
            Violation(
                code="unknown_table",
                message=f'No table named "{definition.table}" exists to index.',
                field="table",
            )
        )
    else:
        for index_column in definition.columns:
            if table.column(index_column.name) is None:
                violations.append(
                    Violation(
                        code="unknown_column",
                        message=(
                            f'"{definition.table}" has no column named "{index_column.name}".'
                        ),
                        field="columns",
                    )
                )
    if not definition.columns:
        violations.append(
            Violation(
                code="missing_columns",
                message="An index needs at least one column.",
                field="columns",
            )
        )

    if definition.unique and definition.method not in UNIQUE_CAPABLE_METHODS:
        violations.append(
            Violation(
                code="unique_unsupported_by_method",
                message=(
                    f'The "{definition.method.value}" index method cannot enforce uniqueness; '
                    'only "btree" can.'
                ),
                field="unique",
                hint='use the "btree" method, or drop the unique requirement',
            )
        )

    return ValidationResult(tuple(violations), ui_hints=ui_hints)


def validate_trigger(
    definition: TriggerDef, catalog: "SchemaCatalog | None" = None
) -> ValidationResult:
    violations = list(_identifier_violations(definition.name, "name"))
    violations.extend(_identifier_violations(definition.function_name, "function_name"))
    if definition.timing is TriggerTiming.INSTEAD_OF and not definition.target_is_view:
        violations.append(
            Violation(
                code="instead_of_needs_view",
                message="INSTEAD OF triggers can only be attached to views.",
                field="timing",
                hint="use BEFORE or AFTER for a table, or point the trigger at a view",
            )
        )
    if catalog is not None and not definition.target_is_view:
        if catalog.resolve_table(definition.target) is None:
            violations.append(
                Violation(
                    code="unknown_table",
                    message=f'No table named "{definition.target}" exists for this trigger.',
                    field="target",
                )
            )
    return ValidationResult(tuple(violations))


# --- the catalog --------------------------------------------------------------


@dataclass
class SchemaCatalog:
    databases: dict[str, DatabaseDef] = field(default_factory=dict)
    schemas: set[str] = field(default_factory=lambda: {"public"})
    tables: dict[str, TableDef] = field(default_factory=dict)
    indexes: dict[str, IndexDef] = field(default_factory=dict)
    triggers: dict[str, TriggerDef] = field(default_factory=dict)

    # -- helpers

    def resolve_table(self, name: str) -> TableDef | None:
        """Find a table by "schema.name" or bare name (public first)."""
        wanted = name.strip().lower()
        if "." in wanted:
            return self.tables.get(wanted)
        public_key = f"public.{wanted}"
        if public_key in self.tables:
            return self.tables[public_key]
        matches = [t for k, t in sorted(self.tables.items()) if k.split(".", 1)[1] == wanted]
        return matches[0] if matches else None

    def table_names(self) -> tuple[str, ...]:
        """Bare names where unambiguous, schema-qualified otherwise."""
        names: list[str] = []
        bare_counts: dict[str, int] = {}
        for key in self.tables:
            bare = key.split(".", 1)[1]
            bare_counts[bare] = bare_counts.get(bare, 0) + 1
        for key, table in sorted(self.tables.items()):
            bare = key.split(".", 1)[1]
            if bare_counts[bare] == 1:
                names.append(table.name)
            else:
                names.append(f"{table.schema}.{table.name}")
        return tuple(names)

    def unique_not_null_columns(self, table_name: str) -> set[str]:
        """Columns provably duplicate-free: UNIQUE and NOT NULL together.

        A UNIQUE column that allows NULL can still repeat (NULLs never
        collide), so uniqueness alone is not enough for rewrites that
        drop DISTINCT.
        """
        table = self.resolve_table(table_name)
        if table is None:
            return set()
        unique: set[str] = set()
        not_null: set[str] = set()
        for column in table.columns:
            if column.has(ConstraintKind.UNIQUE):
                unique.add(column.name.lower())
            if column.has(ConstraintKind.NOT_NULL):
                not_null.add(column.name.lower())
        for constraint in table.constraints:
            if constraint.kind is ConstraintKind.UNIQUE and len(constraint.columns) == 1:
                unique.add(constraint.columns[0].lower())
        for index in self.indexes.values():
            if (
                index.unique
                and index.table.lower() in (table.name.lower(), table.key)
                and len(index.columns) == 1
            ):
                unique.add(index.columns[0].name.lower())
        return unique & not_null

    # -- mutations (validate first, then apply)

    def add_database(self, definition: DatabaseDef) -> None:
        result = validate_database(definition)
        if not result.ok:
            raise InvalidDefinition(result.violations)
        key = definition.name.lower()
        if key in self.databases:
            raise DuplicateObject(f'A database named "{definition.name}" already exists.')
        self.databases[key] = definition

    def remove_database(self, name: str) -> DatabaseDef:
        return self.databases.pop(name.lower())

    def add_schema(self, name: str) -> None:
        result = validate_identifier(name, field="name")
        if not result.ok:
            raise InvalidDefinition(result.violations)
        key = name.lower()
        if key in self.schemas:
            raise DuplicateObject(f'A schema named "{name}" already exists.')
        self.schemas.add(key)

    def remove_schema(self, name: str) -> None:
        self.schemas.discard(name.lower())

    def add_table(self, definition: TableDef) -> None:
        result = validate_table(definition, self)
        if not result.ok:
            raise InvalidDefinition(result.violations)
        if definition.schema.lower() not in self.schemas:
            raise InvalidDefinition(
                (
                    Violation(
                        code="unknown_schema",
                        message=f'No schema named "{definition.schema}" exists yet.',
                        field="schema",
                        hint="create the schema first",
                    ),
                )
            )
        if definition.key in self.tables:
            raise DuplicateObject(f'A table named "{definition.name}" already exists.')
        self.tables[definition.key] = definition

    def remove_table(self, name: str) -> TableDef:
        table = self.resolve_table(name)
        if table is None:
            raise KeyError(name)
        del self.tables[table.key]
        return table

    def add_index(self, definition: IndexDef) -> None:
        result = validate_index(definition, self)
        if not result.ok:
            raise InvalidDefinition(result.violations)
        key = definition.name.lower()
        if key in self.indexes:
            raise DuplicateObject(f'An index named "{definition.name}" already exists.')
        self.indexes[key] = definition

    def remove_index(self, name: str) -> IndexDef:
        return self.indexes.pop(name.lower())

    def add_trigger(self, definition: TriggerDef) -> None:
        result = validate_trigger(definition, self)
        if not result.ok:
            raise InvalidDefinition(result.violations)
        key = definition.name.lower()
        if key in self.triggers:
            raise DuplicateObject(f'A trigger named "{definition.name}" already exists.')
        self.triggers[key] = definition

    def remove_trigger(self, name: str) -> TriggerDef:
        return self.triggers.pop(name.lower())
