"""Schema catalog: identifier rules, data types, object definitions, DDL text."""

from pgstudio.catalog.errors import (
    CatalogError,
    DuplicateObject,
    InvalidDefinition,
    UnknownColumn,
    UnknownDataType,
    UnknownTable,
)
from pgstudio.catalog.validation import ValidationResult, Violation
from pgstudio.catalog.identifiers import MAX_IDENTIFIER_LENGTH, validate_identifier
from pgstudio.catalog.datatypes import (
    DataTypeDescriptor,
    all_descriptors,
    describe_data_type,
    registered_type_names,
)
from pgstudio.catalog.model import (
    ColumnDef,
    ConstraintDef,
    ConstraintKind,
    DatabaseDef,
    IndexColumn,
    IndexDef,
    IndexMethod,
    SchemaCatalog,
    TableDef,
    TriggerDef,
    TriggerEvent,
    TriggerTiming,
    UNIQUE_CAPABLE_METHODS,
    validate_database,
    validate_index,
    validate_table,
    validate_trigger,
)
from pgstudio.catalog.ddl import (
    render_create_database,
    render_create_index,
    render_create_schema,
    render_create_table,
    render_create_trigger,
)
from pgstudio.catalog.serialize import (
    catalog_from_dict,
    catalog_to_dict,
    database_from_dict,
    database_to_dict,
    index_from_dict,
    index_to_dict,
    table_from_dict,
    table_to_dict,
    trigger_from_dict,
    trigger_to_dict,
)

__all__ = [
    "CatalogError",
    "ColumnDef",
    "DuplicateObject",
    "UnknownColumn",
    "UnknownTable",
    "ConstraintDef",
    "ConstraintKind",
    "DataTypeDescriptor",
    "DatabaseDef",
    "IndexColumn",
    "IndexDef",
    "IndexMethod",
    "InvalidDefinition",
    "MAX_IDENTIFIER_LENGTH",
    "SchemaCatalog",
    "TableDef",
    "TriggerDef",
    "TriggerEvent",
    "TriggerTiming",
    "UNIQUE_CAPABLE_METHODS",
    "UnknownDataType",
    "ValidationResult",
    "Violation",
    "all_descriptors",
    "catalog_from_dict",
    "catalog_to_dict",
    "database_from_dict",
    "database_to_dict",
    "describe_data_type",
    "index_from_dict",
    "index_to_dict",
    "table_from_dict",
    "table_to_dict",
    "trigger_from_dict",
    "trigger_to_dict",
    "registered_type_names",
    "render_create_database",
    "render_create_index",
    "render_create_schema",
    "render_create_table",
    "render_create_trigger",
    "validate_database",
    "validate_identifier",
    "validate_index",
    "validate_table",
    "validate_trigger",
]
