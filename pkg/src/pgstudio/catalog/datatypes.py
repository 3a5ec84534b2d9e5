"""The data type registry behind the type picker and its tooltips."""

from __future__ import annotations

from dataclasses import dataclass

from pgstudio.catalog.errors import UnknownDataType


@dataclass(frozen=True)
class DataTypeDescriptor:
    name: str
    category: str
    tooltip: str


_TYPES = [
    DataTypeDescriptor("smallint", "numeric",
                       "Whole numbers from -32768 to 32767, the smallest integer type."),
    DataTypeDescriptor("integer", "numeric",
                       "Whole numbers up to about two billion, the usual choice for counts and ids."),
    DataTypeDescriptor("bigint", "numeric",
                       "Whole numbers up to about nine quintillion, for values that outgrow integer."),
    DataTypeDescriptor("serial", "serial",
                       "An integer that assigns itself the next number whenever a row is inserted."),
    DataTypeDescriptor("bigserial", "serial",
                       "A bigint that assigns itself the next number whenever a row is inserted."),
    DataTypeDescriptor("real", "numeric",
                       "Floating point with about 6 digits of precision; rounding is expected."),
    DataTypeDescriptor("double precision", "numeric",
                       "Floating point with about 15 digits of precision, for measurements."),
    DataTypeDescriptor("numeric", "numeric",
                       "Exact decimal arithmetic with as many digits as you declare, for money."),
    DataTypeDescriptor("text", "character",
                       "Text of any length; the default choice for strings."),
    DataTypeDescriptor("varchar", "character",
                       "Text up to a declared maximum length."),
    DataTypeDescriptor("char", "character",
                       "Fixed-length text, padded with spaces to the declared length."),
    DataTypeDescriptor("boolean", "boolean",
                       "True or false."),
    DataTypeDescriptor("date", "temporal",
                       "A calendar date with no time of day."),
    DataTypeDescriptor("time", "temporal",
                       "A time of day with no date."),
    DataTypeDescriptor("timestamp", "temporal",
                       "A date and time of day together."),
    DataTypeDescriptor("bytea", "binary",
                       "Raw bytes, for files and other binary payloads."),
    DataTypeDescriptor("interval", "temporal",
                       "A span of time, like 2 hours or 90 days."),
    DataTypeDescriptor("uuid", "other",
                       "A 128-bit universally unique identifier."),
    DataTypeDescriptor("json", "other",
                       "A JSON document stored as text and checked for well-formedness."),
]

_REGISTRY = {d.name: d for d in _TYPES}


def registered_type_names() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def all_descriptors() -> tuple[DataTypeDescriptor, ...]:
    return tuple(_TYPES)


def is_registered(name: str) -> bool:
    return name.strip().lower() in _REGISTRY


def describe_data_type(name: str) -> DataTypeDescriptor:
    """Look a type up by name, or fail with the nearest registered name."""
    key = name.strip().lower()
    if key in _REGISTRY:
        return _REGISTRY[key]
    raise UnknownDataType(name, nearest_type_name(key))


def nearest_type_name(query: str) -> str | None:
    """The registered name closest to the query by edit distance.

    Multiword names also match on their individual words, so "dubble"
    lands on "double precision" rather than on some short name that
    happens to be few edits away. Ties go to the lexicographically
    first name.
    """
    if not query:
        return None
    best_name: str | None = None
    best_score: int | None = None
    for name in sorted(_REGISTRY):
        candidates = [name] + (name.split() if " " in name else [])
        score = min(_edit_distance(query, c) for c in candidates)
        if best_score is None or score < best_score:
            best_name, best_score = name, score
    return best_name


def _edit_distance(a: str, b: str) -> int:
    # Levenshtein, one row at a time.
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]
