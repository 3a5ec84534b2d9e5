"""Identifier rules for databases, schemas, tables, columns, users.

A valid name starts with a letter or underscore and continues with letters,
digits or underscores, 1 to 63 characters. The digit-first rejection always
tells the user to start with letters, because that is the mistake novices
actually make ("2024sales") and the fix is not obvious from a regex.
"""

from __future__ import annotations

from pgstudio.catalog.validation import ValidationResult, Violation

MAX_IDENTIFIER_LENGTH = 63


def _is_letter(ch: str) -> bool:
    return ch.isalpha()


def _suggest_reordering(name: str) -> str | None:
    # "2024sales" reads best as "sales2024": move the leading digits to the end.
    digits = ""
    rest = name
    while rest and rest[0].isdigit():
        digits += rest[0]
        rest = rest[1:]
    if rest and (_is_letter(rest[0]) or rest[0] == "_"):
        return rest + digits
    return None


def validate_identifier(name: str, field: str | None = None) -> ValidationResult:
    violations: list[Violation] = []
    if not name:
        violations.append(
            Violation(
                code="empty_name",
                message="The name is empty. Every object needs a name.",
                field=field,
                hint="type a name that starts with a letter",
            )
        )
        return ValidationResult(tuple(violations))

    if name[0].isdigit():
        suggestion = _suggest_reordering(name)
        hint = "Names must start with letters (or an underscore), with digits allowed after."
        if suggestion:
            hint += f' Try "{suggestion}" instead.'
        violations.append(
            Violation(
                code="starts_with_digit",
                message=f'The name "{name}" starts with a digit, which PostgreSQL does not allow.',
                field=field,
                position=0,
                hint=hint,
            )
        )
    elif not (_is_letter(name[0]) or name[0] == "_"):
        violations.append(
            Violation(
                code="illegal_character",
                message=f'The name "{name}" starts with "{name[0]}", which cannot begin a name.',
                field=field,
                position=0,
                hint="start with letters or an underscore",
            )
        )

    for position, ch in enumerate(name):
        if position == 0:
            continue
        if not (_is_letter(ch) or ch.isdigit() or ch == "_"):
            violations.append(
                Violation(
                    code="illegal_character",
                    message=f'The character "{ch}" at position {position + 1} cannot appear in a name.',
                    field=field,
                    position=position,
                    hint="use only letters, digits and underscores",
                )
            )
            break

    if len(name) > MAX_IDENTIFIER_LENGTH:
        violations.append(
            Violation(
                code="too_long",
                message=(
                    f"The name is {len(name)} characters long; "
                    f"the limit is {MAX_IDENTIFIER_LENGTH}."
                ),
                field=field,
                position=MAX_IDENTIFIER_LENGTH,
                hint="shorten the name",
            )
        )

    return ValidationResult(tuple(violations))
