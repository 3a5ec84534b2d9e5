"""Parse-time errors and the beginner-facing explainer.

ParseError carries two audiences in one object: `expected`/`found` hold the
technical detail a tool might surface, while `plain_message` is written for
someone who has never heard the word "token". Plain messages never mention
grammar machinery.
"""

from __future__ import annotations


class ParseError(Exception):
    def __init__(
        self,
        plain_message: str,
        span: tuple[int, int],
        expected: tuple[str, ...] = (),
        found: str = "",
        hint: str | None = None,
    ) -> None:
        super().__init__(plain_message)
        self.plain_message = plain_message
        self.span = span
        self.expected = expected
        self.found = found
        self.hint = hint


class UnterminatedString(ParseError):
    """A quoted literal or identifier that never closes. Span points at the opening quote."""


class IllegalCharacter(ParseError):
    """A character the language has no use for, at the given position."""


def _line_and_column(source: str, offset: int) -> tuple[int, int]:
    prefix = source[:offset]
    line = prefix.count("\n") + 1
    column = offset - (prefix.rfind("\n") + 1) + 1
    return line, column


def explain_error(error: ParseError, source: str) -> str:
    """Render a short paragraph for the editor: what went wrong, where, and a fix."""
    start, end = error.span
    start = max(0, min(start, len(source)))
    end = max(start, min(end, len(source)))
    fragment = source[start:end].strip()
    line, column = _line_and_column(source, start)
    parts = [error.plain_message]
    if fragment:
        parts.append(f'The trouble starts at "{fragment}" (line {line}, column {column}).')
    else:
        parts.append(f"The trouble starts at line {line}, column {column}.")
    if error.hint:
        hint = error.hint.rstrip(".")
        parts.append(f"Try this: {hint}.")
    return " ".join(parts)
