"""Tokenizer for the SELECT subset.

Five token kinds. Spans index into the original source and partition its
non-whitespace characters, so any tool can map a token back to the exact
text it came from. Quoted identifiers carry their unquoted text but their
span still covers the quotes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from pgstudio.sqlast.errors import IllegalCharacter, UnterminatedString


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    QUOTED_IDENTIFIER = "quoted_identifier"
    CONSTANT = "constant"
    SPECIAL = "special_character"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: tuple[int, int]


# Reserved words of the grammar. Word-shaped operators (AND, OR, NOT) are
# reserved too, so they land here rather than under SPECIAL.
KEYWORDS = frozenset(
    {
        "select", "distinct", "from", "where", "group", "by", "having",
        "order", "asc", "desc", "join", "inner", "on", "union", "all",
        "and", "or", "not", "as", "true", "false", "null",
    }
)

# Longest first so <= wins over <, << over <, and so on.
_MULTI_CHAR_SPECIALS = ("<>", "<=", ">=", "!=", "<<", ">>")
_SINGLE_CHAR_SPECIALS = frozenset("=<>+-*/%(),;.&|#")


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "'":
            tokens.append(_scan_string(source, i))
            i = tokens[-1].span[1]
            continue
        if ch == '"':
            tokens.append(_scan_quoted_identifier(source, i))
            i = tokens[-1].span[1]
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            tokens.append(_scan_number(source, i))
            i = tokens[-1].span[1]
            continue
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            kind = TokenKind.KEYWORD if text.lower() in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, (i, j)))
            i = j
            continue
        two = source[i : i + 2]
        if two in _MULTI_CHAR_SPECIALS:
            tokens.append(Token(TokenKind.SPECIAL, two, (i, i + 2)))
            i += 2
            continue
        if ch in _SINGLE_CHAR_SPECIALS:
            tokens.append(Token(TokenKind.SPECIAL, ch, (i, i + 1)))
            i += 1
            continue
        raise IllegalCharacter(
            f"The character {ch!r} has no meaning in SQL here.",
            (i, i + 1),
            found=repr(ch),
            hint="remove it, or put it inside single quotes if it is part of a value",
        )
    return tokens


def _scan_string(source: str, start: int) -> Token:
    # Single-quoted literal; a doubled '' is an escaped quote.
    i = start + 1
    n = len(source)
    while i < n:
        if source[i] == "'":
            if i + 1 < n and source[i + 1] == "'":
                i += 2
                continue
            return Token(TokenKind.CONSTANT, source[start : i + 1], (start, i + 1))
        i += 1
    raise UnterminatedString(
        "A quoted value starts here but the closing quote never arrives.",
        (start, start + 1),
        found="'",
        hint="add a closing ' at the end of the value",
    )


def _scan_quoted_identifier(source: str, start: int) -> Token:
    # Double-quoted name; "" escapes a quote. Text is stored without the
    # outer quotes (and with escapes collapsed); the span keeps them.
    i = start + 1
    n = len(source)
    body: list[str] = []
    while i < n:
        if source[i] == '"':
            if i + 1 < n and source[i + 1] == '"':
                body.append('"')
                i += 2
                continue
            return Token(TokenKind.QUOTED_IDENTIFIER, "".join(body), (start, i + 1))
        body.append(source[i])
        i += 1
    raise UnterminatedString(
        "A quoted name starts here but the closing quote never arrives.",
        (start, start + 1),
        found='"',
        hint='add a closing " at the end of the name',
    )


def _scan_number(source: str, start: int) -> Token:
    i = start
    n = len(source)
    seen_dot = False
    while i < n:
        ch = source[i]
        if ch.isdigit():
            i += 1
        elif ch == "." and not seen_dot and i + 1 < n and source[i + 1].isdigit():
            seen_dot = True
            i += 1
        else:
            break
    return Token(TokenKind.CONSTANT, source[start:i], (start, i))
