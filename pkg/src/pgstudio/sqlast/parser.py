"""Recursive-descent parser for the SELECT subset.

Precedence, loosest first: OR, AND, NOT, comparison, additive,
multiplicative. Bitwise operators ride along with their arithmetic
analogues: | and # bind like + and -, while & and the shifts bind like *.
Comparisons do not chain; `a = b = c` is rejected rather than guessed at.

Unquoted identifiers are folded to lowercase as PostgreSQL does; quoted
ones keep their spelling. A trailing semicolon is accepted and ignored.
"""

from __future__ import annotations

from dataclasses import replace

from pgstudio.sqlast.errors import ParseError
from pgstudio.sqlast.nodes import (
    AGGREGATE_FUNCTIONS,
    BaseTable,
    BinaryOp,
    ColumnRef,
    Constant,
    DerivedTable,
    Expr,
    FuncCall,
    Join,
    LogicalNot,
    OrderItem,
    RowConstructor,
    ScalarSubquery,
    SelectItem,
    SelectQuery,
    SetOp,
    STAR,
    TableRef,
)
from pgstudio.sqlast.tokens import Token, TokenKind, tokenize

_ADDITIVE_OPS = {"+", "-", "|", "#"}
_MULTIPLICATIVE_OPS = {"*", "/", "%", "&", "<<", ">>"}
_COMPARISON_OPS = {"=", "<>", "!=", "<", "<=", ">", ">="}


def parse_select(source: str) -> SelectQuery:
    """Parse one SELECT statement (an optional trailing ; is fine)."""
    parser = _Parser(source, tokenize(source))
    query = parser.parse_statement()
    return query


class _Parser:
    def __init__(self, source: str, tokens: list[Token]) -> None:
        self.source = source
        self.tokens = tokens
        self.pos = 0
        # Remembers the last select-list alias written without AS, so a
        # missing FROM can point at the word that was probably a table name.
        self.last_bare_alias: Token | None = None

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def at_keyword(self, *words: str) -> bool:
        token = self.peek()
        return (
            token is not None
            and token.kind is TokenKind.KEYWORD
            and token.text.lower() in words
        )

    def at_special(self, *texts: str) -> bool:
        token = self.peek()
        return token is not None and token.kind is TokenKind.SPECIAL and token.text in texts

    def take_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(
                f"The word {word.upper()} should come next here.",
                expected=(word.upper(),),
                hint=f"add {word.upper()} at this point",
            )
        return self.advance()

    def take_special(self, text: str, *, hint: str | None = None) -> Token:
        if not self.at_special(text):
            self.fail(
                f'A "{text}" should come next here.',
                expected=(text,),
                hint=hint or f'add "{text}" at this point',
            )
        return self.advance()

    def end_span(self) -> tuple[int, int]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos].span
        end = len(self.source)
        return (end, end)

    def found_description(self) -> str:
        token = self.peek()
        if token is None:
            return "end of input"
        return token.text

    def fail(
        self,
        plain_message: str,
        expected: tuple[str, ...] = (),
        hint: str | None = None,
        span: tuple[int, int] | None = None,
    ) -> None:
        raise ParseError(
            plain_message,
            span or self.end_span(),
            expected=expected,
            found=self.found_description(),
            hint=hint,
        )

    # -- statements ---------------------------------------------------------

    def parse_statement(self) -> SelectQuery:
        if not self.tokens:
            self.fail(
                "There is nothing to run yet. A query starts with the word SELECT.",
                expected=("SELECT",),
                hint="start with SELECT followed by the columns you want",
            )
        query = self.parse_query()
        if self.at_special(";"):
            self.advance()
        if self.peek() is not None:
            if self.at_special(";"):
                self.fail(
                    "A statement ends with a single semicolon, but there is more than one.",
                    hint="keep just the final semicolon",
                )
            self.fail(
                "The query looked complete, but there is extra text after it.",
                expected=("end of statement",),
                hint="remove the extra text, or check for a missing comma or keyword before it",
            )
        return query

    def parse_query(self) -> SelectQuery:
        """A set-operation chain with an optional trailing ORDER BY on the whole thing."""
        head = self.parse_core()
        branches: list[tuple[str, SelectQuery]] = []
        while self.at_keyword("union"):
            self.advance()
            kind = "UNION"
            if self.at_keyword("all"):
                self.advance()
                kind = "UNION ALL"
            branches.append((kind, self.parse_core()))
        order_by = self.parse_order_by() if self.at_keyword("order") else ()

        # Thread the chain back-to-front so each link nests inside the previous.
        tail: SetOp | None = None
        for kind, branch in reversed(branches):
            tail = SetOp(kind, replace(branch, set_op=tail))
        return replace(head, set_op=tail, order_by=order_by)

    def parse_core(self) -> SelectQuery:
        if not self.at_keyword("select"):
            self.fail(
                "A query starts with the word SELECT.",
                expected=("SELECT",),
                hint="begin the query with SELECT",
            )
        self.advance()
        distinct = False
        if self.at_keyword("distinct"):
            self.advance()
            distinct = True

        select = self.parse_select_list()

        from_table: TableRef | None = None
        joins: list[Join] = []
        if self.at_keyword("from"):
            self.advance()
            from_table = self.parse_table_ref()
            while self.at_keyword("join", "inner"):
                if self.at_keyword("inner"):
                    self.advance()
                self.take_keyword("join")
                table = self.parse_table_ref()
                self.take_keyword("on")
                condition = self.parse_expr()
                joins.append(Join(table, condition))
        else:
            self.warn_if_missing_from()

        if from_table is None and self.at_keyword("where", "group", "having"):
            if self.last_bare_alias is not None:
                self.fail(
                    f'"{self.last_bare_alias.text}" looks like a table name, '
                    "but the word FROM is missing before it.",
                    expected=("FROM",),
                    hint="add FROM before the table name",
                    span=self.last_bare_alias.span,
                )
            self.fail(
                "This query filters rows but never says which table they come from.",
                expected=("FROM",),
                hint="add a FROM clause naming the table before this point",
            )

        where = None
        if self.at_keyword("where"):
            self.advance()
            where = self.parse_expr()

        group_by: tuple[Expr, ...] = ()
        if self.at_keyword("group"):
            self.advance()
            self.take_keyword("by")
            group_by = tuple(self.parse_expr_list())

        having = None
        if self.at_keyword("having"):
            self.advance()
            having = self.parse_expr()

        return SelectQuery(
            select=select,
            from_table=from_table,
            joins=tuple(joins),
            where=where,
            group_by=group_by,
            having=having,
            distinct=distinct,
        )

    def warn_if_missing_from(self) -> None:
        # `SELECT name customers` reads like a forgotten FROM: the stray word
        # right after the select list is almost always a table name.
        token = self.peek()
        if token is not None and token.kind in (
            TokenKind.IDENTIFIER,
            TokenKind.QUOTED_IDENTIFIER,
        ):
            self.fail(
                f'"{token.text}" looks like a table name, but the word FROM is missing before it.',
                expected=("FROM",),
                hint="add FROM before the table name",
                span=token.span,
            )

    def parse_order_by(self) -> tuple[OrderItem, ...]:
        self.take_keyword("order")
        self.take_keyword("by")
        items = [self.parse_order_item()]
        while self.at_special(","):
            self.advance()
            items.append(self.parse_order_item())
        return tuple(items)

    def parse_order_item(self) -> OrderItem:
        expr = self.parse_expr()
        descending = False
        if self.at_keyword("asc"):
            self.advance()
        elif self.at_keyword("desc"):
            self.advance()
            descending = True
        return OrderItem(expr, descending)

    # -- select list and FROM ----------------------------------------------

    def parse_select_list(self):
        if self.at_special("*"):
            self.advance()
            return STAR
        items = [self.parse_select_item()]
        while self.at_special(","):
            self.advance()
            items.append(self.parse_select_item())
        token = self.peek()
        if token is not None and token.kind in (
            TokenKind.IDENTIFIER,
            TokenKind.QUOTED_IDENTIFIER,
        ):
            self.fail(
                "Two output columns need a comma between them.",
                expected=(",", "FROM"),
                hint=f'add a comma before "{token.text}"',
                span=token.span,
            )
        return tuple(items)

    def parse_select_item(self) -> SelectItem:
        expr = self.parse_expr()
        alias = None
        if self.at_keyword("as"):
            self.advance()
            alias = self.take_name("an output column name after AS")
        else:
            token = self.peek()
            if token is not None and token.kind in (
                TokenKind.IDENTIFIER,
                TokenKind.QUOTED_IDENTIFIER,
            ):
                # Bare alias. A second bare word after it is caught by the
                # missing-comma check in parse_select_list.
                self.last_bare_alias = token
                alias = self.take_name("an output column name")
        return SelectItem(expr, alias)

    def parse_table_ref(self) -> TableRef:
        if self.at_special("("):
            open_paren = self.advance()
            if not self.at_keyword("select"):
                self.fail(
                    "Only a full SELECT can appear in parentheses inside FROM.",
                    expected=("SELECT",),
                    hint="write a complete SELECT inside the parentheses",
                )
            query = self.parse_query()
            self.take_special(")", hint="add a closing parenthesis after the inner query")
            if self.at_keyword("as"):
                self.advance()
            token = self.peek()
            if token is None or token.kind not in (
                TokenKind.IDENTIFIER,
                TokenKind.QUOTED_IDENTIFIER,
            ):
                self.fail(
                    "A query inside FROM needs a name so the rest of the query can refer to it.",
                    expected=("alias",),
                    hint="add a short name after the closing parenthesis, like (SELECT ...) t",
                    span=open_paren.span,
                )
            alias = self.take_name("a name for the inner query")
            return DerivedTable(query, alias)

        name = self.take_name("a table name")
        schema = None
        if self.at_special("."):
            self.advance()
            schema, name = name, self.take_name("a table name after the schema")
        alias = None
        if self.at_keyword("as"):
            self.advance()
            alias = self.take_name("a table alias after AS")
        else:
            token = self.peek()
            if token is not None and token.kind in (
                TokenKind.IDENTIFIER,
                TokenKind.QUOTED_IDENTIFIER,
            ):
                alias = self.take_name("a table alias")
        return BaseTable(name, alias=alias, schema=schema)

    def take_name(self, description: str) -> str:
        token = self.peek()
        if token is None or token.kind not in (
            TokenKind.IDENTIFIER,
            TokenKind.QUOTED_IDENTIFIER,
        ):
            self.fail(
                f"Expected {description} here.",
                expected=("a name",),
                hint="names start with a letter or underscore",
            )
        self.advance()
        if token.kind is TokenKind.QUOTED_IDENTIFIER:
            return token.text
        return token.text.lower()

    # -- expressions ---------------------------------------------------------

    def parse_expr_list(self) -> list[Expr]:
        items = [self.parse_expr()]
        while self.at_special(","):
            self.advance()
            items.append(self.parse_expr())
        return items

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.at_keyword("or"):
            self.advance()
            left = BinaryOp("OR", left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.at_keyword("and"):
            self.advance()
            left = BinaryOp("AND", left, self.parse_not())
        return left

    def parse_not(self) -> Expr:
        if self.at_keyword("not"):
            self.advance()
            return LogicalNot(self.parse_not())
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        left = self.parse_additive()
        if self.at_special(*_COMPARISON_OPS):
            op_token = self.advance()
            op = "<>" if op_token.text == "!=" else op_token.text
            right = self.parse_additive()
            if self.at_special(*_COMPARISON_OPS):
                self.fail(
                    "Comparisons cannot chain; compare two things at a time.",
                    hint="split it with AND, for example a < b AND b < c",
                    span=self.peek().span,
                )
            return BinaryOp(op, left, right)
        return left

    def parse_additive(self) -> Expr:
        left = self.parse_multiplicative()
        while self.at_special(*_ADDITIVE_OPS):
            op = self.advance().text
            left = BinaryOp(op, left, self.parse_multiplicative())
        return left

    def parse_multiplicative(self) -> Expr:
        left = self.parse_unary()
        while self.at_special(*_MULTIPLICATIVE_OPS):
            op = self.advance().text
            left = BinaryOp(op, left, self.parse_unary())
        return left

    def parse_unary(self) -> Expr:
        if self.at_special("-"):
            minus = self.advance()
            token = self.peek()
            if token is not None and token.kind is TokenKind.CONSTANT and token.text[0].isdigit():
                self.advance()
                return Constant(-_numeric_value(token.text))
            self.fail(
                "A minus sign can only negate a number here.",
                expected=("a number",),
                hint="write the negative number directly, like -5",
                span=minus.span,
            )
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        token = self.peek()
        if token is None:
            self.fail(
                "The query ends where a value or column name was still needed.",
                expected=("a value", "a column name"),
                hint="finish the expression before ending the query",
            )
        assert token is not None

        if token.kind is TokenKind.CONSTANT:
            self.advance()
            if token.text.startswith("'"):
                return Constant(_string_value(token.text))
            return Constant(_numeric_value(token.text))

        if token.kind is TokenKind.KEYWORD:
            word = token.text.lower()
            if word == "true":
                self.advance()
                return Constant(True)
            if word == "false":
                self.advance()
                return Constant(False)
            if word == "null":
                self.advance()
                return Constant(None)
            self.fail(
                f"The word {token.text.upper()} cannot be used as a value or column name.",
                expected=("a value", "a column name"),
                hint="put the value or column the condition applies to here",
                span=token.span,
            )

        if token.kind in (TokenKind.IDENTIFIER, TokenKind.QUOTED_IDENTIFIER):
            return self.parse_name_expr()

        if self.at_special("("):
            return self.parse_parenthesized()

        self.fail(
            f'"{token.text}" cannot start a value or condition.',
            expected=("a value", "a column name", "("),
            span=token.span,
        )
        raise AssertionError("unreachable")

    def parse_name_expr(self) -> Expr:
        name = self.take_name("a column name")
        if self.at_special("("):
            self.advance()
            if self.at_special("*"):
                star = self.advance()
                self.take_special(")", hint="close the parentheses right after the *")
                if name != "count":
                    self.fail(
                        "Only COUNT can be called with a star.",
                        hint="use COUNT(*) to count rows, or name a column inside the parentheses",
                        span=star.span,
                    )
                return FuncCall("count", star=True)
            if self.at_special(")"):
                self.fail(
                    "This function call has empty parentheses.",
                    expected=("a column name", "*"),
                    hint="put the column to compute over inside the parentheses",
                )
            args = tuple(self.parse_expr_list())
            self.take_special(")", hint="add a closing parenthesis after the arguments")
            return FuncCall(name, args=args)
        if self.at_special("."):
            self.advance()
            column = self.take_name("a column name after the dot")
            return ColumnRef(column, table=name)
        return ColumnRef(name)

    def parse_parenthesized(self) -> Expr:
        open_paren = self.take_special("(")
        if self.at_keyword("select"):
            query = self.parse_query()
            self.take_special(")", hint="add a closing parenthesis after the inner query")
            return ScalarSubquery(query)
        items = [self.parse_expr()]
        while self.at_special(","):
            self.advance()
            items.append(self.parse_expr())
        if self.peek() is None:
            self.fail(
                "A parenthesis opens here but never closes.",
                expected=(")",),
                hint="add a closing parenthesis",
                span=open_paren.span,
            )
        self.take_special(")", hint="add a closing parenthesis")
        if len(items) == 1:
            return items[0]
        return RowConstructor(tuple(items))


def _numeric_value(text: str) -> int | float:
    if "." in text:
        return float(text)
    return int(text)


def _string_value(lexeme: str) -> str:
    # Strip the outer quotes and collapse doubled quotes.
    return lexeme[1:-1].replace("''", "'")
