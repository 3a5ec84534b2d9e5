"""SQL text pipeline for the SELECT subset: tokens, AST, parser, renderer."""

from pgstudio.sqlast.nodes import (
    AGGREGATE_FUNCTIONS,
    BaseTable,
    BinaryOp,
    ColumnRef,
    Constant,
    DerivedTable,
    FuncCall,
    Join,
    LogicalNot,
    OrderItem,
    RowConstructor,
    ScalarSubquery,
    SelectItem,
    SelectQuery,
    SetOp,
    Star,
    STAR,
    TableRef,
    contains_aggregate,
    query_violations,
)
from pgstudio.sqlast.errors import ParseError, UnterminatedString, IllegalCharacter, explain_error
from pgstudio.sqlast.tokens import Token, TokenKind, KEYWORDS, tokenize
from pgstudio.sqlast.parser import parse_select
from pgstudio.sqlast.render import CanonicalSql, InvalidAst, render_select, render_expr
from pgstudio.sqlast.normalize import normalize
from pgstudio.sqlast.serialize import query_to_dict, query_from_dict

__all__ = [
    "AGGREGATE_FUNCTIONS",
    "BaseTable",
    "BinaryOp",
    "CanonicalSql",
    "ColumnRef",
    "Constant",
    "DerivedTable",
    "FuncCall",
    "IllegalCharacter",
    "InvalidAst",
    "Join",
    "KEYWORDS",
    "LogicalNot",
    "OrderItem",
    "ParseError",
    "RowConstructor",
    "ScalarSubquery",
    "SelectItem",
    "SelectQuery",
    "SetOp",
    "STAR",
    "Star",
    "TableRef",
    "Token",
    "TokenKind",
    "UnterminatedString",
    "contains_aggregate",
    "explain_error",
    "normalize",
    "parse_select",
    "query_from_dict",
    "query_to_dict",
    "query_violations",
    "render_expr",
    "render_select",
    "tokenize",
]
