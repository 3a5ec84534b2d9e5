"""HTTP facade over the studio engine: one route per engine operation."""

from pgstudio.service.app import ServiceConfig, create_app
from pgstudio.service.context_actions import UnknownObjectKind, context_actions, object_kinds
from pgstudio.service.sessions import Session, SessionManager

__all__ = [
    "ServiceConfig",
    "Session",
    "SessionManager",
    "UnknownObjectKind",
    "context_actions",
    "create_app",
    "object_kinds",
]
