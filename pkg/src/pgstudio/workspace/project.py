"""The project: one user's catalog, canvases, and saved queries."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..catalog import SchemaCatalog
from ..graph import QueryGraph
from .history import History


@dataclass
class Project:
    """Everything a user is working on, undoable as one timeline.

    graphs maps canvas name to its query graph; saved_queries maps a
    chosen name to canonical SQL text.
    """

    id: str
    owner: str
    name: str
    catalog: SchemaCatalog = field(default_factory=SchemaCatalog)
    graphs: dict[str, QueryGraph] = field(default_factory=dict)
    saved_queries: dict[str, str] = field(default_factory=dict)
    history: History = field(default_factory=lambda: History())
