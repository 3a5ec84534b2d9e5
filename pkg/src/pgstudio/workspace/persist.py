"""Project documents: versioned save/load plus a canonical state hash.

The document layout is part of the storage contract:

    {"version": 1, "id": ..., "name": ..., "owner": ...,
     "catalog": {...}, "graphs": [{"name", "document"}, ...],
     "saved_queries": {...}, "history": {...}}   # history optional

Graphs are saved sorted by name and the catalog serializer sorts every
object list, so two projects in the same state always produce the same
bytes. state_hash builds on that: it hashes the history-free document,
which is what lets a test assert that undo really returned the project
to an earlier state.
"""

from __future__ import annotations

import hashlib
import json

from ..catalog import SchemaCatalog, catalog_from_dict, catalog_to_dict
from ..graph import MalformedGraphDocument, graph_from_dict, graph_to_dict
from .errors import CorruptDocument, UnsupportedVersion
from .history import ActionEntry, History
from .project import Project

PROJECT_VERSION = 1


def save_project(project: Project, include_history: bool = False) -> dict:
    document = {
        "version": PROJECT_VERSION,
        "id": project.id,
        "name": project.name,
        "owner": project.owner,
        "catalog": catalog_to_dict(project.catalog),
        "graphs": [
            {"name": name, "document": graph_to_dict(graph)}
            for name, graph in sorted(project.graphs.items())
        ],
        "saved_queries": dict(sorted(project.saved_queries.items())),
    }
    if include_history:
        history = project.history
        document["history"] = {
            "entries": [_entry_to_dict(e) for e in history.entries],
            "redo": [_entry_to_dict(e) for e in history.redo],
            "next_sequence": history.next_sequence,
        }
    return document


def _entry_to_dict(entry: ActionEntry) -> dict:
    return {
        "sequence": entry.sequence,
        "timestamp": entry.timestamp,
        "actor": entry.actor,
        "operation": entry.operation,
        "inverse": entry.inverse,
        "label": entry.human_label,
    }


def _take(doc: dict, key: str, kind: type, path: str) -> object:
    if key not in doc:
        raise CorruptDocument(path, "missing")
    value = doc[key]
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        raise CorruptDocument(path, f"expected {kind.__name__}")
    return value


def _entry_from_dict(doc: object, path: str) -> ActionEntry:
    if not isinstance(doc, dict):
        raise CorruptDocument(path, "expected object")
    return ActionEntry(
        sequence=_take(doc, "sequence", int, f"{path}.sequence"),
        timestamp=_take(doc, "timestamp", str, f"{path}.timestamp"),
        actor=_take(doc, "actor", str, f"{path}.actor"),
        operation=_take(doc, "operation", dict, f"{path}.operation"),
        inverse=_take(doc, "inverse", dict, f"{path}.inverse"),
        human_label=_take(doc, "label", str, f"{path}.label"),
    )


def load_project(document: object) -> Project:
    """Rebuild a project from its saved document.

    Raises UnsupportedVersion for a version this code does not know and
    CorruptDocument (with the offending field path) for structural rot.
    """
    if not isinstance(document, dict):
        raise CorruptDocument("document", "not an object")
    version = document.get("version")
    if version != PROJECT_VERSION:
        raise UnsupportedVersion(version)

    project = Project(
        id=_take(document, "id", str, "id"),
        owner=_take(document, "owner", str, "owner"),
        name=_take(document, "name", str, "name"),
        catalog=_load_catalog(_take(document, "catalog", dict, "catalog")),
    )

    graphs_doc = _take(document, "graphs", list, "graphs")
    for i, item in enumerate(graphs_doc):
        if not isinstance(item, dict):
            raise CorruptDocument(f"graphs[{i}]", "expected object")
        name = _take(item, "name", str, f"graphs[{i}].name")
        if name in project.graphs:
            raise CorruptDocument(f"graphs[{i}].name", f'duplicate canvas name "{name}"')
        try:
            project.graphs[name] = graph_from_dict(item.get("document"))
        except MalformedGraphDocument as exc:
            raise CorruptDocument(f"graphs[{i}].document", str(exc)) from None

    queries = _take(document, "saved_queries", dict, "saved_queries")
    for key, value in queries.items():
        if not isinstance(key, str) or not isinstance(value, str):
            raise CorruptDocument("saved_queries", "names and SQL must be strings")
        project.saved_queries[key] = value

    if "history" in document:
        history_doc = _take(document, "history", dict, "history")
        entries = _take(history_doc, "entries", list, "history.entries")
        redo = _take(history_doc, "redo", list, "history.redo")
        project.history = History(
            entries=[
                _entry_from_dict(e, f"history.entries[{i}]") for i, e in enumerate(entries)
            ],
            redo=[_entry_from_dict(e, f"history.redo[{i}]") for i, e in enumerate(redo)],
            next_sequence=_take(history_doc, "next_sequence", int, "history.next_sequence"),
        )
    return project


def _load_catalog(doc: dict) -> SchemaCatalog:
    try:
        return catalog_from_dict(doc)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CorruptDocument("catalog", f"{type(exc).__name__}: {exc}") from None


def state_hash(project: Project) -> str:
    """Hash of the project's observable state, history excluded.

    Two projects with equal hashes hold the same catalog, canvases, and
    saved queries. Undo followed by redo must reproduce the hash.
    """
    document = save_project(project, include_history=False)
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
