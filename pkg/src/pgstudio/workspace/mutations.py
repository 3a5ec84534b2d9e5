"""Invertible project mutations.

Every change to a project is described as a plain dict with an "op" key
so it can be recorded, serialized, undone, and replayed. apply_mutation
performs the change and returns the inverse mutation plus a short label
for the history view.

Handlers validate before they touch anything: a failed mutation leaves
the project exactly as it was.
"""

from __future__ import annotations

import copy
from typing import Callable

from ..catalog import (
    database_from_dict,
    database_to_dict,
    index_from_dict,
    index_to_dict,
    table_from_dict,
    table_to_dict,
    trigger_from_dict,
    trigger_to_dict,
)
from ..graph import (
    ElementKind,
    QueryGraph,
    graph_from_dict,
    graph_to_dict,
    set_property,
)
from ..sqlast import parse_select, render_select
from .errors import (
    DuplicateGraph,
    InvalidMutation,
    MutationTargetMissing,
    UnknownGraph,
    UnknownMutation,
)
from .project import Project

Handler = Callable[[Project, dict], tuple[dict, str]]

_REGISTRY: dict[str, Handler] = {}


def _handles(op: str) -> Callable[[Handler], Handler]:
    def register(fn: Handler) -> Handler:
        _REGISTRY[op] = fn
        return fn

    return register


def apply_mutation(project: Project, mutation: dict) -> tuple[dict, str]:
    """Apply one mutation; return (inverse mutation, human label)."""
    if not isinstance(mutation, dict):
        raise InvalidMutation("A mutation must be an object with an op field.")
    op = mutation.get("op")
    handler = _REGISTRY.get(op) if isinstance(op, str) else None
    if handler is None:
        raise UnknownMutation(str(op))
    return handler(project, mutation)


def mutation_ops() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


# -- shared checks


def _need(mutation: dict, key: str) -> object:
    if key not in mutation:
        raise InvalidMutation(f'The "{mutation.get("op")}" action needs "{key}".')
    return mutation[key]


def _need_str(mutation: dict, key: str) -> str:
    value = _need(mutation, key)
    if not isinstance(value, str) or not value.strip():
        raise InvalidMutation(f'"{key}" must be a non-empty string.')
    return value


def _need_number(mutation: dict, key: str) -> float:
    value = _need(mutation, key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidMutation(f'"{key}" must be a number.')
    return float(value)


def _need_dict(mutation: dict, key: str) -> dict:
    value = _need(mutation, key)
    if not isinstance(value, dict):
        raise InvalidMutation(f'"{key}" must be an object.')
    return value


def _graph_of(project: Project, mutation: dict) -> tuple[str, QueryGraph]:
    name = _need_str(mutation, "graph")
    graph = project.graphs.get(name)
    if graph is None:
        raise UnknownGraph(name)
    return name, graph


def _element_kind(raw: object) -> ElementKind:
    try:
        return ElementKind(str(raw).upper())
    except ValueError:
        raise InvalidMutation(f"{raw!r} is not an element kind.") from None


# -- canvas lifecycle


@_handles("create_graph")
def _create_graph(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "graph")
    if name in project.graphs:
        raise DuplicateGraph(name)
    project.graphs[name] = QueryGraph()
    return {"op": "delete_graph", "graph": name}, f'Created canvas "{name}"'


@_handles("delete_graph")
def _delete_graph(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    document = graph_to_dict(graph)
    del project.graphs[name]
    inverse = {"op": "restore_graph", "graph": name, "document": document}
    return inverse, f'Deleted canvas "{name}"'


@_handles("restore_graph")
def _restore_graph(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "graph")
    if name in project.graphs:
        raise DuplicateGraph(name)
    project.graphs[name] = graph_from_dict(_need_dict(mutation, "document"))
    return {"op": "delete_graph", "graph": name}, f'Restored canvas "{name}"'


# -- canvas elements


@_handles("drop_element")
def _drop_element(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    kind = _element_kind(_need(mutation, "kind"))
    x = _need_number(mutation, "x")
    y = _need_number(mutation, "y")
    element_id = graph.drop_element(kind, (x, y), element_id=mutation.get("element_id"))
    # recorded so that redo recreates the element under the same id
    mutation["element_id"] = element_id
    inverse = {"op": "delete_element", "graph": name, "element_id": element_id}
    return inverse, f"Added {kind.display} element"


@_handles("move_element")
def _move_element(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    element = graph.element(_need_str(mutation, "element_id"))
    old_x, old_y = element.x, element.y
    graph.move_element(element.id, (_need_number(mutation, "x"), _need_number(mutation, "y")))
    inverse = {
        "op": "move_element",
        "graph": name,
        "element_id": element.id,
        "x": old_x,
        "y": old_y,
    }
    return inverse, f"Moved {element.kind.display} element"


@_handles("delete_element")
def _delete_element(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    element = graph.element(_need_str(mutation, "element_id"))
    snapshot = {
        "id": element.id,
        "kind": element.kind.value,
        "x": element.x,
        "y": element.y,
        "properties": copy.deepcopy(element.properties),
    }
    touching = [
        {"from": c.source, "to": c.target}
        for c in graph.connections
        if element.id in (c.source, c.target)
    ]
    graph.delete_element(element.id)
    inverse = {
        "op": "restore_element",
        "graph": name,
        "element": snapshot,
        "connections": touching,
    }
    return inverse, f"Removed {element.kind.display} element"


@_handles("restore_element")
def _restore_element(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    snapshot = _need_dict(mutation, "element")
    kind = _element_kind(snapshot.get("kind"))
    element_id = snapshot.get("id")
    if not isinstance(element_id, str):
        raise InvalidMutation("The element snapshot needs a string id.")
    graph.drop_element(kind, (snapshot.get("x", 0), snapshot.get("y", 0)), element_id=element_id)
    # captured values were valid when recorded; restore them verbatim
    properties = snapshot.get("properties", {})
    if isinstance(properties, dict):
        graph.element(element_id).properties.update(copy.deepcopy(properties))
    for link in mutation.get("connections", []):
        graph.connect(link["from"], link["to"])
    inverse = {"op": "delete_element", "graph": name, "element_id": element_id}
    return inverse, f"Restored {kind.display} element"


@_handles("connect")
def _connect(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    source = graph.element(_need_str(mutation, "from"))
    target = graph.element(_need_str(mutation, "to"))
    graph.connect(source.id, target.id)
    inverse = {"op": "disconnect", "graph": name, "from": source.id, "to": target.id}
    return inverse, f"Connected {source.kind.display} to {target.kind.display}"


@_handles("disconnect")
def _disconnect(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    source = graph.element(_need_str(mutation, "from"))
    target = graph.element(_need_str(mutation, "to"))
    graph.disconnect(source.id, target.id)
    inverse = {"op": "connect", "graph": name, "from": source.id, "to": target.id}
    return inverse, f"Disconnected {source.kind.display} from {target.kind.display}"


@_handles("set_property")
def _set_property(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    element = graph.element(_need_str(mutation, "element_id"))
    key = _need_str(mutation, "key")
    had_value = key in element.properties
    old_value = copy.deepcopy(element.properties.get(key))
    set_property(graph, element.id, key, _need(mutation, "value"), project.catalog)
    if had_value:
        inverse = {
            "op": "restore_property",
            "graph": name,
            "element_id": element.id,
            "key": key,
            "value": old_value,
        }
    else:
        inverse = {
            "op": "clear_property",
            "graph": name,
            "element_id": element.id,
            "key": key,
        }
    return inverse, f"Set {key} on {element.kind.display} element"


@_handles("restore_property")
def _restore_property(project: Project, mutation: dict) -> tuple[dict, str]:
    # undo path: put a captured value back without schema checks, since
    # the schema may have shifted under it (a dropped table, say) while
    # the stale value legitimately stayed on the element
    name, graph = _graph_of(project, mutation)
    element = graph.element(_need_str(mutation, "element_id"))
    key = _need_str(mutation, "key")
    had_value = key in element.properties
    old_value = copy.deepcopy(element.properties.get(key))
    element.properties[key] = copy.deepcopy(_need(mutation, "value"))
    if had_value:
        inverse = {
            "op": "restore_property",
            "graph": name,
            "element_id": element.id,
            "key": key,
            "value": old_value,
        }
    else:
        inverse = {
            "op": "clear_property",
            "graph": name,
            "element_id": element.id,
            "key": key,
        }
    return inverse, f"Restored {key} on {element.kind.display} element"


@_handles("clear_property")
def _clear_property(project: Project, mutation: dict) -> tuple[dict, str]:
    name, graph = _graph_of(project, mutation)
    element = graph.element(_need_str(mutation, "element_id"))
    key = _need_str(mutation, "key")
    if key not in element.properties:
        raise InvalidMutation(
            f"The {element.kind.display} element has no {key} set."
        )
    old_value = element.properties.pop(key)
    inverse = {
        "op": "restore_property",
        "graph": name,
        "element_id": element.id,
        "key": key,
        "value": old_value,
    }
    return inverse, f"Cleared {key} on {element.kind.display} element"


# -- catalog objects


@_handles("create_database")
def _create_database(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = database_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad database definition: {exc}") from None
    project.catalog.add_database(definition)
    inverse = {"op": "drop_database", "name": definition.name}
    return inverse, f'Created database "{definition.name}"'


@_handles("drop_database")
def _drop_database(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    found = project.catalog.databases.get(name.lower())
    if found is None:
        raise MutationTargetMissing(f'No database named "{name}" exists.')
    document = database_to_dict(found)
    project.catalog.remove_database(name)
    inverse = {"op": "restore_database", "definition": document}
    return inverse, f'Dropped database "{found.name}"'


@_handles("restore_database")
def _restore_database(project: Project, mutation: dict) -> tuple[dict, str]:
    # undo of a drop: the captured definition goes back in verbatim,
    # without re-running checks against objects that may still be gone
    try:
        definition = database_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad database definition: {exc}") from None
    if definition.name.lower() in project.catalog.databases:
        raise InvalidMutation(f'A database named "{definition.name}" already exists.')
    project.catalog.databases[definition.name.lower()] = definition
    inverse = {"op": "drop_database", "name": definition.name}
    return inverse, f'Restored database "{definition.name}"'


@_handles("create_schema")
def _create_schema(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    project.catalog.add_schema(name)
    return {"op": "drop_schema", "name": name}, f'Created schema "{name}"'


@_handles("drop_schema")
def _drop_schema(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    key = name.lower()
    if key not in project.catalog.schemas:
        raise MutationTargetMissing(f'No schema named "{name}" exists.')
    occupied = [t.name for t in project.catalog.tables.values() if t.schema.lower() == key]
    if occupied:
        raise InvalidMutation(
            f'Schema "{name}" still contains tables ({", ".join(sorted(occupied))}); '
            "drop them first."
        )
    project.catalog.remove_schema(name)
    return {"op": "create_schema", "name": name}, f'Dropped schema "{name}"'


@_handles("create_table")
def _create_table(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = table_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad table definition: {exc}") from None
    project.catalog.add_table(definition)
    inverse = {"op": "drop_table", "name": definition.key}
    return inverse, f'Created table "{definition.name}"'


@_handles("drop_table")
def _drop_table(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    found = project.catalog.resolve_table(name)
    if found is None:
        raise MutationTargetMissing(f'No table named "{name}" exists.')
    document = table_to_dict(found)
    project.catalog.remove_table(found.key)
    inverse = {"op": "restore_table", "definition": document}
    return inverse, f'Dropped table "{found.name}"'


@_handles("restore_table")
def _restore_table(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = table_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad table definition: {exc}") from None
    if definition.key in project.catalog.tables:
        raise InvalidMutation(f'A table named "{definition.name}" already exists.')
    project.catalog.tables[definition.key] = definition
    inverse = {"op": "drop_table", "name": definition.key}
    return inverse, f'Restored table "{definition.name}"'


@_handles("create_index")
def _create_index(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = index_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad index definition: {exc}") from None
    project.catalog.add_index(definition)
    inverse = {"op": "drop_index", "name": definition.name}
    return inverse, f'Created index "{definition.name}"'


@_handles("drop_index")
def _drop_index(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    found = project.catalog.indexes.get(name.lower())
    if found is None:
        raise MutationTargetMissing(f'No index named "{name}" exists.')
    document = index_to_dict(found)
    project.catalog.remove_index(name)
    inverse = {"op": "restore_index", "definition": document}
    return inverse, f'Dropped index "{found.name}"'


@_handles("restore_index")
def _restore_index(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = index_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad index definition: {exc}") from None
    if definition.name.lower() in project.catalog.indexes:
        raise InvalidMutation(f'An index named "{definition.name}" already exists.')
    project.catalog.indexes[definition.name.lower()] = definition
    inverse = {"op": "drop_index", "name": definition.name}
    return inverse, f'Restored index "{definition.name}"'


@_handles("create_trigger")
def _create_trigger(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = trigger_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad trigger definition: {exc}") from None
    project.catalog.add_trigger(definition)
    inverse = {"op": "drop_trigger", "name": definition.name}
    return inverse, f'Created trigger "{definition.name}"'


@_handles("drop_trigger")
def _drop_trigger(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    found = project.catalog.triggers.get(name.lower())
    if found is None:
        raise MutationTargetMissing(f'No trigger named "{name}" exists.')
    document = trigger_to_dict(found)
    project.catalog.remove_trigger(name)
    inverse = {"op": "restore_trigger", "definition": document}
    return inverse, f'Dropped trigger "{found.name}"'


@_handles("restore_trigger")
def _restore_trigger(project: Project, mutation: dict) -> tuple[dict, str]:
    try:
        definition = trigger_from_dict(_need_dict(mutation, "definition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMutation(f"Bad trigger definition: {exc}") from None
    if definition.name.lower() in project.catalog.triggers:
        raise InvalidMutation(f'A trigger named "{definition.name}" already exists.')
    project.catalog.triggers[definition.name.lower()] = definition
    inverse = {"op": "drop_trigger", "name": definition.name}
    return inverse, f'Restored trigger "{definition.name}"'


# -- saved queries and project metadata


@_handles("save_query")
def _save_query(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    sql = _need_str(mutation, "sql")
    canonical = render_select(parse_select(sql)).text
    old = project.saved_queries.get(name)
    project.saved_queries[name] = canonical
    if old is None:
        inverse = {"op": "forget_query", "name": name}
    else:
        inverse = {"op": "save_query", "name": name, "sql": old}
    return inverse, f'Saved query "{name}"'


@_handles("forget_query")
def _forget_query(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    if name not in project.saved_queries:
        raise MutationTargetMissing(f'No saved query named "{name}" exists.')
    old = project.saved_queries.pop(name)
    inverse = {"op": "save_query", "name": name, "sql": old}
    return inverse, f'Forgot query "{name}"'


@_handles("rename_project")
def _rename_project(project: Project, mutation: dict) -> tuple[dict, str]:
    name = _need_str(mutation, "name")
    old = project.name
    project.name = name
    return {"op": "rename_project", "name": old}, f'Renamed project to "{name}"'
