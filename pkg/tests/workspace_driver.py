"""Session builders shared by the workspace tests and the acceptance run.

random_session drives a project through a seeded stream of mutations,
capturing the state hash after every step; the undo/redo tests then
walk the whole staircase back down and up again. scripted_session is a
fixed sequence with known history labels.
"""

from __future__ import annotations

import random
from typing import Callable, NamedTuple

from pgstudio.graph import ALLOWED_CONNECTIONS, ElementKind, property_schema_for
from pgstudio.workspace import Project, record_and_apply, state_hash

_COLUMN_VOCAB = [
    ("id", "integer"),
    ("name", "text"),
    ("age", "integer"),
    ("city", "text"),
    ("total", "numeric"),
    ("flag", "boolean"),
]

_TEXT_VALUES = ["10", "25", "-4", "3.5", "'london'", "'ana'"]

_SQL_VOCAB = [
    "SELECT * FROM customers;",
    "SELECT name, age FROM customers WHERE age > 21;",
    "SELECT city FROM customers GROUP BY city",
    "select distinct name from customers order by name",
    "SELECT COUNT(*) FROM orders WHERE total >= 100;",
]


class SessionTrace(NamedTuple):
    project: Project
    baseline_hash: str
    hashes: list[str]  # hashes[i] is the state right after mutation i


def _fresh(prefix: str, taken: set[str]) -> str:
    i = 1
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def _feasible(rng: random.Random, project: Project) -> list[Callable[[], dict]]:
    """Builders for every mutation that must succeed in the current state.

    Weighting happens by how many times a builder is appended."""
    catalog = project.catalog
    options: list[Callable[[], dict]] = []

    # catalog shape
    if len(catalog.tables) < 6:
        options.append(lambda: _build_table(rng, project))
    if catalog.tables:
        options.append(
            lambda: {
                "op": "drop_table",
                "name": rng.choice(sorted(catalog.tables)),
            }
        )
        options.append(lambda: _build_index(rng, project))
        options.append(lambda: _build_trigger(rng, project))
    if catalog.indexes:
        options.append(
            lambda: {"op": "drop_index", "name": rng.choice(sorted(catalog.indexes))}
        )
    if catalog.triggers:
        options.append(
            lambda: {"op": "drop_trigger", "name": rng.choice(sorted(catalog.triggers))}
        )
    if len(catalog.databases) < 3:
        options.append(
            lambda: {
                "op": "create_database",
                "definition": {
                    "name": _fresh("db_", set(catalog.databases)),
                    "owner": "ana",
                    "connection_limit": rng.choice([-1, 10, 50]),
                },
            }
        )
    if catalog.databases:
        options.append(
            lambda: {
                "op": "drop_database",
                "name": rng.choice(sorted(catalog.databases)),
            }
        )
    extra_schemas = sorted(catalog.schemas - {"public"})
    if len(extra_schemas) < 3:
        options.append(
            lambda: {"op": "create_schema", "name": _fresh("zone_", catalog.schemas)}
        )
    if extra_schemas:  # generated tables all live in public, so these stay empty
        options.append(
            lambda: {"op": "drop_schema", "name": rng.choice(extra_schemas)}
        )

    # canvases
    if len(project.graphs) < 4:
        options.append(
            lambda: {"op": "create_graph", "graph": _fresh("canvas_", set(project.graphs))}
        )
    if project.graphs:
        options.append(
            lambda: {"op": "delete_graph", "graph": rng.choice(sorted(project.graphs))}
        )
        for _ in range(4):
            options.append(lambda: _build_drop_element(rng, project))

    populated = sorted(
        name for name, graph in project.graphs.items() if graph.elements
    )
    if populated:
        for _ in range(3):
            options.append(lambda: _build_move(rng, project, populated))
        options.append(lambda: _build_delete_element(rng, project, populated))
        settable = _settable_properties(project, populated)
        if settable:
            for _ in range(5):
                options.append(lambda: _build_set_property(rng, settable))
        clearable = [
            (name, element.id, key)
            for name in populated
            for element in project.graphs[name].elements_in_order()
            for key in sorted(element.properties)
        ]
        if clearable:
            options.append(lambda: _build_clear_property(rng, clearable))

    connectable = _connect_candidates(project)
    if connectable:
        for _ in range(3):
            options.append(
                lambda: dict(zip(("op", "graph", "from", "to"), ("connect",) + rng.choice(connectable)))
            )
    linked = [
        (name, c.source, c.target)
        for name in sorted(project.graphs)
        for c in project.graphs[name].connections
    ]
    if linked:
        for _ in range(2):
            options.append(
                lambda: dict(zip(("op", "graph", "from", "to"), ("disconnect",) + rng.choice(linked)))
            )

    # saved queries and metadata
    if len(project.saved_queries) < 5:
        options.append(
            lambda: {
                "op": "save_query",
                "name": _fresh("query_", set(project.saved_queries)),
                "sql": rng.choice(_SQL_VOCAB),
            }
        )
    if project.saved_queries:
        options.append(
            lambda: {
                "op": "forget_query",
                "name": rng.choice(sorted(project.saved_queries)),
            }
        )
    options.append(
        lambda: {"op": "rename_project", "name": f"Project v{rng.randint(1, 999)}"}
    )
    return options


def _build_table(rng: random.Random, project: Project) -> dict:
    taken = {t.name for t in project.catalog.tables.values()}
    picked = sorted(rng.sample(range(1, len(_COLUMN_VOCAB)), rng.randint(1, 4)))
    columns = [_COLUMN_VOCAB[0]] + [_COLUMN_VOCAB[i] for i in picked]
    return {
        "op": "create_table",
        "definition": {
            "name": _fresh("table_", taken),
            "columns": [
                {"name": n, "data_type": t, "constraints": []} for n, t in columns
            ],
        },
    }


def _build_index(rng: random.Random, project: Project) -> dict:
    table = project.catalog.tables[rng.choice(sorted(project.catalog.tables))]
    return {
        "op": "create_index",
        "definition": {
            "name": _fresh("idx_", set(project.catalog.indexes)),
            "table": table.name,
            "method": "btree",
            "unique": rng.random() < 0.3,
            "columns": [
                {
                    "name": rng.choice(sorted(table.column_names())),
                    "descending": rng.random() < 0.2,
                }
            ],
        },
    }


def _build_trigger(rng: random.Random, project: Project) -> dict:
    table = project.catalog.tables[rng.choice(sorted(project.catalog.tables))]
    return {
        "op": "create_trigger",
        "definition": {
            "name": _fresh("trg_", set(project.catalog.triggers)),
            "timing": rng.choice(["BEFORE", "AFTER"]),
            "event": rng.choice(["INSERT", "UPDATE", "DELETE"]),
            "target": table.name,
            "function_name": "audit_row",
        },
    }


def _build_drop_element(rng: random.Random, project: Project) -> dict:
    name = rng.choice(sorted(project.graphs))
    graph = project.graphs[name]
    kinds = [k for k in ElementKind if k is not ElementKind.SELECT]
    if graph.single_select() is None:
        kinds.append(ElementKind.SELECT)
    kind = rng.choice(sorted(kinds, key=lambda k: k.value))
    return {
        "op": "drop_element",
        "graph": name,
        "kind": kind.value,
        "x": rng.randint(-40, 900),
        "y": rng.randint(-40, 700),
    }


def _build_move(rng: random.Random, project: Project, populated: list[str]) -> dict:
    name = rng.choice(populated)
    element = rng.choice(project.graphs[name].elements_in_order())
    return {
        "op": "move_element",
        "graph": name,
        "element_id": element.id,
        "x": rng.randint(-40, 900),
        "y": rng.randint(-40, 700),
    }


def _build_delete_element(
    rng: random.Random, project: Project, populated: list[str]
) -> dict:
    name = rng.choice(populated)
    element = rng.choice(project.graphs[name].elements_in_order())
    return {"op": "delete_element", "graph": name, "element_id": element.id}


def _settable_properties(
    project: Project, populated: list[str]
) -> list[tuple[str, str, object]]:
    """(graph, element id, schema entry) triples a random step can fill in."""
    found = []
    for name in populated:
        graph = project.graphs[name]
        for element in graph.elements_in_order():
            schema = property_schema_for(graph, element.id, project.catalog)
            for entry in schema.entries:
                if entry.value_kind in ("choice", "multi_choice") and not entry.allowed:
                    continue
                found.append((name, element.id, entry))
    return found


def _build_set_property(
    rng: random.Random, settable: list[tuple[str, str, object]]
) -> dict:
    name, element_id, entry = rng.choice(settable)
    if entry.value_kind == "choice":
        value: object = rng.choice(entry.allowed)
    elif entry.value_kind == "multi_choice":
        specific = [c for c in entry.allowed if c != "*"]
        if not specific or ("*" in entry.allowed and rng.random() < 0.25):
            value = ["*"]
        else:
            count = rng.randint(1, min(3, len(specific)))
            value = rng.sample(specific, count)
    elif entry.value_kind == "flag":
        value = rng.choice([True, False])
    else:
        value = rng.choice(_TEXT_VALUES)
    return {
        "op": "set_property",
        "graph": name,
        "element_id": element_id,
        "key": entry.key,
        "value": value,
    }


def _build_clear_property(
    rng: random.Random, clearable: list[tuple[str, str, str]]
) -> dict:
    name, element_id, key = rng.choice(clearable)
    return {"op": "clear_property", "graph": name, "element_id": element_id, "key": key}


def _connect_candidates(project: Project) -> list[tuple[str, str, str]]:
    found = []
    for name in sorted(project.graphs):
        graph = project.graphs[name]
        existing = {(c.source, c.target) for c in graph.connections}
        ordered = graph.elements_in_order()
        for source in ordered:
            for target in ordered:
                if source.id == target.id:
                    continue
                if (source.kind, target.kind) not in ALLOWED_CONNECTIONS:
                    continue
                if (source.id, target.id) in existing:
                    continue
                found.append((name, source.id, target.id))
    return found


def random_session(seed: int = 20260822, steps: int = 200) -> SessionTrace:
    """Drive a fresh project through `steps` random mutations.

    Every generated mutation is valid by construction, so the recorded
    history has exactly `steps` entries."""
    rng = random.Random(seed)
    project = Project(id="fuzzsess", owner="ana", name="Fuzz session")
    baseline = state_hash(project)
    hashes: list[str] = []
    for _ in range(steps):
        build = rng.choice(_feasible(rng, project))
        record_and_apply(project, build(), actor="ana")
        hashes.append(state_hash(project))
    return SessionTrace(project, baseline, hashes)


# -- a fixed session with known labels


def _customers_table() -> dict:
    return {
        "name": "customers",
        "columns": [
            {"name": "id", "data_type": "integer", "constraints": []},
            {"name": "name", "data_type": "text", "constraints": []},
            {"name": "age", "data_type": "integer", "constraints": []},
            {"name": "city", "data_type": "text", "constraints": []},
        ],
    }


SCRIPTED_STEPS: list[dict] = [
    {"op": "create_database", "definition": {"name": "appdb", "owner": "bea"}},
    {"op": "create_schema", "name": "reporting"},
    {"op": "create_table", "definition": _customers_table()},
    {
        "op": "create_index",
        "definition": {
            "name": "idx_customers_age",
            "table": "customers",
            "method": "btree",
            "unique": False,
            "columns": [{"name": "age", "descending": False}],
        },
    },
    {
        "op": "create_trigger",
        "definition": {
            "name": "audit_customers",
            "timing": "AFTER",
            "event": "INSERT",
            "target": "customers",
            "function_name": "audit_row",
        },
    },
    {"op": "create_graph", "graph": "main"},
    {"op": "drop_element", "graph": "main", "kind": "SELECT", "x": 500, "y": 200},
    {"op": "drop_element", "graph": "main", "kind": "TABLE", "x": 90, "y": 210},
    {"op": "move_element", "graph": "main", "element_id": "e2", "x": 120, "y": 220},
    {"op": "connect", "graph": "main", "from": "e2", "to": "e1"},
    {"op": "set_property", "graph": "main", "element_id": "e2", "key": "table_name", "value": "customers"},
    {"op": "set_property", "graph": "main", "element_id": "e1", "key": "columns", "value": ["name", "age"]},
    {"op": "drop_element", "graph": "main", "kind": "WHERE", "x": 300, "y": 360},
    {"op": "connect", "graph": "main", "from": "e3", "to": "e1"},
    {"op": "set_property", "graph": "main", "element_id": "e3", "key": "column", "value": "age"},
    {"op": "set_property", "graph": "main", "element_id": "e3", "key": "operator", "value": ">"},
    {"op": "set_property", "graph": "main", "element_id": "e3", "key": "value", "value": "30"},
    {"op": "clear_property", "graph": "main", "element_id": "e3", "key": "value"},
    {"op": "set_property", "graph": "main", "element_id": "e3", "key": "value", "value": "21"},
    {"op": "save_query", "name": "adults", "sql": "select name, age from customers where age > 21"},
    {"op": "rename_project", "name": "Customer studio"},
    {"op": "disconnect", "graph": "main", "from": "e3", "to": "e1"},
    {"op": "delete_element", "graph": "main", "element_id": "e3"},
    {"op": "forget_query", "name": "adults"},
    {"op": "drop_trigger", "name": "audit_customers"},
    {"op": "drop_index", "name": "idx_customers_age"},
    {"op": "drop_schema", "name": "reporting"},
    {"op": "drop_database", "name": "appdb"},
]

GOLDEN_LABELS: list[str] = [
    'Created database "appdb"',
    'Created schema "reporting"',
    'Created table "customers"',
    'Created index "idx_customers_age"',
    'Created trigger "audit_customers"',
    'Created canvas "main"',
    "Added SELECT element",
    "Added TABLE element",
    "Moved TABLE element",
    "Connected TABLE to SELECT",
    "Set table_name on TABLE element",
    "Set columns on SELECT element",
    "Added WHERE element",
    "Connected WHERE to SELECT",
    "Set column on WHERE element",
    "Set operator on WHERE element",
    "Set value on WHERE element",
    "Cleared value on WHERE element",
    "Set value on WHERE element",
    'Saved query "adults"',
    'Renamed project to "Customer studio"',
    "Disconnected WHERE from SELECT",
    "Removed WHERE element",
    'Forgot query "adults"',
    'Dropped trigger "audit_customers"',
    'Dropped index "idx_customers_age"',
    'Dropped schema "reporting"',
    'Dropped database "appdb"',
]


def scripted_session() -> tuple[Project, list[str]]:
    """Run the fixed session; returns the project and recorded labels."""
    project = Project(id="script01", owner="bea", name="Scripted")
    labels = []
    for mutation in SCRIPTED_STEPS:
        entry = record_and_apply(project, mutation, actor="bea")
        labels.append(entry.human_label)
    return project, labels
