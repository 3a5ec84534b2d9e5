"""The HTTP service: a thin, uniform facade over the studio engine.

Every response uses one envelope: {"status": "ok" | "error", "feedback": ...,
"payload": ..., "diagnostics": [...]?} and the feedback text is never empty,
success or failure. Each route wraps exactly one engine operation; engine
errors pass through with their own messages so no wording is invented here.

Mutations on one project are serialized with a per-project lock. Critical
sections contain no awaits, so holding a plain lock on the event loop cannot
deadlock; they are also tiny (in-memory work plus one small file write).
Sandbox evaluation deliberately runs outside the lock.
"""

from __future__ import annotations

import dataclasses
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from pgstudio.advisor import (
    AdvisorError,
    Diagnostic,
    PlanNode,
    Rule,
    StaleDiagnostic,
    TableStats,
    analyze,
    apply_rewrite,
    compare_plans,
    plan,
    query_fingerprint,
)
from pgstudio.advisor import Equivalence
from pgstudio.catalog import (
    CatalogError,
    DuplicateObject,
    InvalidDefinition,
    SchemaCatalog,
    UnknownDataType,
    all_descriptors,
    catalog_to_dict,
    database_from_dict,
    describe_data_type,
    index_from_dict,
    render_create_database,
    render_create_index,
    render_create_schema,
    render_create_table,
    render_create_trigger,
    table_from_dict,
    trigger_from_dict,
    validate_database,
    validate_identifier,
    validate_index,
    validate_table,
    validate_trigger,
)
from pgstudio.completion import (
    UnrecognizedPseudocode,
    complete,
    generate_from_pseudocode,
    parse_pseudocode,
    replacement_start,
)
from pgstudio.graph import (
    DuplicateConnection,
    DuplicateElementId,
    DuplicateSelect,
    GraphError,
    IncompleteGraph,
    QueryGraph,
    UnknownConnection,
    UnknownElement,
    graph_to_ast,
    graph_to_dict,
    property_schema_for,
    validate_graph,
)
from pgstudio.minidb import EvalError, MiniDb, Relation, eval_select
from pgstudio.service.context_actions import UnknownObjectKind, context_actions
from pgstudio.service.sessions import SessionManager
from pgstudio.sqlast import ParseError, SelectQuery, explain_error, parse_select, query_to_dict, render_select
from pgstudio.workspace import (
    DuplicateGraph,
    DuplicateUsername,
    MutationTargetMissing,
    Project,
    UnknownGraph,
    UnknownProject,
    UnknownUser,
    Workspace,
    WorkspaceError,
    history_view,
    record_and_apply,
    save_project,
    state_hash,
)
from pgstudio.workspace import redo as redo_action
from pgstudio.workspace import undo as undo_action

AUTH_REQUIRED_FEEDBACK = (
    "Not signed in, or the session expired. Sign in again to get a fresh token."
)

_DDL_KINDS = ("database", "schema", "table", "index", "trigger")


@dataclass
class ServiceConfig:
    storage_dir: Path
    session_ttl_seconds: float = 86400.0
    postgres_url: str | None = None
    cors_origin: str | None = None


class ApiError(Exception):
    """A request-level failure the service detects before touching the engine."""

    def __init__(self, status_code: int, feedback: str, diagnostics: list | None = None):
        super().__init__(feedback)
        self.status_code = status_code
        self.feedback = feedback
        self.diagnostics = diagnostics


# -- response envelope


def _envelope(status_code: int, status: str, feedback: str, payload: Any = None,
              diagnostics: list | None = None) -> JSONResponse:
    body: dict[str, Any] = {"status": status, "feedback": feedback, "payload": payload}
    if diagnostics is not None:
        body["diagnostics"] = diagnostics
    return JSONResponse(body, status_code=status_code)


def ok(feedback: str, payload: Any = None, diagnostics: list | None = None,
       status_code: int = 200) -> JSONResponse:
    return _envelope(status_code, "ok", feedback, payload, diagnostics)


def fail(status_code: int, feedback: str, payload: Any = None,
         diagnostics: list | None = None) -> JSONResponse:
    return _envelope(status_code, "error", feedback, payload, diagnostics)


# -- engine error mapping

_NOT_FOUND = (
    UnknownProject,
    UnknownGraph,
    UnknownUser,
    MutationTargetMissing,
    UnknownElement,
    UnknownConnection,
    UnknownDataType,
)
_CONFLICT = (
    DuplicateUsername,
    DuplicateGraph,
    DuplicateObject,
    DuplicateElementId,
    DuplicateConnection,
    DuplicateSelect,
    StaleDiagnostic,
)


def _violation_dicts(violations) -> list[dict]:
    return [
        {"code": v.code, "message": v.message, "field": v.field, "hint": v.hint}
        for v in violations
    ]


def _graph_diagnostic_dicts(diagnostics) -> list[dict]:
    return [
        {"element_id": d.element_id, "problem": d.problem, "hint": d.hint}
        for d in diagnostics
    ]


def _engine_error_response(exc: Exception) -> JSONResponse:
    if isinstance(exc, InvalidDefinition):
        # the hints carry the remediation ("start with letters", ...), so
        # they belong in the feedback next to the messages
        feedback = str(exc)
        hints = [v.hint for v in exc.violations if v.hint]
        if hints:
            feedback = feedback + " " + " ".join(hints)
        return fail(400, feedback, diagnostics=_violation_dicts(exc.violations))
    if isinstance(exc, IncompleteGraph):
        return fail(400, str(exc), diagnostics=_graph_diagnostic_dicts(exc.diagnostics))
    if isinstance(exc, _NOT_FOUND):
        return fail(404, str(exc))
    if isinstance(exc, _CONFLICT):
        return fail(409, str(exc))
    return fail(400, str(exc))


# -- request body helpers


async def _read_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise ApiError(400, "The request body must be a JSON object.") from None
    if not isinstance(body, dict):
        raise ApiError(400, "The request body must be a JSON object.")
    return body


def _str_field(body: dict, key: str, allow_empty: bool = False) -> str:
    value = body.get(key)
    if not isinstance(value, str) or (not value and not allow_empty):
        raise ApiError(400, f'The request needs a non-empty string field "{key}".')
    return value


def _dict_field(body: dict, key: str) -> dict:
    value = body.get(key)
    if not isinstance(value, dict):
        raise ApiError(400, f'The request needs an object field "{key}".')
    return value


def _int_field(body: dict, key: str, minimum: int = 0) -> int:
    value = body.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ApiError(400, f'The request needs an integer field "{key}" of at least {minimum}.')
    return value


def _int_param(request: Request, name: str, default: int, minimum: int) -> int:
    raw = request.query_params.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ApiError(400, f'The query parameter "{name}" must be an integer.') from None
    if value < minimum:
        raise ApiError(400, f'The query parameter "{name}" must be at least {minimum}.')
    return value


def _count(n: int, singular: str, plural: str | None = None) -> str:
    word = singular if n == 1 else (plural or singular + "s")
    return f"{n} {word}"


# -- engine call helpers


def _parse_sql(sql: str) -> SelectQuery:
    """Parse, turning syntax errors into editor-style feedback with position and fix."""
    try:
        return parse_select(sql)
    except ParseError as exc:
        raise ApiError(400, explain_error(exc, sql)) from None


def _plan_node_dict(node: PlanNode) -> dict:
    return {
        "operator": node.operator,
        "detail": node.detail,
        "cost": node.cost,
        "rows": node.rows,
        "total_cost": node.total_cost,
        "children": [_plan_node_dict(child) for child in node.children],
    }


def _tip_dict(diagnostic: Diagnostic) -> dict:
    rewrite = diagnostic.rewrite
    return {
        "rule": diagnostic.rule.value,
        "span": [diagnostic.span[0], diagnostic.span[1]],
        "message": diagnostic.message,
        "equivalence": diagnostic.equivalence.value,
        "fingerprint": diagnostic.fingerprint,
        "rewritten_sql": render_select(rewrite).text if rewrite is not None else None,
    }


def _sandbox_from_catalog(catalog: SchemaCatalog) -> MiniDb:
    """Empty relations matching the catalog, so eval works before any data load."""
    db = MiniDb()
    for table in catalog.tables.values():
        db.put(table.name, Relation(tuple(table.column_names()), []))
    return db


def _server_explain(url: str, sql: str) -> tuple[str | None, str]:
    """EXPLAIN on a live server; optional, and never required for estimates."""
    try:
        import psycopg  # deferred: the driver is optional
    except ImportError:
        try:
            import psycopg2 as psycopg  # type: ignore[no-redef]
        except ImportError:
            return None, "No PostgreSQL driver is installed; showing model estimates only."
    try:
        connection = psycopg.connect(url)
        try:
            cursor = connection.cursor()
            cursor.execute("EXPLAIN " + sql)
            rows = cursor.fetchall()
            cursor.close()
        finally:
            connection.close()
        return "\n".join(str(row[0]) for row in rows), "Live server EXPLAIN attached."
    except Exception as exc:
        return None, f"Live EXPLAIN failed: {exc}"


class ServiceState:
    """Everything one service process holds: storage, sessions, caches, locks.

    Projects are cached after first load; the per-project lock serializes
    mutations; sandboxes are per-project in-memory databases that never touch
    the saved project document.
    """

    def __init__(self, config: ServiceConfig, clock: Callable[[], float] = time.time):
        self.config = config
        self.workspace = Workspace(Path(config.storage_dir))
        self.sessions = SessionManager(config.session_ttl_seconds, clock=clock)
        self._projects: dict[tuple[str, str], Project] = {}
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._sandboxes: dict[tuple[str, str], MiniDb] = {}
        self._registry_lock = threading.Lock()

    def lock(self, owner: str, project_id: str) -> threading.Lock:
        key = (owner.lower(), project_id)
        with self._registry_lock:
            return self._locks.setdefault(key, threading.Lock())

    def project(self, owner: str, project_id: str) -> Project:
        key = (owner.lower(), project_id)
        with self._registry_lock:
            cached = self._projects.get(key)
        if cached is not None:
            return cached
        loaded = self.workspace.load(owner, project_id)
        with self._registry_lock:
            return self._projects.setdefault(key, loaded)

    def forget_project(self, owner: str, project_id: str) -> None:
        key = (owner.lower(), project_id)
        with self._registry_lock:
            self._projects.pop(key, None)
            self._locks.pop(key, None)
            self._sandboxes.pop(key, None)

    def sandbox(self, owner: str, project_id: str, project: Project) -> MiniDb:
        key = (owner.lower(), project_id)
        with self._registry_lock:
            box = self._sandboxes.get(key)
        if box is not None:
            return box
        # no fixture loaded yet: derive empty tables from the current catalog
        # on every access, so new tables show up without a reload
        return _sandbox_from_catalog(project.catalog)

    def set_sandbox(self, owner: str, project_id: str, db: MiniDb) -> None:
        with self._registry_lock:
            self._sandboxes[(owner.lower(), project_id)] = db


def create_app(config: ServiceConfig, clock: Callable[[], float] = time.time) -> FastAPI:
    state = ServiceState(config, clock=clock)
    app = FastAPI(title="pgstudio service", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.service = state

    if config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    # -- error mapping: one envelope, engine messages verbatim

    async def on_api_error(request: Request, exc: ApiError) -> JSONResponse:
        return fail(exc.status_code, exc.feedback, diagnostics=exc.diagnostics)

    async def on_engine_error(request: Request, exc: Exception) -> JSONResponse:
        return _engine_error_response(exc)

    async def on_http_error(request: Request, exc: StarletteHTTPException) -> JSONResponse:
        detail = str(exc.detail) if exc.detail else "The request failed."
        return fail(exc.status_code, detail)

    async def on_validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return fail(400, "The request does not fit this endpoint. Check the path and parameters.")

    async def on_unexpected(request: Request, exc: Exception) -> JSONResponse:
        return fail(500, "The service hit an unexpected internal error while handling this request.")

    app.add_exception_handler(ApiError, on_api_error)
    for engine_base in (
        WorkspaceError,
        CatalogError,
        GraphError,
        AdvisorError,
        ParseError,
        EvalError,
        UnrecognizedPseudocode,
        UnknownObjectKind,
    ):
        app.add_exception_handler(engine_base, on_engine_error)
    app.add_exception_handler(StarletteHTTPException, on_http_error)
    app.add_exception_handler(RequestValidationError, on_validation_error)
    app.add_exception_handler(Exception, on_unexpected)

    # -- auth plumbing

    def current_user(request: Request) -> str:
        header = request.headers.get("authorization", "")
        token = header[7:].strip() if header.lower().startswith("bearer ") else None
        username = state.sessions.resolve(token)
        if username is None:
            # missing, unknown, and expired tokens are indistinguishable
            raise ApiError(401, AUTH_REQUIRED_FEEDBACK)
        return username

    def mutate(user: str, project_id: str, mutation: dict):
        """Record one mutation and persist; the engine validates everything."""
        project = state.project(user, project_id)
        with state.lock(user, project_id):
            entry = record_and_apply(project, mutation, actor=user)
            state.workspace.save(project)
        return project, entry

    def graph_of(project: Project, graph_name: str) -> QueryGraph:
        graph = project.graphs.get(graph_name)
        if graph is None:
            raise UnknownGraph(graph_name)
        return graph

    def session_payload(session) -> dict:
        return {
            "token": session.token,
            "username": session.username,
            "ttl_seconds": state.sessions.ttl_seconds,
        }

    # -- health (outside /api: a liveness probe, not part of the API contract)

    @app.get("/healthz")
    async def healthz() -> JSONResponse:
        return ok("Service is up.")

    # -- accounts and sessions

    @app.post("/api/auth/register")
    async def register(request: Request) -> JSONResponse:
        body = await _read_body(request)
        username = _str_field(body, "username")
        password = _str_field(body, "password", allow_empty=True)
        account = state.workspace.create_user(username, password)
        session = state.sessions.create(account.username)
        return ok(
            f'Welcome, {account.username}! Your account is ready.',
            session_payload(session),
            status_code=201,
        )

    @app.post("/api/auth/login")
    async def login(request: Request) -> JSONResponse:
        body = await _read_body(request)
        username = _str_field(body, "username")
        password = _str_field(body, "password", allow_empty=True)
        account = state.workspace.authenticate(username, password)
        if account is None:
            raise ApiError(401, "Wrong username or password.")
        session = state.sessions.create(account.username)
        return ok(f"Signed in as {account.username}.", session_payload(session))

    @app.post("/api/auth/logout")
    async def logout(request: Request) -> JSONResponse:
        current_user(request)
        header = request.headers.get("authorization", "")
        state.sessions.drop(header[7:].strip())
        return ok("Signed out. The token no longer works.")

    # -- projects

    @app.get("/api/projects")
    async def list_projects(request: Request) -> JSONResponse:
        user = current_user(request)
        rows = state.workspace.list_projects(user)
        payload = [{"id": project_id, "name": name} for project_id, name in rows]
        return ok(f"You have {_count(len(rows), 'project')}.", payload)

    @app.post("/api/projects")
    async def create_project(request: Request) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        name = _str_field(body, "name")
        project = state.workspace.create_project(user, name)
        return ok(
            f'Project "{project.name}" created.',
            {"id": project.id, "name": project.name},
            status_code=201,
        )

    @app.get("/api/projects/{project_id}")
    async def get_project(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        payload = {"project": save_project(project), "state_hash": state_hash(project)}
        return ok(f'Project "{project.name}" loaded.', payload)

    @app.patch("/api/projects/{project_id}")
    async def rename_project(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        name = _str_field(body, "name")
        project, entry = mutate(user, project_id, {"op": "rename_project", "name": name})
        return ok(f"{entry.human_label}.", {"id": project.id, "name": project.name})

    @app.delete("/api/projects/{project_id}")
    async def delete_project(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        with state.lock(user, project_id):
            state.workspace.delete_project(user, project_id)
        state.forget_project(user, project_id)
        return ok(f'Project "{project.name}" deleted.', {"id": project_id})

    # -- schema catalog and DDL

    @app.get("/api/projects/{project_id}/catalog")
    async def get_catalog(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        document = catalog_to_dict(project.catalog)
        n = len(document["tables"])
        return ok(f"The catalog holds {_count(n, 'table')}.", document)

    def ddl_definition(kind: str, body: dict):
        """Parse the request's definition into the catalog's dataclass."""
        if kind == "schema":
            return _str_field(body, "name")
        parsers = {
            "database": database_from_dict,
            "table": table_from_dict,
            "index": index_from_dict,
            "trigger": trigger_from_dict,
        }
        raw = _dict_field(body, "definition")
        try:
            return parsers[kind](raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(400, f"Bad {kind} definition: {exc}") from None

    def ddl_render(kind: str, definition, catalog: SchemaCatalog) -> str:
        if kind == "database":
            return render_create_database(definition)
        if kind == "schema":
            return render_create_schema(definition)
        if kind == "table":
            return render_create_table(definition, catalog)
        if kind == "index":
            return render_create_index(definition, catalog)
        return render_create_trigger(definition, catalog)

    def require_ddl_kind(kind: str) -> str:
        if kind not in _DDL_KINDS:
            raise ApiError(
                404, f"Unknown object kind {kind!r}. One of: {', '.join(_DDL_KINDS)}."
            )
        return kind

    @app.post("/api/projects/{project_id}/ddl/{kind}/validate")
    async def validate_ddl(request: Request, project_id: str, kind: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        require_ddl_kind(kind)
        body = await _read_body(request)
        definition = ddl_definition(kind, body)
        if kind == "database":
            result = validate_database(definition)
        elif kind == "schema":
            result = validate_identifier(definition, field="name")
        elif kind == "table":
            result = validate_table(definition, project.catalog)
        elif kind == "index":
            result = validate_index(definition, project.catalog)
        else:
            result = validate_trigger(definition, project.catalog)
        rendered = ddl_render(kind, definition, project.catalog) if result.ok else None
        payload = {"ok": result.ok, "ui_hints": result.ui_hints, "ddl": rendered}
        diagnostics = _violation_dicts(result.violations)
        if result.ok:
            return ok("The definition looks good.", payload, diagnostics)
        n = len(result.violations)
        return ok(f"Found {_count(n, 'problem')} with this definition.", payload, diagnostics)

    @app.post("/api/projects/{project_id}/ddl/{kind}")
    async def create_ddl(request: Request, project_id: str, kind: str) -> JSONResponse:
        user = current_user(request)
        require_ddl_kind(kind)
        body = await _read_body(request)
        definition = ddl_definition(kind, body)
        if kind == "schema":
            mutation = {"op": "create_schema", "name": definition}
        else:
            mutation = {"op": f"create_{kind}", "definition": _dict_field(body, "definition")}
        project, entry = mutate(user, project_id, mutation)
        rendered = ddl_render(kind, definition, project.catalog)
        return ok(f"{entry.human_label}.", {"ddl": rendered}, status_code=201)

    @app.delete("/api/projects/{project_id}/ddl/{kind}/{name}")
    async def drop_ddl(request: Request, project_id: str, kind: str, name: str) -> JSONResponse:
        user = current_user(request)
        require_ddl_kind(kind)
        _, entry = mutate(user, project_id, {"op": f"drop_{kind}", "name": name})
        return ok(f"{entry.human_label}.", {"name": name})

    # -- query canvases

    @app.get("/api/projects/{project_id}/graphs")
    async def list_graphs(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        names = sorted(project.graphs)
        return ok(f"The project has {_count(len(names), 'canvas', 'canvases')}.", names)

    @app.post("/api/projects/{project_id}/graphs")
    async def create_graph(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        name = _str_field(body, "name")
        project, entry = mutate(user, project_id, {"op": "create_graph", "graph": name})
        document = graph_to_dict(project.graphs[name])
        return ok(f"{entry.human_label}.", {"name": name, "document": document}, status_code=201)

    @app.get("/api/projects/{project_id}/graphs/{graph_name}")
    async def get_graph(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        graph = graph_of(project, graph_name)
        return ok(f'Canvas "{graph_name}" loaded.', {"document": graph_to_dict(graph)})

    @app.delete("/api/projects/{project_id}/graphs/{graph_name}")
    async def delete_graph(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        _, entry = mutate(user, project_id, {"op": "delete_graph", "graph": graph_name})
        return ok(f"{entry.human_label}.", {"name": graph_name})

    def graph_mutation_response(project: Project, graph_name: str, entry, extra: dict | None = None):
        payload = {"document": graph_to_dict(project.graphs[graph_name])}
        if extra:
            payload.update(extra)
        return ok(f"{entry.human_label}.", payload)

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/drop-element")
    async def drop_element(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "drop_element",
            "graph": graph_name,
            "kind": body.get("kind"),
            "x": body.get("x"),
            "y": body.get("y"),
        }
        project, entry = mutate(user, project_id, mutation)
        # the recorded operation carries the id the canvas allocated
        element_id = entry.operation["element_id"]
        return graph_mutation_response(project, graph_name, entry, {"element_id": element_id})

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/move-element")
    async def move_element(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "move_element",
            "graph": graph_name,
            "element_id": body.get("element_id"),
            "x": body.get("x"),
            "y": body.get("y"),
        }
        project, entry = mutate(user, project_id, mutation)
        return graph_mutation_response(project, graph_name, entry)

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/delete-element")
    async def delete_element(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "delete_element",
            "graph": graph_name,
            "element_id": body.get("element_id"),
        }
        project, entry = mutate(user, project_id, mutation)
        return graph_mutation_response(project, graph_name, entry)

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/connect")
    async def connect_elements(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "connect",
            "graph": graph_name,
            "from": body.get("from"),
            "to": body.get("to"),
        }
        project, entry = mutate(user, project_id, mutation)
        return graph_mutation_response(project, graph_name, entry)

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/disconnect")
    async def disconnect_elements(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "disconnect",
            "graph": graph_name,
            "from": body.get("from"),
            "to": body.get("to"),
        }
        project, entry = mutate(user, project_id, mutation)
        return graph_mutation_response(project, graph_name, entry)

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/set-property")
    async def set_element_property(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "set_property",
            "graph": graph_name,
            "element_id": body.get("element_id"),
            "key": body.get("key"),
            "value": body.get("value"),
        }
        project, entry = mutate(user, project_id, mutation)
        return graph_mutation_response(project, graph_name, entry)

    @app.post("/api/projects/{project_id}/graphs/{graph_name}/clear-property")
    async def clear_element_property(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        mutation = {
            "op": "clear_property",
            "graph": graph_name,
            "element_id": body.get("element_id"),
            "key": body.get("key"),
        }
        project, entry = mutate(user, project_id, mutation)
        return graph_mutation_response(project, graph_name, entry)

    @app.get("/api/projects/{project_id}/graphs/{graph_name}/elements/{element_id}/properties")
    async def element_properties(
        request: Request, project_id: str, graph_name: str, element_id: str
    ) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        graph = graph_of(project, graph_name)
        element = graph.element(element_id)
        schema = property_schema_for(graph, element_id, project.catalog)
        payload = {
            "element_id": element_id,
            "kind": element.kind.value,
            "current": element.properties,
            "entries": [
                {
                    "key": entry.key,
                    "value_kind": entry.value_kind,
                    "allowed": list(entry.allowed),
                    "required": entry.required,
                    "help_text": entry.help_text,
                }
                for entry in schema.entries
            ],
        }
        return ok(f"Properties of the {element.kind.display} element.", payload)

    @app.get("/api/projects/{project_id}/graphs/{graph_name}/validate")
    async def validate_canvas(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        graph = graph_of(project, graph_name)
        diagnostics = validate_graph(graph, project.catalog)
        payload = {"ok": not diagnostics}
        if not diagnostics:
            return ok("The canvas describes a complete query.", payload, [])
        first = diagnostics[0]
        feedback = f"{_count(len(diagnostics), 'step')} left to finish: {first.problem} {first.hint}"
        return ok(feedback, payload, _graph_diagnostic_dicts(diagnostics))

    @app.get("/api/projects/{project_id}/graphs/{graph_name}/to-sql")
    async def canvas_to_sql(request: Request, project_id: str, graph_name: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        graph = graph_of(project, graph_name)
        query = graph_to_ast(graph, project.catalog)
        canonical = render_select(query)
        payload = {
            "sql": canonical.text,
            "clause_spans": canonical.clause_spans,
            "query": query_to_dict(query),
        }
        return ok("Here is the SQL this canvas describes.", payload)

    # -- SQL editor operations (project-scoped: the catalog gives them context)

    @app.post("/api/projects/{project_id}/sql/parse")
    async def sql_parse(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        state.project(user, project_id)
        body = await _read_body(request)
        query = _parse_sql(_str_field(body, "sql"))
        canonical = render_select(query)
        payload = {"query": query_to_dict(query), "sql": canonical.text}
        return ok("Parsed without problems.", payload)

    @app.post("/api/projects/{project_id}/sql/render")
    async def sql_render(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        state.project(user, project_id)
        body = await _read_body(request)
        query = _parse_sql(_str_field(body, "sql"))
        canonical = render_select(query)
        payload = {"sql": canonical.text, "clause_spans": canonical.clause_spans}
        return ok("Here is the canonical form.", payload)

    @app.post("/api/projects/{project_id}/sql/analyze")
    async def sql_analyze(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        body = await _read_body(request)
        query = _parse_sql(_str_field(body, "sql"))
        canonical = render_select(query)
        tips = analyze(query, project.catalog)
        payload = {
            "sql": canonical.text,
            "fingerprint": query_fingerprint(query),
            "tips": [_tip_dict(tip) for tip in tips],
        }
        if not tips:
            return ok("No tips. The query already looks tight.", payload)
        return ok(f"Found {_count(len(tips), 'tip')}.", payload)

    @app.post("/api/projects/{project_id}/sql/apply-rewrite")
    async def sql_apply_rewrite(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        body = await _read_body(request)
        query = _parse_sql(_str_field(body, "sql"))
        rule_raw = _str_field(body, "rule")
        try:
            rule = Rule(rule_raw)
        except ValueError:
            names = ", ".join(r.value for r in Rule)
            raise ApiError(400, f"Unknown rule {rule_raw!r}. The rules are: {names}.") from None
        matches = [tip for tip in analyze(query, project.catalog) if tip.rule is rule]
        if not matches:
            raise ApiError(
                400,
                f"No {rule.value} tip applies to this query. Analyze it again for current tips.",
            )
        diagnostic = matches[0]
        claimed = body.get("fingerprint")
        if isinstance(claimed, str) and claimed:
            # the engine refuses tips carried over from an older query text
            diagnostic = dataclasses.replace(diagnostic, fingerprint=claimed)
        rewritten = apply_rewrite(query, diagnostic)
        canonical = render_select(rewritten)
        payload = {
            "sql": canonical.text,
            "rule": rule.value,
            "equivalence": diagnostic.equivalence.value,
            "fingerprint": query_fingerprint(rewritten),
        }
        feedback = "Rewrite applied."
        if diagnostic.equivalence is not Equivalence.PRESERVING:
            feedback += " Careful: this one can change results, so confirm it matches your intent."
        return ok(feedback, payload)

    @app.post("/api/projects/{project_id}/sql/plan")
    async def sql_plan(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        body = await _read_body(request)
        query = _parse_sql(_str_field(body, "sql"))
        stats_raw = body.get("stats", [])
        if not isinstance(stats_raw, list):
            raise ApiError(400, 'The "stats" field must be a list of {table, row_count} objects.')
        stats = []
        for item in stats_raw:
            if not isinstance(item, dict):
                raise ApiError(400, 'Each stats entry must be an object with "table" and "row_count".')
            table = _str_field(item, "table")
            rows = _int_field(item, "row_count")
            stats.append(TableStats(table, rows))
        report = plan(query, project.catalog, stats)
        canonical = render_select(query)
        payload = {
            "plan": _plan_node_dict(report.plan),
            "plan_text": "\n".join(report.plan.lines()),
            "estimated_cost": report.estimated_cost,
            "estimated_planning_time_ms": report.estimated_planning_time_ms,
            "estimated_execution_time_ms": report.estimated_execution_time_ms,
            "plan_count": report.plan_count,
            "alternatives": [
                {"plan": _plan_node_dict(node), "total_cost": cost}
                for node, cost in report.alternatives
            ],
            "comparison": compare_plans(query, project.catalog, stats),
        }
        if state.config.postgres_url:
            explain, note = _server_explain(state.config.postgres_url, canonical.text)
            payload["server_explain"] = explain
            payload["server_explain_note"] = note
        feedback = (
            f"Compared {report.plan_count} possible plans. All numbers are estimates "
            "from a fixed teaching model, not measurements."
        )
        return ok(feedback, payload)

    @app.post("/api/projects/{project_id}/sql/complete")
    async def sql_complete(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        body = await _read_body(request)
        text = _str_field(body, "text", allow_empty=True)
        cursor = _int_field(body, "cursor")
        if cursor > len(text):
            raise ApiError(400, 'The "cursor" field points past the end of the text.')
        candidates = complete(text, cursor, project.catalog)
        payload = {
            "replacement_start": replacement_start(text, cursor),
            "candidates": [
                {
                    "text": c.text,
                    "kind": c.kind,
                    "rank": c.rank,
                    "explanation": c.explanation,
                }
                for c in candidates
            ],
        }
        if not candidates:
            return ok("No suggestions at this spot.", payload)
        return ok(f"{_count(len(candidates), 'suggestion')}.", payload)

    @app.post("/api/projects/{project_id}/sql/pseudocode")
    async def sql_pseudocode(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        body = await _read_body(request)
        sketch = parse_pseudocode(_str_field(body, "text"))
        result = generate_from_pseudocode(sketch, project.catalog)
        payload = {
            "sql": result.sql.text,
            "clause_spans": result.sql.clause_spans,
            "warnings": list(result.warnings),
        }
        if result.warnings:
            return ok(
                f"Generated SQL with {_count(len(result.warnings), 'caveat')}: "
                + " ".join(result.warnings),
                payload,
            )
        return ok("Generated SQL from the sketch.", payload)

    # -- sandbox: a per-project in-memory database for trying queries

    @app.get("/api/projects/{project_id}/sandbox")
    async def get_sandbox(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        db = state.sandbox(user, project_id, project)
        fixture = db.to_fixture()
        n = len(fixture["tables"])
        return ok(f"The sandbox holds {_count(n, 'table')}.", fixture)

    @app.put("/api/projects/{project_id}/sandbox")
    async def load_sandbox(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        state.project(user, project_id)
        body = await _read_body(request)
        fixture = _dict_field(body, "fixture")
        try:
            db = MiniDb.from_fixture(fixture)
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(400, f"Bad fixture: {exc}") from None
        state.set_sandbox(user, project_id, db)
        return ok(
            f"Sandbox loaded with {_count(len(db.tables), 'table')}.",
            {"tables": sorted(db.tables)},
        )

    @app.post("/api/projects/{project_id}/sandbox/eval")
    async def eval_in_sandbox(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        body = await _read_body(request)
        query = _parse_sql(_str_field(body, "sql"))
        # deliberately not under the project lock: evaluation only reads
        db = state.sandbox(user, project_id, project)
        relation = eval_select(query, db)
        payload = {
            "columns": list(relation.columns),
            "rows": [list(row) for row in relation.rows],
            "row_count": len(relation.rows),
        }
        return ok(f"Returned {_count(len(relation.rows), 'row')}.", payload)

    # -- saved queries

    @app.get("/api/projects/{project_id}/queries")
    async def list_queries(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        payload = dict(sorted(project.saved_queries.items()))
        return ok(f"{_count(len(payload), 'saved query', 'saved queries')}.", payload)

    @app.put("/api/projects/{project_id}/queries/{name}")
    async def save_query(request: Request, project_id: str, name: str) -> JSONResponse:
        user = current_user(request)
        body = await _read_body(request)
        sql = _str_field(body, "sql")
        _parse_sql(sql)  # surface syntax problems with position and fix
        project, entry = mutate(user, project_id, {"op": "save_query", "name": name, "sql": sql})
        return ok(f"{entry.human_label}.", {"name": name, "sql": project.saved_queries[name]})

    @app.delete("/api/projects/{project_id}/queries/{name}")
    async def forget_query(request: Request, project_id: str, name: str) -> JSONResponse:
        user = current_user(request)
        _, entry = mutate(user, project_id, {"op": "forget_query", "name": name})
        return ok(f"{entry.human_label}.", {"name": name})

    # -- action history

    @app.get("/api/projects/{project_id}/history")
    async def get_history(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        limit = _int_param(request, "limit", default=50, minimum=1)
        offset = _int_param(request, "offset", default=0, minimum=0)
        rows = history_view(project, limit=limit, offset=offset)
        payload = {
            "entries": [
                {"sequence": sequence, "timestamp": timestamp, "label": label}
                for sequence, timestamp, label in rows
            ],
            "total": len(project.history.entries),
            "redoable": len(project.history.redo),
        }
        return ok(f"{_count(len(project.history.entries), 'action')} on record.", payload)

    @app.post("/api/projects/{project_id}/history/undo")
    async def undo_last(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        with state.lock(user, project_id):
            entry = undo_action(project)
            state.workspace.save(project)
        payload = {
            "sequence": entry.sequence,
            "label": entry.human_label,
            "state_hash": state_hash(project),
        }
        return ok(f"Undid: {entry.human_label}.", payload)

    @app.post("/api/projects/{project_id}/history/redo")
    async def redo_last(request: Request, project_id: str) -> JSONResponse:
        user = current_user(request)
        project = state.project(user, project_id)
        with state.lock(user, project_id):
            entry = redo_action(project)
            state.workspace.save(project)
        payload = {
            "sequence": entry.sequence,
            "label": entry.human_label,
            "state_hash": state_hash(project),
        }
        return ok(f"Redid: {entry.human_label}.", payload)

    # -- data types and context menus

    @app.get("/api/types")
    async def list_types(request: Request) -> JSONResponse:
        current_user(request)
        payload = [
            {"name": d.name, "category": d.category, "tooltip": d.tooltip}
            for d in all_descriptors()
        ]
        return ok(f"{_count(len(payload), 'data type')}.", payload)

    @app.get("/api/types/{name}")
    async def describe_type(request: Request, name: str) -> JSONResponse:
        current_user(request)
        descriptor = describe_data_type(name)
        payload = {
            "name": descriptor.name,
            "category": descriptor.category,
            "tooltip": descriptor.tooltip,
        }
        return ok(f"{descriptor.name}: {descriptor.tooltip}", payload)

    @app.get("/api/objects/context-actions")
    async def object_context_actions(request: Request) -> JSONResponse:
        current_user(request)
        kind = request.query_params.get("kind")
        if not kind:
            raise ApiError(400, 'Pass a "kind" query parameter, e.g. ?kind=database.')
        actions = context_actions(kind)
        payload = {"kind": kind.strip().lower(), "actions": actions}
        return ok(f"{_count(len(actions), 'action')} for a {payload['kind']}.", payload)

    return app
