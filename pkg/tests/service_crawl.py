"""A scripted walk over every service route, shared between test suites.

The crawl registers a user, builds a project, and hits each endpoint with at
least one valid and one invalid request, collecting every response. Callers
assert what they care about: the envelope shape, route coverage, or the
history-completeness invariant (the crawl counts its own mutating calls).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from starlette.routing import Match

CUSTOMERS_TABLE = {
    "definition": {
        "name": "customers",
        "columns": [
            {"name": "id", "data_type": "serial"},
            {"name": "name", "data_type": "text"},
            {"name": "age", "data_type": "integer"},
            {"name": "city", "data_type": "text"},
        ],
    }
}

CUSTOMERS_FIXTURE = {
    "fixture": {
        "tables": [
            {
                "name": "customers",
                "columns": ["id", "name", "age", "city"],
                "rows": [
                    [1, "ana", 34, "lisbon"],
                    [2, "bo", 19, "oslo"],
                    [3, "cleo", 41, "lisbon"],
                ],
            }
        ]
    }
}


@dataclass
class CrawlOutcome:
    base: str
    auth: dict[str, str]
    responses: list = field(default_factory=list)
    mutation_calls: int = 0  # successful calls that must each append one history entry


def route_templates(app) -> set[tuple[str, str]]:
    return {
        (method, route.path)
        for route in app.routes
        if hasattr(route, "methods")
        for method in route.methods
        if method != "HEAD"
    }


def template_of(app, method: str, path: str) -> str | None:
    scope = {"type": "http", "path": path, "method": method}
    for route in app.routes:
        match, _ = route.matches(scope)
        if match is Match.FULL:
            return route.path
    return None


def visited_templates(app, responses) -> set[tuple[str, str]]:
    visited = set()
    for response in responses:
        template = template_of(app, response.request.method, response.request.url.path)
        if template is not None:
            visited.add((response.request.method, template))
    return visited


def crawl_every_route(client) -> CrawlOutcome:
    """Drive the scripted session. Asserts each expected status along the way."""
    outcome = CrawlOutcome(base="", auth={})

    def hit(method: str, url: str, expected: int, mutates: bool = False, **kw):
        response = getattr(client, method.lower())(url, **kw)
        assert response.status_code == expected, (
            f"{method} {url}: {response.status_code} {response.text}"
        )
        outcome.responses.append(response)
        if mutates and response.status_code < 400:
            outcome.mutation_calls += 1
        return response.json()

    # accounts
    body = hit("POST", "/api/auth/register", 201, json={"username": "bea", "password": "pw"})
    auth = {"Authorization": f"Bearer {body['payload']['token']}"}
    outcome.auth = auth
    hit("POST", "/api/auth/register", 400, json={})
    hit("POST", "/api/auth/register", 409, json={"username": "bea", "password": "pw"})
    spare = hit("POST", "/api/auth/login", 200, json={"username": "bea", "password": "pw"})
    hit("POST", "/api/auth/login", 401, json={"username": "bea", "password": "nope"})
    hit("POST", "/api/auth/logout", 200,
        headers={"Authorization": f"Bearer {spare['payload']['token']}"})
    hit("POST", "/api/auth/logout", 401)

    # projects
    hit("GET", "/api/projects", 200, headers=auth)
    hit("GET", "/api/projects", 401)
    pid = hit("POST", "/api/projects", 201, json={"name": "Crawl"}, headers=auth)["payload"]["id"]
    hit("POST", "/api/projects", 400, json={}, headers=auth)
    base = f"/api/projects/{pid}"
    outcome.base = base
    hit("GET", base, 200, headers=auth)
    hit("GET", "/api/projects/feedbeef4242", 404, headers=auth)
    hit("PATCH", base, 200, mutates=True, json={"name": "Crawl 2"}, headers=auth)
    hit("PATCH", base, 400, json={}, headers=auth)
    scratch = hit("POST", "/api/projects", 201, json={"name": "Scratch"}, headers=auth)
    hit("DELETE", f"/api/projects/{scratch['payload']['id']}", 200, headers=auth)

    # ddl
    hit("GET", f"{base}/catalog", 200, headers=auth)
    hit("POST", f"{base}/ddl/table", 201, mutates=True, json=CUSTOMERS_TABLE, headers=auth)
    hit("POST", f"{base}/ddl/table", 400,
        json={"definition": {"name": "9lives", "columns": []}}, headers=auth)
    hit("POST", f"{base}/ddl/database", 201, mutates=True,
        json={"definition": {"name": "appdb"}}, headers=auth)
    hit("POST", f"{base}/ddl/schema", 201, mutates=True,
        json={"name": "reporting"}, headers=auth)
    hit("POST", f"{base}/ddl/index", 201, mutates=True, json={
        "definition": {"name": "idx_age", "table": "customers",
                       "columns": [{"name": "age"}], "method": "btree", "unique": False}
    }, headers=auth)
    hit("POST", f"{base}/ddl/trigger", 201, mutates=True, json={
        "definition": {"name": "trg_audit", "timing": "AFTER", "event": "INSERT",
                       "target": "customers", "function_name": "audit_row"}
    }, headers=auth)
    hit("POST", f"{base}/ddl/widget", 404, json={"definition": {"name": "w"}}, headers=auth)
    hit("POST", f"{base}/ddl/table/validate", 200, json={
        "definition": {"name": "parcels", "columns": [{"name": "id", "data_type": "integer"}]}
    }, headers=auth)
    hit("POST", f"{base}/ddl/index/validate", 200, json={
        "definition": {"name": "idx_bad", "table": "customers",
                       "columns": [{"name": "age"}], "method": "hash", "unique": True}
    }, headers=auth)
    hit("DELETE", f"{base}/ddl/index/idx_age", 200, mutates=True, headers=auth)
    hit("DELETE", f"{base}/ddl/index/ghost", 404, headers=auth)

    # canvases
    hit("GET", f"{base}/graphs", 200, headers=auth)
    hit("POST", f"{base}/graphs", 201, mutates=True, json={"name": "main"}, headers=auth)
    hit("POST", f"{base}/graphs", 409, json={"name": "main"}, headers=auth)
    g = f"{base}/graphs/main"
    hit("GET", g, 200, headers=auth)
    hit("GET", f"{base}/graphs/ghost", 404, headers=auth)
    sel = hit("POST", f"{g}/drop-element", 200, mutates=True,
              json={"kind": "SELECT", "x": 420, "y": 60}, headers=auth)["payload"]["element_id"]
    tab = hit("POST", f"{g}/drop-element", 200, mutates=True,
              json={"kind": "TABLE", "x": 80, "y": 300}, headers=auth)["payload"]["element_id"]
    whe = hit("POST", f"{g}/drop-element", 200, mutates=True,
              json={"kind": "WHERE", "x": 80, "y": 60}, headers=auth)["payload"]["element_id"]
    hit("POST", f"{g}/drop-element", 400, json={"kind": "BANANA", "x": 0, "y": 0}, headers=auth)
    hit("POST", f"{g}/connect", 200, mutates=True, json={"from": tab, "to": sel}, headers=auth)
    hit("POST", f"{g}/connect", 400, json={"from": sel, "to": tab}, headers=auth)
    hit("POST", f"{g}/connect", 200, mutates=True, json={"from": whe, "to": sel}, headers=auth)
    hit("POST", f"{g}/move-element", 200, mutates=True,
        json={"element_id": tab, "x": 90, "y": 310}, headers=auth)
    hit("POST", f"{g}/move-element", 404,
        json={"element_id": "e99", "x": 0, "y": 0}, headers=auth)
    incomplete = hit("GET", f"{g}/validate", 200, headers=auth)
    assert incomplete["payload"]["ok"] is False
    hit("GET", f"{g}/to-sql", 400, headers=auth)
    hit("POST", f"{g}/set-property", 200, mutates=True,
        json={"element_id": tab, "key": "table_name", "value": "customers"}, headers=auth)
    hit("POST", f"{g}/set-property", 200, mutates=True,
        json={"element_id": sel, "key": "columns", "value": ["name", "age"]}, headers=auth)
    for key, value in (("column", "age"), ("operator", ">"), ("value", "30")):
        hit("POST", f"{g}/set-property", 200, mutates=True,
            json={"element_id": whe, "key": key, "value": value}, headers=auth)
    hit("POST", f"{g}/set-property", 400,
        json={"element_id": tab, "key": "bogus", "value": "x"}, headers=auth)
    hit("GET", f"{g}/elements/{tab}/properties", 200, headers=auth)
    hit("GET", f"{g}/elements/e99/properties", 404, headers=auth)
    complete_check = hit("GET", f"{g}/validate", 200, headers=auth)
    assert complete_check["payload"]["ok"] is True
    generated = hit("GET", f"{g}/to-sql", 200, headers=auth)
    assert generated["payload"]["sql"] == "SELECT name, age FROM customers WHERE age > 30;"
    hit("POST", f"{g}/clear-property", 200, mutates=True,
        json={"element_id": whe, "key": "value"}, headers=auth)
    hit("POST", f"{g}/clear-property", 400,
        json={"element_id": whe, "key": "value"}, headers=auth)
    hit("POST", f"{g}/disconnect", 200, mutates=True,
        json={"from": whe, "to": sel}, headers=auth)
    hit("POST", f"{g}/disconnect", 404, json={"from": whe, "to": sel}, headers=auth)
    hit("POST", f"{g}/delete-element", 200, mutates=True,
        json={"element_id": whe}, headers=auth)
    hit("POST", f"{g}/delete-element", 404, json={"element_id": whe}, headers=auth)
    hit("POST", f"{base}/graphs", 201, mutates=True, json={"name": "scratch"}, headers=auth)
    hit("DELETE", f"{base}/graphs/scratch", 200, mutates=True, headers=auth)

    # sql editor
    hit("POST", f"{base}/sql/parse", 200, json={"sql": "SELECT name FROM customers"}, headers=auth)
    hit("POST", f"{base}/sql/parse", 400, json={"sql": "SELECT FROM"}, headers=auth)
    hit("POST", f"{base}/sql/render", 200, json={"sql": "select 1 from customers"}, headers=auth)
    hit("POST", f"{base}/sql/render", 400, json={}, headers=auth)
    analyzed = hit("POST", f"{base}/sql/analyze", 200,
                   json={"sql": "SELECT * FROM customers"}, headers=auth)
    tip = analyzed["payload"]["tips"][0]
    hit("POST", f"{base}/sql/apply-rewrite", 200, json={
        "sql": "SELECT * FROM customers", "rule": tip["rule"], "fingerprint": tip["fingerprint"]
    }, headers=auth)
    hit("POST", f"{base}/sql/apply-rewrite", 400, json={
        "sql": "SELECT * FROM customers", "rule": "NO_SUCH_RULE"
    }, headers=auth)
    hit("POST", f"{base}/sql/plan", 200,
        json={"sql": "SELECT name FROM customers WHERE age > 30"}, headers=auth)
    hit("POST", f"{base}/sql/plan", 400,
        json={"sql": "SELECT name FROM customers", "stats": "lots"}, headers=auth)
    hit("POST", f"{base}/sql/complete", 200,
        json={"text": "SELECT name FROM cu", "cursor": 19}, headers=auth)
    hit("POST", f"{base}/sql/complete", 400,
        json={"text": "SELECT", "cursor": 99}, headers=auth)
    hit("POST", f"{base}/sql/pseudocode", 200,
        json={"text": "get name from customers"}, headers=auth)
    hit("POST", f"{base}/sql/pseudocode", 400,
        json={"text": "frobnicate everything"}, headers=auth)

    # sandbox
    hit("GET", f"{base}/sandbox", 200, headers=auth)
    hit("PUT", f"{base}/sandbox", 200, json=CUSTOMERS_FIXTURE, headers=auth)
    hit("PUT", f"{base}/sandbox", 400,
        json={"fixture": {"tables": [{"bad": True}]}}, headers=auth)
    hit("POST", f"{base}/sandbox/eval", 200,
        json={"sql": "SELECT name FROM customers WHERE age > 30"}, headers=auth)
    hit("POST", f"{base}/sandbox/eval", 400,
        json={"sql": "SELECT name FROM martians"}, headers=auth)

    # saved queries
    hit("GET", f"{base}/queries", 200, headers=auth)
    hit("PUT", f"{base}/queries/adults", 200, mutates=True,
        json={"sql": "SELECT name FROM customers WHERE age >= 18"}, headers=auth)
    hit("PUT", f"{base}/queries/broken", 400, json={"sql": "SELECT WHERE"}, headers=auth)
    hit("DELETE", f"{base}/queries/adults", 200, mutates=True, headers=auth)
    hit("DELETE", f"{base}/queries/adults", 404, headers=auth)

    # history
    hit("GET", f"{base}/history", 200, headers=auth)
    hit("GET", f"{base}/history", 400, params={"limit": "many"}, headers=auth)
    hit("POST", f"{base}/history/undo", 200, headers=auth)
    hit("POST", f"{base}/history/redo", 200, headers=auth)

    # types and context menus
    hit("GET", "/api/types", 200, headers=auth)
    hit("GET", "/api/types/serial", 200, headers=auth)
    hit("GET", "/api/types/intger", 404, headers=auth)
    hit("GET", "/api/objects/context-actions", 200, params={"kind": "column"}, headers=auth)
    hit("GET", "/api/objects/context-actions", 400, params={"kind": "martian"}, headers=auth)
    hit("GET", "/healthz", 200)

    # off the map entirely: still the envelope
    hit("GET", "/api/nowhere", 404, headers=auth)

    return outcome
