"""Command line entry point for the studio HTTP service."""

from __future__ import annotations

from pathlib import Path

import click

from pgstudio.service import ServiceConfig, create_app


@click.command()
@click.option("--host", default="127.0.0.1", show_default=True,
              help="Address to listen on.")
@click.option("--port", default=8400, show_default=True, type=int,
              help="Port to listen on.")
@click.option("--storage-dir", default="./studio-data", show_default=True,
              type=click.Path(file_okay=False),
              help="Directory holding accounts and project documents.")
@click.option("--session-ttl", default=86400, show_default=True, type=int,
              help="Seconds of inactivity before a sign-in expires.")
@click.option("--postgres-url", default=None,
              help="Optional live server; when set, plan responses attach its EXPLAIN output.")
@click.option("--cors-origin", default=None,
              help="Origin allowed to call the API from a browser, e.g. http://localhost:5173.")
def main(host: str, port: int, storage_dir: str, session_ttl: int,
         postgres_url: str | None, cors_origin: str | None) -> None:
    """Run the query studio service.

    One process serves one storage directory; per-project locking happens
    in process, so run a single instance per directory.
    """
    import uvicorn

    config = ServiceConfig(
        storage_dir=Path(storage_dir),
        session_ttl_seconds=session_ttl,
        postgres_url=postgres_url,
        cors_origin=cors_origin,
    )
    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
