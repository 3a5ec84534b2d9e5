"""pgstudio: a PostgreSQL learning studio.

The package is organised around the journey a newcomer takes: define a
schema (catalog), sketch a query as a graph on a canvas (graph), read and
write the SQL itself (sqlast), get advice on it (advisor), try it on toy
data (minidb), and do all of that inside a persistent, undoable workspace
(workspace) served over HTTP (service).
"""

__version__ = "0.1.0"
