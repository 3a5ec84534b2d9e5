"""Errors for accounts, projects, mutations, and persistence."""

from __future__ import annotations


class WorkspaceError(Exception):
    """Base for everything the workspace layer raises on purpose."""


class DuplicateUsername(WorkspaceError):
    def __init__(self, username: str) -> None:
        self.username = username
        super().__init__(f'A user named "{username}" already exists.')


class UnknownUser(WorkspaceError):
    def __init__(self, username: str) -> None:
        self.username = username
        super().__init__(f'No user named "{username}" exists.')


class EmptyPassword(WorkspaceError):
    def __init__(self) -> None:
        super().__init__("The password must not be empty.")


class UnknownProject(WorkspaceError):
    def __init__(self, project_id: str) -> None:
        self.project_id = project_id
        super().__init__(f'No project with id "{project_id}" exists for this user.')


class UnknownGraph(WorkspaceError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f'The project has no canvas named "{name}".')


class DuplicateGraph(WorkspaceError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f'The project already has a canvas named "{name}".')


class UnknownMutation(WorkspaceError):
    def __init__(self, op: str) -> None:
        self.op = op
        super().__init__(f'"{op}" is not a known action.')


class InvalidMutation(WorkspaceError):
    """A known action with parameters that do not fit the current state."""


class MutationTargetMissing(WorkspaceError):
    """The object an action wants to change or remove does not exist."""


class NothingToUndo(WorkspaceError):
    def __init__(self) -> None:
        super().__init__("There is nothing to undo.")


class NothingToRedo(WorkspaceError):
    def __init__(self) -> None:
        super().__init__("There is nothing to redo.")


class UnsupportedVersion(WorkspaceError):
    def __init__(self, version: object) -> None:
        self.version = version
        super().__init__(f"Project document version {version!r} is not supported.")


class CorruptDocument(WorkspaceError):
    def __init__(self, path: str, detail: str) -> None:
        self.path = path
        self.detail = detail
        super().__init__(f"Project document is corrupt at {path}: {detail}")
