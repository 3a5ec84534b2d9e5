"""Per-user workspace: accounts, projects, invertible history, storage."""

from pgstudio.workspace.accounts import PasswordDigester, Pbkdf2Digester, UserAccount
from pgstudio.workspace.errors import (
    CorruptDocument,
    DuplicateGraph,
    DuplicateUsername,
    EmptyPassword,
    InvalidMutation,
    MutationTargetMissing,
    NothingToRedo,
    NothingToUndo,
    UnknownGraph,
    UnknownMutation,
    UnknownProject,
    UnknownUser,
    UnsupportedVersion,
    WorkspaceError,
)
from pgstudio.workspace.history import (
    ActionEntry,
    History,
    history_view,
    record_and_apply,
    redo,
    undo,
)
from pgstudio.workspace.mutations import apply_mutation, mutation_ops
from pgstudio.workspace.persist import (
    PROJECT_VERSION,
    load_project,
    save_project,
    state_hash,
)
from pgstudio.workspace.project import Project
from pgstudio.workspace.store import Workspace

__all__ = [
    "ActionEntry",
    "CorruptDocument",
    "DuplicateGraph",
    "DuplicateUsername",
    "EmptyPassword",
    "History",
    "InvalidMutation",
    "MutationTargetMissing",
    "NothingToRedo",
    "NothingToUndo",
    "PROJECT_VERSION",
    "PasswordDigester",
    "Pbkdf2Digester",
    "Project",
    "UnknownGraph",
    "UnknownMutation",
    "UnknownProject",
    "UnknownUser",
    "UnsupportedVersion",
    "UserAccount",
    "Workspace",
    "WorkspaceError",
    "apply_mutation",
    "history_view",
    "load_project",
    "mutation_ops",
    "record_and_apply",
    "redo",
    "save_project",
    "state_hash",
    "undo",
]
