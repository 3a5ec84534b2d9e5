"""Linear action history with undo and redo.

Every change to a project goes through record_and_apply, which stores
the operation together with its precomputed inverse. Undo applies the
inverse; redo replays the recorded operation verbatim. Recording a new
action while redo entries exist discards them: history stays a single
line, not a tree.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import TYPE_CHECKING

from .errors import NothingToRedo, NothingToUndo

if TYPE_CHECKING:
    from .project import Project


@dataclass(frozen=True)
class ActionEntry:
    """One recorded action: what happened, how to take it back."""

    sequence: int
    timestamp: str
    actor: str
    operation: dict
    inverse: dict
    human_label: str


@dataclass
class History:
    entries: list[ActionEntry] = field(default_factory=list)
    redo: list[ActionEntry] = field(default_factory=list)
    next_sequence: int = 1


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def record_and_apply(project: "Project", mutation: dict, actor: str) -> ActionEntry:
    """Apply a mutation and push it onto the project's history.

    The caller's dict is not modified; applying may enrich the recorded
    copy (allocated element ids) so that redo replays identically. When
    the mutation fails nothing is recorded.
    """
    from .mutations import apply_mutation

    operation = copy.deepcopy(mutation)
    inverse, label = apply_mutation(project, operation)
    history = project.history
    entry = ActionEntry(
        sequence=history.next_sequence,
        timestamp=_now(),
        actor=actor,
        operation=operation,
        inverse=inverse,
        human_label=label,
    )
    history.entries.append(entry)
    history.next_sequence += 1
    history.redo.clear()
    return entry


def undo(project: "Project") -> ActionEntry:
    """Take back the most recent action. Raises NothingToUndo when empty."""
    from .mutations import apply_mutation

    history = project.history
    if not history.entries:
        raise NothingToUndo()
    entry = history.entries[-1]
    apply_mutation(project, copy.deepcopy(entry.inverse))
    history.entries.pop()
    history.redo.append(entry)
    return entry


def redo(project: "Project") -> ActionEntry:
    """Replay the most recently undone action. Raises NothingToRedo when empty."""
    from .mutations import apply_mutation

    history = project.history
    if not history.redo:
        raise NothingToRedo()
    entry = history.redo[-1]
    apply_mutation(project, copy.deepcopy(entry.operation))
    history.redo.pop()
    history.entries.append(entry)
    return entry


def history_view(
    project: "Project", limit: int = 50, offset: int = 0
) -> list[tuple[int, str, str]]:
    """Newest-first (sequence, timestamp, label) rows for display."""
    newest_first = list(reversed(project.history.entries))
    page = newest_first[offset : offset + limit]
    return [(e.sequence, e.timestamp, e.human_label) for e in page]
