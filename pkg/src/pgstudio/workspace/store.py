"""File-backed workspace: user accounts and per-user project files.

Layout under the workspace root:

    users.json
    projects/<owner>/<project id>.json

Each owner gets their own directory, so one user's project ids can
never collide with or read another user's files. Writes go through a
temp file and an atomic rename.
"""

from __future__ import annotations

import json
import os
import re
import uuid
from pathlib import Path

from ..catalog import InvalidDefinition, validate_identifier
from .accounts import PasswordDigester, Pbkdf2Digester, UserAccount
from .errors import (
    CorruptDocument,
    DuplicateUsername,
    EmptyPassword,
    UnknownProject,
    UnknownUser,
)
from .persist import load_project, save_project
from .project import Project

USERS_VERSION = 1

# project ids come from uuid4().hex; the guard also keeps path
# separators and dots out of file names built from caller input
_PROJECT_ID = re.compile(r"[0-9a-f]{1,32}$")


class Workspace:
    def __init__(self, root: str | Path, digester: PasswordDigester | None = None) -> None:
        self.root = Path(root)
        self.digester: PasswordDigester = digester or Pbkdf2Digester()
        self.root.mkdir(parents=True, exist_ok=True)

    # -- users

    @property
    def _users_path(self) -> Path:
        return self.root / "users.json"

    def _load_users(self) -> dict[str, UserAccount]:
        if not self._users_path.exists():
            return {}
        try:
            raw = json.loads(self._users_path.read_text("utf-8"))
            listed = raw["users"]
            accounts = [
                UserAccount(
                    username=item["username"],
                    password_digest=item["password_digest"],
                    is_superuser=bool(item.get("is_superuser", False)),
                    can_create_role=bool(item.get("can_create_role", False)),
                )
                for item in listed
            ]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CorruptDocument(str(self._users_path), str(exc)) from None
        return {account.username.lower(): account for account in accounts}

    def _save_users(self, users: dict[str, UserAccount]) -> None:
        document = {
            "version": USERS_VERSION,
            "users": [
                {
                    "username": account.username,
                    "password_digest": account.password_digest,
                    "is_superuser": account.is_superuser,
                    "can_create_role": account.can_create_role,
                }
                for _, account in sorted(users.items())
            ],
        }
        self._write_json(self._users_path, document)

    def create_user(
        self,
        username: str,
        password: str,
        is_superuser: bool = False,
        can_create_role: bool = False,
    ) -> UserAccount:
        """Register a user. Usernames follow identifier rules."""
        result = validate_identifier(username, field="username")
        if not result.ok:
            raise InvalidDefinition(result.violations)
        if not password:
            raise EmptyPassword()
        users = self._load_users()
        if username.lower() in users:
            raise DuplicateUsername(username)
        account = UserAccount(
            username=username,
            password_digest=self.digester.digest(password),
            is_superuser=is_superuser,
            can_create_role=can_create_role,
        )
        users[username.lower()] = account
        self._save_users(users)
        return account

    def authenticate(self, username: str, password: str) -> UserAccount | None:
        """The account on a correct password, None otherwise."""
        account = self._load_users().get(username.lower())
        if account is None:
            return None
        if not self.digester.verify(password, account.password_digest):
            return None
        return account

    def get_user(self, username: str) -> UserAccount:
        account = self._load_users().get(username.lower())
        if account is None:
            raise UnknownUser(username)
        return account

    def list_users(self) -> list[str]:
        return sorted(account.username for account in self._load_users().values())

    # -- projects

    def _project_dir(self, owner: str) -> Path:
        return self.root / "projects" / owner.lower()

    def _project_path(self, owner: str, project_id: str) -> Path:
        if not _PROJECT_ID.match(project_id):
            raise UnknownProject(project_id)
        return self._project_dir(owner) / f"{project_id}.json"

    def create_project(self, owner: str, name: str) -> Project:
        account = self.get_user(owner)
        project = Project(id=uuid.uuid4().hex[:12], owner=account.username, name=name)
        self.save(project)
        return project

    def save(self, project: Project) -> None:
        path = self._project_path(project.owner, project.id)
        path.parent.mkdir(parents=True, exist_ok=True)
        self._write_json(path, save_project(project, include_history=True))

    def load(self, owner: str, project_id: str) -> Project:
        path = self._project_path(owner, project_id)
        if not path.exists():
            raise UnknownProject(project_id)
        try:
            document = json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptDocument(str(path), str(exc)) from None
        return load_project(document)

    def list_projects(self, owner: str) -> list[tuple[str, str]]:
        """(project id, name) pairs for one owner, sorted by name."""
        directory = self._project_dir(owner)
        if not directory.is_dir():
            return []
        found: list[tuple[str, str]] = []
        for path in directory.glob("*.json"):
            try:
                document = json.loads(path.read_text("utf-8"))
                found.append((str(document["id"]), str(document["name"])))
            except (json.JSONDecodeError, KeyError, TypeError):
                continue  # a rotten file should not hide the others
        return sorted(found, key=lambda pair: (pair[1], pair[0]))

    def delete_project(self, owner: str, project_id: str) -> None:
        path = self._project_path(owner, project_id)
        if not path.exists():
            raise UnknownProject(project_id)
        path.unlink()

    # -- plumbing

    @staticmethod
    def _write_json(path: Path, document: dict) -> None:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(document, indent=2, sort_keys=True), "utf-8")
        os.replace(tmp, path)
