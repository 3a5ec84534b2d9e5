"""User accounts and password hashing.

Passwords are never stored in the clear. The digesting strategy sits
behind a small interface so deployments can swap the algorithm without
touching account storage, and tests can use a cheap fake.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from dataclasses import dataclass
from typing import Protocol


@dataclass(frozen=True)
class UserAccount:
    """One registered user.

    is_superuser and can_create_role mirror the role attributes a
    PostgreSQL administrator would recognize; they gate nothing inside
    the studio itself yet but persist with the account.
    """

    username: str
    password_digest: str
    is_superuser: bool = False
    can_create_role: bool = False


class PasswordDigester(Protocol):
    """Strategy interface for hashing and checking passwords."""

    def digest(self, password: str) -> str: ...

    def verify(self, password: str, digest: str) -> bool: ...


class Pbkdf2Digester:
    """PBKDF2-HMAC-SHA256 with a per-password random salt.

    Digest format: "pbkdf2_sha256$<iterations>$<salt hex>$<hash hex>".
    """

    def __init__(self, iterations: int = 60_000) -> None:
        self.iterations = iterations

    def digest(self, password: str) -> str:
        salt = secrets.token_bytes(16)
        raw = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), salt, self.iterations
        )
        return f"pbkdf2_sha256${self.iterations}${salt.hex()}${raw.hex()}"

    def verify(self, password: str, digest: str) -> bool:
        try:
            scheme, iterations, salt_hex, hash_hex = digest.split("$")
            if scheme != "pbkdf2_sha256":
                return False
            raw = hashlib.pbkdf2_hmac(
                "sha256",
                password.encode("utf-8"),
                bytes.fromhex(salt_hex),
                int(iterations),
            )
        except (ValueError, TypeError):
            return False
        return hmac.compare_digest(raw.hex(), hash_hex)
