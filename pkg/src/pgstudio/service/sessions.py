"""Bearer-token sessions with idle expiry."""

from __future__ import annotations

import secrets
import time
from dataclasses import dataclass
from typing import Callable


@dataclass
class Session:
    token: str
    username: str
    last_seen: float


class SessionManager:
    """Hands out opaque tokens and forgets them after a quiet period.

    Expiry is idle-based: every successful resolve refreshes the timer, so a
    session dies ttl_seconds after its last use, not after sign-in. The clock
    is injectable so tests can age sessions without sleeping.
    """

    def __init__(self, ttl_seconds: float = 86400.0, clock: Callable[[], float] = time.time):
        self.ttl_seconds = float(ttl_seconds)
        self._clock = clock
        self._sessions: dict[str, Session] = {}

    def create(self, username: str) -> Session:
        token = secrets.token_urlsafe(24)
        session = Session(token=token, username=username, last_seen=self._clock())
        self._sessions[token] = session
        return session

    def resolve(self, token: str | None) -> str | None:
        """Username behind a live token, refreshing its idle timer.

        Missing, unknown, and expired tokens all come back as None; the
        caller cannot tell them apart, and neither can whoever sent them.
        """
        if not token:
            return None
        session = self._sessions.get(token)
        if session is None:
            return None
        now = self._clock()
        if now - session.last_seen > self.ttl_seconds:
            del self._sessions[token]
            return None
        session.last_seen = now
        return session.username

    def drop(self, token: str) -> None:
        self._sessions.pop(token, None)

    def live_count(self) -> int:
        now = self._clock()
        return sum(1 for s in self._sessions.values() if now - s.last_seen <= self.ttl_seconds)
