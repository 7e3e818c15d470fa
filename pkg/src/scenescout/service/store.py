"""Durable session, preview, and idempotency state.

Data directory layout:

    data_dir/
      sessions/    {session_id}.jsonl   append-only exploration event logs
      previews/    {preview_id}.json    preview documents with job status
      logs/        usage-log snapshots in the eval-harness input format
      cache/       reserved for provider caches
      idempotency.jsonl                 replayed idempotent responses

Sessions are event-sourced: the .jsonl file is the source of truth and a
restart reconstructs live state by replaying it.
"""

from __future__ import annotations

import json
import threading
from collections import defaultdict
from pathlib import Path

from ..errors import NotFoundError
from ..exploration import ExplorationSession, replay
from ..serde import atomic_write_text, canonical_dumps, pretty_dumps, read_json


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self._dir = Path(data_dir) / "sessions"
        self._logs_dir = Path(data_dir) / "logs"
        self._dir.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, ExplorationSession] = {}
        self._locks: dict[str, threading.RLock] = defaultdict(threading.RLock)
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks[session_id]

    def _path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}.jsonl"

    def exists(self, session_id: str) -> bool:
        return session_id in self._cache or self._path(session_id).is_file()

    def events(self, session_id: str) -> list[dict]:
        path = self._path(session_id)
        if not path.is_file():
            raise NotFoundError(f"unknown session {session_id!r}")
        events = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events

    def get(self, session_id: str) -> ExplorationSession:
        with self.lock(session_id):
            if session_id not in self._cache:
                self._cache[session_id] = replay(session_id, self.events(session_id))
            return self._cache[session_id]

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self._dir.glob("*.jsonl"))

    def commit(self, session: ExplorationSession, new_events: list[dict]) -> None:
        """Append events and adopt the session object as current state."""
        with self.lock(session.id):
            path = self._path(session.id)
            with open(path, "a", encoding="utf-8") as fh:
                for event in new_events:
                    fh.write(canonical_dumps(event) + "\n")
            self._cache[session.id] = session
            self._write_usage_log(session)

    def _write_usage_log(self, session: ExplorationSession) -> None:
        atomic_write_text(
            self._logs_dir / f"explore-{session.id}.json", pretty_dumps(session.log_dict())
        )


class PreviewStore:
    def __init__(self, data_dir: str | Path):
        self._dir = Path(data_dir) / "previews"
        self._logs_dir = Path(data_dir) / "logs"
        self._dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, preview_id: str) -> Path:
        return self._dir / f"{preview_id}.json"

    def put(self, preview_id: str, doc: dict) -> None:
        with self._lock:
            atomic_write_text(self._path(preview_id), pretty_dumps(doc))
            if doc.get("status") == "complete":
                atomic_write_text(self._logs_dir / f"preview-{preview_id}.json", pretty_dumps(doc))

    def get(self, preview_id: str) -> dict:
        path = self._path(preview_id)
        if not path.is_file():
            raise NotFoundError(f"unknown preview {preview_id!r}")
        return read_json(path)

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self._dir.glob("*.json"))


class IdempotencyStore:
    """Replays the first response for a repeated (scope, key) mutation."""

    def __init__(self, data_dir: str | Path):
        self._path = Path(data_dir) / "idempotency.jsonl"
        self._lock = threading.Lock()
        self._seen: dict[str, dict] = {}
        if self._path.is_file():
            with open(self._path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        record = json.loads(line)
                        self._seen[record["key"]] = record

    def get(self, scope: str, key: str) -> dict | None:
        return self._seen.get(f"{scope}#{key}")

    def put(self, scope: str, key: str, status_code: int, body: dict) -> None:
        record = {"key": f"{scope}#{key}", "status_code": status_code, "body": body}
        with self._lock:
            self._seen[record["key"]] = record
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(canonical_dumps(record) + "\n")
