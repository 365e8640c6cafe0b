"""File-per-record JSON persistence for scenarios and runs.

Each record is one JSON document in a directory; writes go to a temp file in
the same directory and are renamed into place, so readers only ever see
complete documents.  Corrupt or unreadable files are skipped with a warning,
never a crash.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

RUN_STATUSES = ("pending", "running", "done", "cancelled", "failed")

# Forward-only lifecycle of a run record.
_STATUS_NEXT = {
    "pending": {"running", "failed", "cancelled"},
    "running": {"done", "cancelled", "failed"},
    "done": set(),
    "cancelled": set(),
    "failed": set(),
}


def new_id() -> str:
    return uuid.uuid4().hex


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def can_transition(old: str, new: str) -> bool:
    return new in _STATUS_NEXT.get(old, set())


class JsonDirStore:
    """Directory of `<record_id>.json` documents with atomic writes."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, record_id: str) -> Path:
        return self.root / f"{record_id}.json"

    def save(self, record_id: str, payload: dict) -> None:
        target = self.path(record_id)
        fd, tmp = tempfile.mkstemp(prefix=f".{record_id}.", suffix=".tmp", dir=self.root)
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, target)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def load(self, record_id: str) -> Optional[dict]:
        target = self.path(record_id)
        if not target.exists():
            return None
        try:
            with open(target) as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            logger.warning("skipping unreadable record %s: %s", target, exc)
            return None

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def list(self) -> list[dict]:
        """All readable records, sorted by id; corrupt files are skipped."""
        out = []
        for record_id in self.ids():
            payload = self.load(record_id)
            if payload is not None:
                out.append(payload)
        return out

    def delete(self, record_id: str) -> bool:
        target = self.path(record_id)
        try:
            target.unlink()
            return True
        except FileNotFoundError:
            return False
