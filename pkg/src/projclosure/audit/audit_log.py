from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Final

EVENTS: Final = frozenset(
    {"RUN_STARTED", "INPUT_ERROR", "SUITE_FINISHED", "BUDGET_EXCEEDED", "RUN_FINISHED"}
)


class AuditLogger:
    """Appends one JSON record per event; a logger without a path drops everything."""

    def __init__(self, path: str | Path | None, command: str = "") -> None:
        self.path = Path(path) if path is not None else None
        self.command = command
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)

    def log_event(self, event: str, payload: dict[str, Any]) -> None:
        if event not in EVENTS:
            raise ValueError("UNKNOWN_AUDIT_EVENT")
        if self.path is None:
            return
        record = {
            "ts": datetime.now(timezone.utc).isoformat(),
            "command": self.command,
            "event": event,
            "payload": payload,
        }
        with self.path.open("a", encoding="utf-8") as f:
            f.write(json.dumps(record, sort_keys=True, default=str))
            f.write("\n")
