from __future__ import annotations

import hashlib
import json
from pathlib import Path

from projclosure.domain.models import RankTable


def sha256_file(path: str | Path) -> str:
    """Digest of an instance file as read, before any parsing."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def rank_table_digest(table: RankTable) -> str:
    """Digest of the intersection dimensions alone.

    An arrangement and an abstract table with the same numbers hash alike, so
    reports on the two can be matched up.
    """
    canonical = {"ambient_dim": table.r_plus_1, "n": table.n, "rank_table": table.as_mapping()}
    data = json.dumps(canonical, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(data).hexdigest()
