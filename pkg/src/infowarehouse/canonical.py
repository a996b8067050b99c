"""Canonical JSON and timestamp encoding.

All persisted and exported documents use one canonical form: UTF-8, keys
sorted lexicographically, compact separators, arrays pre-sorted by the
caller. Timestamps are UTC at millisecond precision, rendered as ISO-8601
with a trailing ``Z``; the fixed width makes string comparison equivalent
to chronological comparison.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

_TS_FORMAT = "%Y-%m-%dT%H:%M:%S"


def canonical_json(obj) -> str:
    """Serialize to the canonical single-line JSON form."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def canonical_document(obj) -> str:
    """Canonical JSON with a trailing newline, for whole-file documents."""
    return canonical_json(obj) + "\n"


def format_timestamp(epoch_ms: int) -> str:
    """Render epoch milliseconds as ISO-8601 UTC with ms precision."""
    dt = datetime.fromtimestamp(epoch_ms // 1000, tz=timezone.utc)
    return f"{dt.strftime(_TS_FORMAT)}.{epoch_ms % 1000:03d}Z"


def parse_timestamp(text: str) -> int:
    """Inverse of format_timestamp; returns epoch milliseconds."""
    if not text.endswith("Z"):
        raise ValueError(f"timestamp not UTC: {text!r}")
    base, _, frac = text[:-1].partition(".")
    dt = datetime.strptime(base, _TS_FORMAT).replace(tzinfo=timezone.utc)
    millis = int((frac or "0").ljust(3, "0")[:3])
    return int(dt.timestamp()) * 1000 + millis
