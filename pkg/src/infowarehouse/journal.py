"""Append-only journal: the archive's only source of truth.

One record per line (NDJSON, canonical key order). Sequence numbers are
gap-free from 1 and records are immutable once written; replaying the file
into an empty archive reconstructs the exact state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .canonical import canonical_json
from .errors import JournalError

JOURNAL_FILENAME = "journal.ndjson"


@dataclass(frozen=True)
class JournalRecord:
    seq: int
    ts: str  # ISO-8601 UTC, ms precision
    op: str
    payload: dict

    def to_dict(self) -> dict:
        return {"op": self.op, "payload": self.payload, "seq": self.seq, "ts": self.ts}


def record_from_dict(obj: dict, lineno: int) -> JournalRecord:
    if not isinstance(obj, dict) or set(obj) != {"op", "payload", "seq", "ts"}:
        raise JournalError("journal_corrupt", f"malformed record at line {lineno}")
    seq, ts, op, payload = obj["seq"], obj["ts"], obj["op"], obj["payload"]
    if not isinstance(seq, int) or not isinstance(ts, str) or not isinstance(op, str) or not isinstance(payload, dict):
        raise JournalError("journal_corrupt", f"malformed record at line {lineno}")
    return JournalRecord(seq=seq, ts=ts, op=op, payload=payload)


class JournalWriter:
    """Serializes records to disk (or to memory when no directory is given)."""

    def __init__(self, directory: Path | None):
        self._path = directory / JOURNAL_FILENAME if directory else None
        self._handle = None
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = open(self._path, "a", encoding="utf-8")

    def append(self, record: JournalRecord) -> None:
        if self._handle is not None:
            self._handle.write(canonical_json(record.to_dict()) + "\n")
            self._handle.flush()

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def read_journal(directory: Path, start_seq: int = 1) -> list[JournalRecord]:
    """Read and check the journal; returns records with seq >= start_seq.

    Raises on the first corrupt line or sequence gap, naming the offender.
    """
    path = directory / JOURNAL_FILENAME
    records: list[JournalRecord] = []
    if not path.exists():
        return records
    expected = 1
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise JournalError("journal_corrupt", f"unreadable record at line {lineno}: {exc.msg}", seq=expected) from exc
            record = record_from_dict(obj, lineno)
            if record.seq != expected:
                raise JournalError(
                    "journal_gap",
                    f"journal sequence gap: expected seq {expected}, found {record.seq} at line {lineno}",
                    seq=expected,
                )
            expected += 1
            if record.seq >= start_seq:
                records.append(record)
    return records
