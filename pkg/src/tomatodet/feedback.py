"""Append-only, crash-safe feedback log backing the retraining queue.

On-disk format: a sequence of frames, each ``u32 length | u32 crc32 |
payload`` (big-endian, payload is UTF-8 JSON). Appends are fsynced
before the caller gets an id. On open the file is scanned and any torn
tail (truncated frame or checksum mismatch) is cut off, so a crash
mid-append never surfaces a partial record or corrupts later appends.
"""

from __future__ import annotations

import json
import os
import struct
import threading
import time
import uuid
import zlib
from dataclasses import asdict, dataclass
from pathlib import Path

_HEADER = struct.Struct(">II")  # payload length, crc32


@dataclass
class FeedbackRecord:
    id: str
    seq: int
    timestamp: float  # epoch seconds, UTC; non-decreasing within the log
    request_id: str | None
    image_hash: str | None
    original_detections: list
    corrected_labels: list | str | None  # [{slug, box}] or "no disease"
    comment: str | None
    locale: str | None

    def to_document(self) -> dict:
        return asdict(self)


class FeedbackLog:
    """Single-writer append log; reads serve from the recovered snapshot."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: list[FeedbackRecord] = []
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.torn_bytes_dropped = self._recover()
        self._fd = os.open(self.path, os.O_WRONLY | os.O_CREAT | os.O_APPEND)
        self._last_ts = self._records[-1].timestamp if self._records else 0.0
        self._seq = self._records[-1].seq + 1 if self._records else 0

    def _recover(self) -> int:
        """Load complete records; truncate any torn tail. Returns bytes cut."""
        if not self.path.exists():
            return 0
        data = self.path.read_bytes()
        offset = 0
        while offset + _HEADER.size <= len(data):
            length, crc = _HEADER.unpack_from(data, offset)
            start = offset + _HEADER.size
            end = start + length
            if end > len(data):
                break
            payload = data[start:end]
            if zlib.crc32(payload) != crc:
                break
            self._records.append(FeedbackRecord(**json.loads(payload.decode("utf-8"))))
            offset = end
        torn = len(data) - offset
        if torn:
            with open(self.path, "r+b") as f:
                f.truncate(offset)
        return torn

    def append(
        self,
        *,
        request_id: str | None = None,
        image_hash: str | None = None,
        original_detections: list | None = None,
        corrected_labels: list | str | None = None,
        comment: str | None = None,
        locale: str | None = None,
    ) -> FeedbackRecord:
        """Durably append one record; returns it with id and timestamp set."""
        with self._lock:
            ts = max(time.time(), self._last_ts)
            record = FeedbackRecord(
                id=uuid.uuid4().hex,
                seq=self._seq,
                timestamp=ts,
                request_id=request_id,
                image_hash=image_hash,
                original_detections=list(original_detections or []),
                corrected_labels=corrected_labels,
                comment=comment,
                locale=locale,
            )
            payload = json.dumps(record.to_document(), ensure_ascii=False).encode("utf-8")
            frame = _HEADER.pack(len(payload), zlib.crc32(payload)) + payload
            os.write(self._fd, frame)
            os.fsync(self._fd)
            self._records.append(record)
            self._last_ts = ts
            self._seq += 1
            return record

    def records(self) -> list[FeedbackRecord]:
        with self._lock:
            return list(self._records)

    def since(self, timestamp: float) -> list[FeedbackRecord]:
        """All records with timestamp >= the bound, in insertion order."""
        with self._lock:
            return [r for r in self._records if r.timestamp >= timestamp]

    def close(self) -> None:
        with self._lock:
            if self._fd >= 0:
                os.close(self._fd)
                self._fd = -1
