"""Append-only feedback log: durability, torn-tail recovery, ordering."""

from __future__ import annotations

import json
import struct
import threading
import zlib

from tomatodet.feedback import FeedbackLog

HEADER = struct.Struct(">II")


def frame_for(payload: bytes) -> bytes:
    return HEADER.pack(len(payload), zlib.crc32(payload)) + payload


def test_append_read_round_trip(tmp_path):
    log = FeedbackLog(tmp_path / "fb.log")
    rec = log.append(
        request_id="req-1",
        original_detections=[{"slug": "gmold", "score": 0.9}],
        corrected_labels=[{"slug": "canker", "box": {"cx": 0.5, "cy": 0.5, "w": 0.2, "h": 0.2}}],
        comment="wrong disease",
        locale="ne",
    )
    assert rec.id and rec.seq == 0
    log.close()

    reopened = FeedbackLog(tmp_path / "fb.log")
    got = reopened.records()
    assert len(got) == 1
    assert got[0].to_document() == rec.to_document()
    reopened.close()


def test_no_disease_sentinel_survives(tmp_path):
    log = FeedbackLog(tmp_path / "fb.log")
    log.append(image_hash="ab" * 32, corrected_labels="no disease")
    log.close()
    reopened = FeedbackLog(tmp_path / "fb.log")
    assert reopened.records()[0].corrected_labels == "no disease"
    reopened.close()


def test_torn_tail_from_simulated_crash_is_dropped(tmp_path):
    path = tmp_path / "fb.log"
    log = FeedbackLog(path)
    for i in range(3):
        log.append(request_id=f"req-{i}")
    log.close()

    # crash mid-append: half a frame lands on disk
    payload = json.dumps({"id": "x"}).encode()
    torn = frame_for(payload)[: HEADER.size + 3]
    with open(path, "ab") as f:
        f.write(torn)

    recovered = FeedbackLog(path)
    assert recovered.torn_bytes_dropped == len(torn)
    assert [r.request_id for r in recovered.records()] == ["req-0", "req-1", "req-2"]
    # the log keeps accepting appends after recovery
    recovered.append(request_id="req-3")
    recovered.close()
    again = FeedbackLog(path)
    assert [r.request_id for r in again.records()] == ["req-0", "req-1", "req-2", "req-3"]
    assert again.torn_bytes_dropped == 0
    again.close()


def test_corrupt_crc_cuts_tail(tmp_path):
    path = tmp_path / "fb.log"
    log = FeedbackLog(path)
    log.append(request_id="good")
    log.append(request_id="to-corrupt")
    log.close()

    data = bytearray(path.read_bytes())
    data[-1] ^= 0xFF  # flip one payload byte of the last record
    path.write_bytes(bytes(data))

    recovered = FeedbackLog(path)
    assert [r.request_id for r in recovered.records()] == ["good"]
    assert recovered.torn_bytes_dropped > 0
    recovered.close()


def test_garbage_header_only_file(tmp_path):
    path = tmp_path / "fb.log"
    path.write_bytes(b"\x00\x01")
    log = FeedbackLog(path)
    assert log.records() == []
    assert log.torn_bytes_dropped == 2
    log.append(request_id="first")
    log.close()
    assert [r.request_id for r in FeedbackLog(path).records()] == ["first"]


def test_timestamps_non_decreasing_and_since_filter(tmp_path):
    log = FeedbackLog(tmp_path / "fb.log")
    recs = [log.append(request_id=f"r{i}") for i in range(5)]
    stamps = [r.timestamp for r in recs]
    assert stamps == sorted(stamps)
    cutoff = recs[2].timestamp
    got = log.since(cutoff)
    assert [r.seq for r in got] == [r.seq for r in recs if r.timestamp >= cutoff]
    assert got[0].seq <= 2  # equal timestamps are included
    assert log.since(0.0) == log.records()
    assert log.since(recs[-1].timestamp + 1) == []
    log.close()


def test_sequence_numbers_continue_after_reopen(tmp_path):
    path = tmp_path / "fb.log"
    log = FeedbackLog(path)
    log.append(request_id="a")
    log.append(request_id="b")
    log.close()
    log = FeedbackLog(path)
    rec = log.append(request_id="c")
    assert rec.seq == 2
    log.close()


def test_concurrent_appends_all_land(tmp_path):
    path = tmp_path / "fb.log"
    log = FeedbackLog(path)

    def writer(k: int):
        for i in range(10):
            log.append(request_id=f"w{k}-{i}")

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    log.close()

    reopened = FeedbackLog(path)
    records = reopened.records()
    assert len(records) == 80
    assert [r.seq for r in records] == list(range(80))
    assert len({r.id for r in records}) == 80
    reopened.close()


def test_nepali_comment_round_trips(tmp_path):
    log = FeedbackLog(tmp_path / "fb.log")
    log.append(request_id="x", comment="यो रोग होइन")
    log.close()
    assert FeedbackLog(tmp_path / "fb.log").records()[0].comment == "यो रोग होइन"
