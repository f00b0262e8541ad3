"""Knowledge base: seed fidelity, validation codes, delta-sync property."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from tomatodet.errors import KbValidationError
from tomatodet.kb import (
    DiseaseEntry,
    KnowledgeBase,
    NoRemedyDefinedError,
    UnknownSlugError,
    apply_delta,
    kb_delta,
    load_kb,
    load_seed_kb,
    lookup,
    save_kb,
    seed_kb_path,
    serialize_kb,
    validate_kb,
)
from tomatodet.labels import DISEASE_SLUGS


def make_entry(slug: str, version: int = 1, draft: bool = False, marker: str = "") -> DiseaseEntry:
    if draft:
        sections = dict(symptoms=(), prevention=(), remedy=())
    else:
        sections = dict(
            symptoms=(f"लक्षण {slug} {marker}",),
            prevention=(f"रोकथाम {slug} {marker}",),
            remedy=(f"उपचार {slug} {marker}",),
        )
    return DiseaseEntry(
        class_slug=slug,
        name_ne=f"नाम {slug}",
        name_en=slug.title(),
        last_modified_version=version,
        draft=draft,
        **sections,
    )


# ---------------------------------------------------------------------------
# seed KB fidelity


def test_seed_kb_loads_with_nine_entries_version_one():
    kb = load_seed_kb()
    assert kb.version == 1
    assert len(kb.entries) == 9
    assert set(kb.entries) == set(DISEASE_SLUGS)


def test_seed_kb_round_trips_byte_identical(tmp_path):
    src = Path(seed_kb_path())
    kb = load_kb(src)
    assert serialize_kb(kb).encode("utf-8") == src.read_bytes()
    # and through a save/load cycle
    dst = tmp_path / "kb.json"
    save_kb(kb, dst)
    assert dst.read_bytes() == src.read_bytes()
    again = load_kb(dst)
    assert serialize_kb(again) == serialize_kb(kb)


def test_seed_pmildew_symptom_text_opening():
    kb = load_seed_kb()
    doc = lookup(kb, "pmildew", "ne")
    assert doc["symptoms"][0].startswith("सुरूमा पातको माथिल्लो सतहमा")


def test_seed_pmildew_remedy_contains_baking_soda_instruction():
    kb = load_seed_kb()
    doc = lookup(kb, "pmildew", "ne")
    assert any("खाने सोडा (Baking soda) १० ग्राम प्रति लिटर" in p for p in doc["remedy"])


def test_seed_validates_clean_in_draft_mode_with_drafts_flagged_strict():
    assert validate_kb(Path(seed_kb_path())) == []
    strict = validate_kb(Path(seed_kb_path()), mode="strict")
    assert len(strict) == 8
    assert all(v.code == "draft-entry" for v in strict)


# ---------------------------------------------------------------------------
# lookup semantics


def test_lookup_background_is_distinct_signal():
    kb = load_seed_kb()
    with pytest.raises(NoRemedyDefinedError):
        lookup(kb, "back")


def test_lookup_unknown_slug():
    kb = load_seed_kb()
    with pytest.raises(UnknownSlugError):
        lookup(kb, "rust")


def test_lookup_english_falls_back_to_nepali_sections():
    kb = load_seed_kb()
    doc = lookup(kb, "pmildew", "en")
    assert doc["name"] == "Powdery mildew"
    assert doc["fallback"] is True
    assert doc["symptoms"][0].startswith("सुरूमा")


def test_lookup_never_leaks_other_entries():
    kb = KnowledgeBase(
        version=2,
        entries={
            "gmold": make_entry("gmold", marker="AAA"),
            "canker": make_entry("canker", marker="BBB"),
        },
    )
    doc = lookup(kb, "gmold")
    for text in doc["symptoms"] + doc["prevention"] + doc["remedy"]:
        assert "BBB" not in text


# ---------------------------------------------------------------------------
# validation codes


def seed_doc() -> dict:
    return json.loads(Path(seed_kb_path()).read_text(encoding="utf-8"))


def test_duplicate_slug_detected():
    raw = Path(seed_kb_path()).read_text(encoding="utf-8")
    gmold_block = json.dumps(seed_doc()["entries"]["gmold"], ensure_ascii=False)
    # splice a second "gmold" key into the entries object
    dup = raw.replace('"entries": {', '"entries": {\n    "gmold": ' + gmold_block + ",", 1)
    violations = validate_kb(dup)
    assert any(v.code == "duplicate-slug" for v in violations)


def test_unknown_slug_code():
    doc = seed_doc()
    doc["entries"]["rust"] = doc["entries"]["gmold"] | {"class_slug": "rust"}
    violations = validate_kb(doc)
    assert any(v.code == "unknown-slug" and "rust" in v.path for v in violations)


def test_background_entry_rejected():
    doc = seed_doc()
    doc["entries"]["back"] = doc["entries"]["gmold"] | {"class_slug": "back"}
    violations = validate_kb(doc)
    assert any(v.code == "background-entry" for v in violations)


def test_missing_section_code_and_path():
    doc = seed_doc()
    del doc["entries"]["pmildew"]["remedy"]
    violations = validate_kb(doc)
    assert any(v.code == "missing-section" and v.path == "entries.pmildew.remedy" for v in violations)


def test_empty_section_on_published_entry():
    doc = seed_doc()
    doc["entries"]["pmildew"]["prevention"] = []
    violations = validate_kb(doc)
    assert any(v.code == "missing-section" and "prevention" in v.path for v in violations)


def test_version_ordering_violation():
    doc = seed_doc()
    doc["entries"]["pmildew"]["last_modified_version"] = 2  # kb version stays 1
    violations = validate_kb(doc)
    assert any(v.code == "version-order" for v in violations)


def test_load_kb_raises_with_violation_list():
    doc = seed_doc()
    del doc["entries"]["pmildew"]["symptoms"]
    with pytest.raises(KbValidationError) as err:
        load_kb(doc)
    assert any(v.code == "missing-section" for v in err.value.violations)


def test_validate_accepts_json_text_path_and_dict(tmp_path):
    raw = Path(seed_kb_path()).read_text(encoding="utf-8")
    assert validate_kb(raw) == []
    assert validate_kb(json.loads(raw)) == []
    p = tmp_path / "kb.json"
    p.write_text(raw, encoding="utf-8")
    assert validate_kb(p) == []


# ---------------------------------------------------------------------------
# save / atomic replace


def test_save_kb_atomic_replace(tmp_path):
    target = tmp_path / "kb.json"
    kb1 = KnowledgeBase(version=1, entries={"gmold": make_entry("gmold")})
    save_kb(kb1, target)
    kb2 = KnowledgeBase(version=2, entries={"gmold": make_entry("gmold", version=2)})
    save_kb(kb2, target)
    assert load_kb(target).version == 2
    leftovers = [p for p in tmp_path.iterdir() if p != target]
    assert leftovers == []


# ---------------------------------------------------------------------------
# delta sync


def test_delta_since_current_version_is_empty():
    kb = load_seed_kb()
    delta = kb_delta(kb, kb.version)
    assert delta["entries"] == {}
    assert delta["to"] == kb.version


def test_delta_since_zero_is_full_sync():
    kb = load_seed_kb()
    delta = kb_delta(kb, 0)
    assert set(delta["entries"]) == set(kb.entries)


def test_delta_filters_by_modification_version():
    entries = {
        "gmold": make_entry("gmold", version=1),
        "canker": make_entry("canker", version=4),
        "lmold": make_entry("lmold", version=5),
    }
    kb = KnowledgeBase(version=5, entries=entries)
    delta = kb_delta(kb, 3)
    assert set(delta["entries"]) == {"canker", "lmold"}
    assert delta["since"] == 3 and delta["to"] == 5


def test_randomized_edit_histories_reconstruct_server_kb():
    rng = np.random.Generator(np.random.PCG64(42))
    slugs = list(DISEASE_SLUGS)

    for trial in range(100):
        # server evolves through versions; client snapshots at some v0
        version = 1
        entries = {"gmold": make_entry("gmold", 1, marker="t0")}
        snapshot_at = int(rng.integers(1, 8))
        client_doc = None

        for _ in range(int(rng.integers(1, 12))):
            if version == snapshot_at and client_doc is None:
                client_doc = KnowledgeBase(version, dict(entries)).to_document()
            version += 1
            for slug in rng.choice(slugs, size=int(rng.integers(1, 4)), replace=False):
                entries[str(slug)] = make_entry(str(slug), version, marker=f"v{version}")

        server = KnowledgeBase(version, dict(entries))
        if client_doc is None:  # history too short to reach the snapshot point
            client_doc = server.to_document()

        delta = kb_delta(server, client_doc["version"])
        rebuilt = apply_delta(client_doc, delta)
        assert rebuilt == server.to_document(), f"trial {trial}"


def test_apply_delta_is_idempotent():
    kb = load_seed_kb()
    delta = kb_delta(kb, 0)
    snap = {"version": 0, "entries": {}}
    once = apply_delta(snap, delta)
    twice = apply_delta(once, delta)
    assert once == twice == kb.to_document()
