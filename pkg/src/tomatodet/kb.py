"""Versioned bilingual disease knowledge base.

One JSON document holds every disease entry (symptoms, prevention,
remedy as paragraph lists) under a single monotonically increasing
version; per-entry ``last_modified_version`` drives delta sync for
offline clients. Nepali is the authoritative language and is preserved
byte-exact; English names are optional.

Two validation modes exist: ``draft`` (default) accepts entries flagged
``draft: true`` whose sections may still be empty, ``strict`` rejects
them. Published (non-draft) entries must have all three sections
populated in both modes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import KbValidationError, TomatodetError
from .labels import is_known_slug

SECTION_FIELDS = ("symptoms", "prevention", "remedy")


class UnknownSlugError(TomatodetError):
    """Lookup of a slug that names no taxonomy class or KB entry."""


class NoRemedyDefinedError(TomatodetError):
    """Lookup of the background class, which never carries a remedy."""


@dataclass
class DiseaseEntry:
    class_slug: str
    name_ne: str
    name_en: str | None
    symptoms: list[str]
    prevention: list[str]
    remedy: list[str]
    last_modified_version: int
    draft: bool = False

    def to_document(self) -> dict:
        doc: dict = {
            "name_ne": self.name_ne,
            "name_en": self.name_en,
            "symptoms": list(self.symptoms),
            "prevention": list(self.prevention),
            "remedy": list(self.remedy),
            "last_modified_version": self.last_modified_version,
        }
        if self.draft:
            doc["draft"] = True
        return doc


@dataclass
class KnowledgeBase:
    version: int
    entries: dict[str, DiseaseEntry] = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "entries": {slug: e.to_document() for slug, e in sorted(self.entries.items())},
        }


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str


def _pairs_hook_checking_duplicates(duplicates: list[str]):
    def hook(pairs):
        seen = set()
        for key, _ in pairs:
            if key in seen:
                duplicates.append(key)
            seen.add(key)
        return dict(pairs)

    return hook


def _load_document(source) -> tuple[dict | None, list[Violation]]:
    """Parse ``source`` (dict, JSON text, or path) into a raw document."""
    if isinstance(source, dict):
        return source, []
    if isinstance(source, Path):
        try:
            text = source.read_text(encoding="utf-8")
        except OSError as exc:
            return None, [Violation("io-error", str(source), str(exc))]
    else:
        text = source
    duplicates: list[str] = []
    try:
        doc = json.loads(text, object_pairs_hook=_pairs_hook_checking_duplicates(duplicates))
    except json.JSONDecodeError as exc:
        return None, [Violation("parse-error", f"line {exc.lineno}, column {exc.colno}", exc.msg)]
    violations = [
        Violation("duplicate-slug", f"entries.{key}", f"duplicate key {key!r}")
        for key in duplicates
    ]
    if not isinstance(doc, dict):
        violations.append(Violation("bad-type", "$", "top level must be an object"))
        return None, violations
    return doc, violations


def _validate_entry(slug: str, raw, kb_version: int, mode: str) -> list[Violation]:
    where = f"entries.{slug}"
    if not isinstance(raw, dict):
        return [Violation("bad-type", where, "entry must be an object")]

    out: list[Violation] = []
    if not is_known_slug(slug):
        out.append(Violation("unknown-slug", where, f"{slug!r} is not a known class slug"))
    elif slug == "back":
        out.append(Violation("background-entry", where, "the background class has no disease entry"))

    name_ne = raw.get("name_ne")
    if not isinstance(name_ne, str) or not name_ne:
        out.append(Violation("missing-field", f"{where}.name_ne", "name_ne must be a nonempty string"))
    name_en = raw.get("name_en")
    if name_en is not None and not isinstance(name_en, str):
        out.append(Violation("bad-type", f"{where}.name_en", "name_en must be a string or null"))

    draft = raw.get("draft", False)
    if not isinstance(draft, bool):
        out.append(Violation("bad-type", f"{where}.draft", "draft must be a boolean"))
        draft = True
    for section in SECTION_FIELDS:
        value = raw.get(section)
        if value is None:
            out.append(Violation("missing-section", f"{where}.{section}", f"{section} is required"))
            continue
        if not isinstance(value, list) or not all(isinstance(p, str) for p in value):
            out.append(Violation("bad-type", f"{where}.{section}", f"{section} must be a list of strings"))
            continue
        if not value and not draft:
            out.append(Violation("missing-section", f"{where}.{section}",
                                 f"{section} must be nonempty for a published entry"))
    if draft and mode == "strict":
        out.append(Violation("draft-entry", where, "draft entries are rejected in strict mode"))

    lmv = raw.get("last_modified_version")
    if not isinstance(lmv, int) or isinstance(lmv, bool) or lmv < 0:
        out.append(Violation("bad-type", f"{where}.last_modified_version",
                             "last_modified_version must be a non-negative integer"))
    elif lmv > kb_version:
        out.append(Violation("version-order", f"{where}.last_modified_version",
                             f"entry modified at {lmv} but knowledge base is at version {kb_version}"))
    return out


def validate_kb(source, mode: str = "draft") -> list[Violation]:
    """Validate a KB document; empty result means :func:`load_kb` succeeds."""
    if mode not in ("draft", "strict"):
        raise ValueError(f"mode must be 'draft' or 'strict', got {mode!r}")
    doc, violations = _load_document(source)
    if doc is None:
        return violations

    version = doc.get("version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 1:
        violations.append(Violation("bad-version", "version", "version must be a positive integer"))
        version = 1

    entries = doc.get("entries")
    if not isinstance(entries, dict):
        violations.append(Violation("bad-type", "entries", "entries must be an object"))
        return violations

    for slug, raw in entries.items():
        violations.extend(_validate_entry(slug, raw, version, mode))
    return violations


def load_kb(source, mode: str = "draft") -> KnowledgeBase:
    """Load and fully validate a KB from a path, JSON text or dict.

    Raises :class:`KbValidationError` carrying every violation found.
    """
    violations = validate_kb(source, mode)
    if violations:
        raise KbValidationError(violations)
    doc, _ = _load_document(source)
    assert doc is not None
    entries = {
        slug: DiseaseEntry(
            class_slug=slug,
            name_ne=raw["name_ne"],
            name_en=raw.get("name_en"),
            symptoms=list(raw["symptoms"]),
            prevention=list(raw["prevention"]),
            remedy=list(raw["remedy"]),
            last_modified_version=raw["last_modified_version"],
            draft=bool(raw.get("draft", False)),
        )
        for slug, raw in doc["entries"].items()
    }
    return KnowledgeBase(version=doc["version"], entries=entries)


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical UTF-8 serialization: sorted slugs, 2-space indent."""
    return json.dumps(kb.to_document(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def save_kb(kb: KnowledgeBase, path: Path) -> None:
    """Write atomically: temp file in the same directory, then replace."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(serialize_kb(kb), encoding="utf-8")
    tmp.replace(path)


def lookup(kb: KnowledgeBase, slug: str, lang: str = "ne") -> dict:
    """Entry content in the requested language.

    English content is optional; whenever a requested English field is
    absent the Nepali text is served instead and ``fallback`` is set.
    """
    if lang not in ("ne", "en"):
        raise ValueError(f"lang must be 'ne' or 'en', got {lang!r}")
    if slug == "back":
        raise NoRemedyDefinedError("the background class has no remedy entry")
    entry = kb.entries.get(slug)
    if entry is None:
        raise UnknownSlugError(f"no knowledge-base entry for slug {slug!r}")

    fallback = False
    name = entry.name_ne
    if lang == "en":
        if entry.name_en:
            name = entry.name_en
        else:
            fallback = True
        # section content is authored in Nepali only in this schema
        fallback = fallback or any(getattr(entry, s) for s in SECTION_FIELDS)
    return {
        "slug": slug,
        "lang": lang,
        "name": name,
        "name_ne": entry.name_ne,
        "name_en": entry.name_en,
        "symptoms": list(entry.symptoms),
        "prevention": list(entry.prevention),
        "remedy": list(entry.remedy),
        "draft": entry.draft,
        "fallback": fallback,
    }


def kb_delta(kb: KnowledgeBase, since: int) -> dict:
    """Entries modified after ``since`` plus the current version."""
    if since < 0:
        raise ValueError(f"since must be >= 0, got {since}")
    changed = {
        slug: entry.to_document()
        for slug, entry in sorted(kb.entries.items())
        if entry.last_modified_version > since
    }
    return {"since": since, "to": kb.version, "entries": changed}


def apply_delta(snapshot: KnowledgeBase | dict, delta: dict) -> dict:
    """Client-side merge of a delta onto a local snapshot.

    ``snapshot`` may be a KnowledgeBase or its document form (the shape a
    client keeps in local storage); the merged document is returned.
    """
    doc = snapshot.to_document() if isinstance(snapshot, KnowledgeBase) else dict(snapshot)
    entries = dict(doc.get("entries", {}))
    for slug, raw in delta["entries"].items():
        entries[slug] = dict(raw)
    return {"version": delta["to"], "entries": dict(sorted(entries.items()))}


def seed_kb_path() -> Path:
    """Path of the knowledge base shipped with the package."""
    return Path(resources.files("tomatodet").joinpath("data/kb_seed.json"))


def load_seed_kb() -> KnowledgeBase:
    return load_kb(seed_kb_path())
