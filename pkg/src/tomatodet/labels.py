"""The ten-class tomato disease taxonomy.

Class ids are fixed: annotation files, detector heads and the knowledge
base all agree on this table. ``back`` is the background class; it is
detectable and evaluated like any other class but carries no remedy.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ClassLabel:
    id: int
    slug: str
    name_en: str
    name_ne: str


CLASS_LABELS: tuple[ClassLabel, ...] = (
    ClassLabel(0, "back", "Background", "पृष्ठभूमि"),
    ClassLabel(1, "gmold", "Gray mold", "खैरो ढुसी रोग"),
    ClassLabel(2, "canker", "Canker", "क्यांकर रोग"),
    ClassLabel(3, "lmold", "Leaf mold", "पात ढुसी रोग"),
    ClassLabel(4, "plague", "Plague", "डढुवा रोग"),
    ClassLabel(5, "lminer", "Leaf miner", "पात खन्ने किरा"),
    ClassLabel(6, "wfly", "Whitefly", "सेतो झिँगा"),
    ClassLabel(7, "lowtemp", "Low temperature", "न्यून तापक्रम समस्या"),
    ClassLabel(8, "nutrex", "Nutritional excess or deficiency", "पोषक तत्व असन्तुलन"),
    ClassLabel(9, "pmildew", "Powdery mildew", "सेतो दुसी रोग वा खरानी रोग"),
)

NUM_CLASSES = len(CLASS_LABELS)

_BY_ID = {label.id: label for label in CLASS_LABELS}
_BY_SLUG = {label.slug: label for label in CLASS_LABELS}

# Slugs that name actual diseases, i.e. everything except background.
DISEASE_SLUGS: tuple[str, ...] = tuple(l.slug for l in CLASS_LABELS if l.slug != "back")


def by_id(class_id: int) -> ClassLabel:
    try:
        return _BY_ID[class_id]
    except KeyError:
        raise KeyError(f"unknown class id {class_id!r}") from None


def by_slug(slug: str) -> ClassLabel:
    try:
        return _BY_SLUG[slug]
    except KeyError:
        raise KeyError(f"unknown class slug {slug!r}") from None


def is_known_slug(slug: str) -> bool:
    return slug in _BY_SLUG
