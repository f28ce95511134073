"""Named morphisms and infinite words used throughout the package."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownName
from .words import FixedPoint, Image, Morphism, Rule, WordStream, prepend

G = Morphism.from_strings("0121", "032", "013", "0302")
# Square-free morphism from four letters to three (uniform, length 18).
F = Morphism.from_strings(
    "010201202101210212",
    "010201202102010212",
    "010201202120121012",
    "010201210201021012",
    codomain=3,
)
H = Morphism.from_strings("012", "02", "1")
H_PRIME = Morphism.from_strings("210", "20", "1")

MORPHISMS: dict[str, Morphism] = {"g": G, "f": F, "h": H, "h'": H_PRIME}
ALIASES = {"hp": "h'", "hprime": "h'", "h-prime": "h'"}


def morphism(name: str) -> Morphism:
    key = ALIASES.get(name, name)
    try:
        return MORPHISMS[key]
    except KeyError:
        raise UnknownName(f"unknown morphism {name!r}; known: {', '.join(MORPHISMS)}") from None


def _blocks_rule(idx: np.ndarray) -> np.ndarray:
    # Segment k (k >= 1) is 0^k 1^k 2 and starts at k^2 - 1.
    m = idx + 1
    k = np.floor(np.sqrt(m.astype(np.float64))).astype(np.int64)
    k += (k + 1) * (k + 1) <= m
    k -= k * k > m
    off = idx - (k * k - 1)
    return np.where(off < k, 0, np.where(off < 2 * k, 1, 2))


def blocks_letter(n: int) -> int:
    """Letter at position ``n`` of 0 1 2 00 11 2 000 111 2 ..."""
    k = math.isqrt(n + 1)
    off = n - (k * k - 1)
    return 0 if off < k else 1 if off < 2 * k else 2


def _hall() -> WordStream:
    return FixedPoint(H, 0)


def _hall_u() -> WordStream:
    hp2 = H_PRIME.power(2)
    return Image(H.power(2), FixedPoint(hp2, 1))


def _hall_v() -> WordStream:
    s: WordStream = _hall()
    for _ in range(3):
        s = Image(H_PRIME, s)
    return s


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    alphabet: int
    description: str
    build: Callable[[], object]


_ENTRIES = [
    CatalogEntry("g", "morphism", 4, "0->0121 1->032 2->013 3->0302", lambda: G),
    CatalogEntry("f", "morphism", 4, "uniform square-free morphism, 4 letters to 3", lambda: F),
    CatalogEntry("h", "morphism", 3, "0->012 1->02 2->1", lambda: H),
    CatalogEntry("h'", "morphism", 3, "0->210 1->20 2->1", lambda: H_PRIME),
    CatalogEntry("g-fix", "word", 4, "fixed point of g from 0", lambda: FixedPoint(G, 0)),
    CatalogEntry("hall", "word", 3, "Hall word, fixed point of h from 0", _hall),
    CatalogEntry("ternary-sf", "word", 3, "f applied to the fixed point of g", lambda: Image(F, FixedPoint(G, 0))),
    CatalogEntry("hall-3", "word", 4, "letter 3 followed by the Hall word", lambda: prepend(b"\x03", _hall())),
    CatalogEntry("blocks", "word", 3, "0^k 1^k 2 for k = 1, 2, ...", lambda: Rule(_blocks_rule, vectorized=True, name="blocks")),
    CatalogEntry("hall-u", "word", 3, "h^2 of the fixed point of h'^2 from 1", _hall_u),
    CatalogEntry("hall-v", "word", 3, "h' applied three times to the Hall word", _hall_v),
]

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}
WORD_NAMES = tuple(e.name for e in _ENTRIES if e.kind == "word")


def word(name: str) -> WordStream:
    """A fresh stream for a catalog word (each call builds its own buffer)."""
    entry = CATALOG.get(name)
    if entry is None or entry.kind != "word":
        raise UnknownName(f"unknown word {name!r}; known: {', '.join(WORD_NAMES)}")
    return entry.build()


def entries() -> list[CatalogEntry]:
    return list(_ENTRIES)
