"""Finite words, morphisms and lazily extended infinite words.

Letters are the integers ``0..k-1`` and a finite word is a ``bytes`` object
holding those integers (not their ASCII digits).  Use :func:`word` and
:func:`to_str` to convert from and to the usual digit notation::

    >>> g = Morphism.parse("0 -> 0121\\n1 -> 032\\n2 -> 013\\n3 -> 0302")
    >>> to_str(g(word("23")))
    '0130302'
    >>> to_str(FixedPoint(g, 0).prefix(13))
    '0121032013032'
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    ExhaustedStream,
    InvalidInput,
    InvalidMorphism,
    MemoryBudgetExceeded,
    NotInImage,
)

MAX_ALPHABET = 255

# Consecutive empty chunks tolerated before a stream is declared non-productive.
STALL_LIMIT = 1 << 16

MEM_ENV = "SHUFFLEWORD_MAX_MEM_MB"


def word(text: str | Sequence[int] | bytes) -> bytes:
    """Build a finite word from a digit string, a letter sequence or bytes.

    A string containing whitespace is read as space-separated integers, which
    is the only way to spell letters above 9.
    """
    if isinstance(text, bytes):
        return text
    if isinstance(text, str):
        if any(c.isspace() for c in text.strip()):
            letters = [int(tok) for tok in text.split()]
        else:
            if not all(c.isdigit() for c in text):
                raise InvalidInput(f"not a word over digits: {text!r}")
            letters = [ord(c) - 48 for c in text]
    else:
        letters = list(text)
    if any(not 0 <= a <= MAX_ALPHABET - 1 for a in letters):
        raise InvalidInput(f"letters must lie in 0..{MAX_ALPHABET - 1}")
    return bytes(letters)


def to_str(w: bytes) -> str:
    """Render a word in digit notation (space-separated once a letter exceeds 9)."""
    if w and max(w) > 9:
        return " ".join(str(a) for a in w)
    return w.translate(_DIGITS).decode("ascii")


_DIGITS = bytes(48 + i if i < 10 else 0 for i in range(256))


def check_alphabet(k: int) -> int:
    if not 2 <= k <= MAX_ALPHABET:
        raise InvalidInput(f"alphabet size must be in 2..{MAX_ALPHABET}, got {k}")
    return k


def check_word(w: bytes, k: int) -> bytes:
    """Return ``w`` unchanged if every letter is below ``k``."""
    if w and max(w) >= k:
        raise InvalidInput(f"letter {max(w)} is outside the alphabet 0..{k - 1}")
    return w


def left_quotient(v: bytes, u: bytes) -> bytes:
    """The word ``x`` with ``u == v + x``; ``v`` must be a prefix of ``u``."""
    if not u.startswith(v):
        raise InvalidInput(f"{to_str(v)!r} is not a prefix of {to_str(u)!r}")
    return u[len(v):]


# --------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class Morphism:
    """A substitution ``a -> images[a]`` on the alphabet ``0..len(images)-1``.

    ``codomain`` defaults to the smallest alphabet that holds every image
    letter and the domain itself.
    """

    images: tuple[bytes, ...]
    codomain: int = 0

    def __post_init__(self):
        images = tuple(word(im) for im in self.images)
        object.__setattr__(self, "images", images)
        check_alphabet(len(images))
        used = max((max(im) for im in images if im), default=0) + 1
        codomain = self.codomain or max(len(images), used)
        check_alphabet(codomain)
        if used > codomain:
            raise InvalidInput(f"image letter {used - 1} outside codomain 0..{codomain - 1}")
        object.__setattr__(self, "codomain", codomain)

    @classmethod
    def from_strings(cls, *images: str, codomain: int = 0) -> "Morphism":
        return cls(tuple(word(im) for im in images), codomain)

    @classmethod
    def identity(cls, k: int) -> "Morphism":
        return cls(tuple(bytes([a]) for a in range(check_alphabet(k))), k)

    @classmethod
    def parse(cls, text: str) -> "Morphism":
        """Read the ``<letter> -> <image>`` line format (``#`` starts a comment)."""
        rules: dict[int, bytes] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            lhs, sep, rhs = line.partition("->")
            if not sep:
                raise InvalidInput(f"line {lineno}: expected '<letter> -> <image>'")
            try:
                letter = int(lhs.strip())
                image = word(rhs.strip())
            except ValueError as exc:
                raise InvalidInput(f"line {lineno}: {exc}") from None
            if letter in rules:
                raise InvalidInput(f"line {lineno}: duplicate rule for letter {letter}")
            rules[letter] = image
        if not rules:
            raise InvalidInput("no rules found")
        k = max(rules) + 1
        missing = [a for a in range(k) if a not in rules]
        if missing:
            raise InvalidInput(f"no rule for letter(s) {missing}")
        return cls(tuple(rules[a] for a in range(k)))

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Morphism":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())

    def dumps(self) -> str:
        return "".join(f"{a} -> {to_str(im)}\n" for a, im in enumerate(self.images))

    @property
    def domain(self) -> int:
        return len(self.images)

    def __call__(self, w: bytes) -> bytes:
        return apply_morphism(self, w)

    def __getitem__(self, a: int) -> bytes:
        return self.images[a]

    def is_prolongable(self, a: int) -> bool:
        return (
            0 <= a < self.domain
            and self.codomain == self.domain
            and len(self.images[a]) >= 2
            and self.images[a][0] == a
        )

    def power(self, n: int) -> "Morphism":
        if n < 0:
            raise InvalidInput("negative power")
        result = Morphism.identity(self.domain)
        for _ in range(n):
            result = compose(self, result)
        return result

    def __str__(self) -> str:
        return ", ".join(f"{a}->{to_str(im)}" for a, im in enumerate(self.images))


def apply_morphism(m: Morphism, w: bytes) -> bytes:
    check_word(w, m.domain)
    return b"".join(map(m.images.__getitem__, w))


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """The morphism ``a -> outer(inner(a))``."""
    if inner.codomain != outer.domain:
        raise InvalidInput(
            f"cannot compose: inner codomain has {inner.codomain} letters, "
            f"outer domain has {outer.domain}"
        )
    return Morphism(tuple(outer(im) for im in inner.images), outer.codomain)


def iterate(m: Morphism, w: bytes, n: int) -> bytes:
    """``m`` applied ``n`` times to ``w``."""
    for _ in range(n):
        w = m(w)
    return w


def is_bifix_code(words: Iterable[bytes]) -> bool:
    words = list(words)
    if any(not w for w in words) or len(set(words)) != len(words):
        return False
    for a in words:
        for b in words:
            if a is not b and (b.startswith(a) or b.endswith(a)):
                return False
    return True


def decode_bifix(w: bytes, m: Morphism) -> bytes:
    """The unique ``u`` with ``m(u) == w``, for a morphism whose images form a bifix code.

    Decoding is greedy from the left; the prefix-code property makes each
    step forced.
    """
    if not is_bifix_code(m.images):
        raise InvalidMorphism(f"images of {m} do not form a bifix code")
    check_word(w, m.codomain)
    out = bytearray()
    pos = 0
    while pos < len(w):
        for a, im in enumerate(m.images):
            if w.startswith(im, pos):
                out.append(a)
                pos += len(im)
                break
        else:
            raise NotInImage(
                f"no image of {m} matches {to_str(w)!r} at position {pos}"
            )
    return bytes(out)


# --------------------------------------------------------------------------
# Streams


def _letter_cap() -> Optional[int]:
    raw = os.environ.get(MEM_ENV)
    if not raw:
        return None
    try:
        return int(float(raw) * (1 << 20))
    except ValueError:
        raise InvalidInput(f"{MEM_ENV} must be a number, got {raw!r}") from None


class WordStream:
    """An infinite word materialised on demand into a growing prefix buffer.

    Subclasses implement :meth:`_grow`, which appends at least up to a
    target length and may overshoot.  Growth is serialised by a lock, and
    the committed buffer is only ever appended to, so ``prefix(n)`` is
    a prefix of ``prefix(n + 1)`` and concurrent readers agree.
    """

    kind = "abstract"

    def __init__(self):
        self._buf = bytearray()
        self._lock = threading.Lock()

    def _grow(self, target: int) -> None:
        raise NotImplementedError

    def _ensure(self, n: int) -> None:
        if len(self._buf) >= n:
            return
        cap = _letter_cap()
        if cap is not None and n > cap:
            raise MemoryBudgetExceeded(
                f"{n} letters exceed the {MEM_ENV} cap of {cap} bytes"
            )
        with self._lock:
            if len(self._buf) >= n:
                return
            target = max(n, 2 * len(self._buf))
            if cap is not None:
                target = min(target, cap)
            self._grow(target)
            if len(self._buf) < n:
                raise ExhaustedStream(
                    f"{self.kind} stream {self!r} produced only {len(self._buf)} letters"
                )

    def prefix(self, n: int) -> bytes:
        if n < 0:
            raise InvalidInput("prefix length must be non-negative")
        self._ensure(n)
        return bytes(self._buf[:n])

    def factor(self, start: int, stop: int) -> bytes:
        """Letters at positions ``start..stop-1``."""
        self._ensure(stop)
        return bytes(self._buf[start:stop])

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError("streams are infinite; negative indices are undefined")
        self._ensure(i + 1)
        return self._buf[i]

    def __iter__(self) -> Iterator[int]:
        i = 0
        while True:
            yield self[i]
            i += 1

    def shift(self, k: int) -> "WordStream":
        return shift(self, k)

    @property
    def materialised(self) -> int:
        return len(self._buf)


class FixedPoint(WordStream):
    """The fixed point of ``m`` beginning with ``seed``."""

    kind = "fixed-point"

    def __init__(self, m: Morphism, seed: int):
        super().__init__()
        if not m.is_prolongable(seed):
            raise InvalidMorphism(f"{m} is not prolongable at {seed}")
        self.morphism = m
        self.seed = seed
        self._buf += m.images[seed]
        self._expanded = 1
        nonempty = [len(im) for im in m.images if im]
        self._min_len = min(nonempty)

    def _grow(self, target: int) -> None:
        buf, images = self._buf, self.morphism.images
        while len(buf) < target:
            p = self._expanded
            if p >= len(buf):
                return
            q = min(len(buf), p + (target - len(buf)) // self._min_len + 1)
            buf += b"".join(map(images.__getitem__, buf[p:q]))
            self._expanded = q

    def __repr__(self) -> str:
        return f"FixedPoint({self.morphism}, {self.seed})"


class Image(WordStream):
    """The image of a stream under a morphism, expanded chunk by chunk."""

    kind = "image"

    def __init__(self, m: Morphism, source: WordStream):
        super().__init__()
        self.morphism = m
        self.source = source
        self._consumed = 0
        nonempty = [len(im) for im in m.images if im]
        self._min_len = min(nonempty) if nonempty else 1

    def _grow(self, target: int) -> None:
        buf, images = self._buf, self.morphism.images
        stalled = 0
        while len(buf) < target:
            c = max(16, (target - len(buf)) // self._min_len + 1)
            chunk = self.source.factor(self._consumed, self._consumed + c)
            check_word(chunk, self.morphism.domain)
            before = len(buf)
            buf += b"".join(map(images.__getitem__, chunk))
            self._consumed += c
            stalled = stalled + c if len(buf) == before else 0
            if stalled > STALL_LIMIT:
                return

    def __repr__(self) -> str:
        return f"Image({self.morphism}, {self.source!r})"


class Shift(WordStream):
    """The stream with the first ``k`` letters of ``source`` removed."""

    kind = "shift"

    def __init__(self, source: WordStream, k: int):
        super().__init__()
        if k < 0:
            raise InvalidInput("shift amount must be non-negative")
        # Collapse nested shifts so the source chain stays short.
        while isinstance(source, Shift):
            source, k = source.source, source.k + k
        self.source = source
        self.k = k

    def _grow(self, target: int) -> None:
        k = self.k
        self._buf += self.source.factor(k + len(self._buf), k + target)

    def __repr__(self) -> str:
        return f"Shift({self.source!r}, {self.k})"


class Rule(WordStream):
    """A stream given by a position rule ``rule(i) -> letter``.

    With ``vectorized=True`` the rule receives a numpy array of positions
    and returns an array of letters.
    """

    kind = "rule"

    def __init__(self, rule: Callable, vectorized: bool = False, name: str = ""):
        super().__init__()
        self.rule = rule
        self.vectorized = vectorized
        self.name = name or getattr(rule, "__name__", "rule")

    def _grow(self, target: int) -> None:
        start = len(self._buf)
        if self.vectorized:
            letters = np.asarray(self.rule(np.arange(start, target, dtype=np.int64)))
            self._buf += letters.astype(np.uint8).tobytes()
        else:
            self._buf += bytes(self.rule(i) for i in range(start, target))

    def __repr__(self) -> str:
        return f"Rule({self.name})"


class Chunks(WordStream):
    """Concatenation of the words produced by an iterable (possibly finite)."""

    kind = "chunks"

    def __init__(self, chunks: Iterable[bytes], name: str = "chunks"):
        super().__init__()
        self._it = iter(chunks)
        self.name = name

    def _grow(self, target: int) -> None:
        stalled = 0
        for chunk in self._it:
            if chunk:
                self._buf += chunk
                stalled = 0
                if len(self._buf) >= target:
                    return
            else:
                stalled += 1
                if stalled > STALL_LIMIT:
                    return

    def __repr__(self) -> str:
        return f"Chunks({self.name})"


def shift(s: WordStream, k: int) -> WordStream:
    return s if k == 0 else Shift(s, k)


def periodic(period: bytes | str) -> WordStream:
    """The infinite word ``period period period ...``."""
    w = word(period)
    if not w:
        raise InvalidInput("period must be non-empty")
    arr = np.frombuffer(w, dtype=np.uint8)
    return Rule(lambda idx: arr[idx % len(w)], vectorized=True, name=f"({to_str(w)})^w")


def constant(letter: int) -> WordStream:
    return periodic(bytes([letter]))


def finite(w: bytes | str) -> WordStream:
    """A stream that holds exactly the letters of ``w`` and is exhausted afterwards."""
    w = word(w)
    return Chunks(iter([w]), name=f"finite({to_str(w)})")


def prepend(head: bytes | str, s: WordStream) -> WordStream:
    """The word ``head`` followed by the stream ``s``."""
    head = word(head)

    def gen():
        yield head
        i = 0
        step = 4096
        while True:
            yield s.factor(i, i + step)
            i += step

    return Chunks(gen(), name=f"{to_str(head)}.{s!r}")


# --------------------------------------------------------------------------
# Factor search


@dataclass(frozen=True)
class Occurrence:
    position: int
    length: int

    @property
    def end(self) -> int:
        return self.position + self.length


def fixed_point_prefix(m: Morphism, seed: int, n: int) -> bytes:
    """Length-``n`` prefix of the fixed point of ``m`` starting with ``seed``."""
    return _fixed_point(m, seed).prefix(n)


_FIXED_POINTS: dict[tuple[Morphism, int], FixedPoint] = {}
_FIXED_LOCK = threading.Lock()


def _fixed_point(m: Morphism, seed: int) -> FixedPoint:
    with _FIXED_LOCK:
        s = _FIXED_POINTS.get((m, seed))
        if s is None:
            s = _FIXED_POINTS[(m, seed)] = FixedPoint(m, seed)
        return s


def find_occurrence(
    s: WordStream, factor: bytes, start: int, limit: int
) -> Optional[Occurrence]:
    """Leftmost occurrence of ``factor`` at a position ``>= start`` inside ``s.prefix(limit)``."""
    if start < 0:
        raise InvalidInput("search start must be non-negative")
    if limit < start + len(factor):
        raise InvalidInput("limit must be at least start + len(factor)")
    pos = s.prefix(limit).find(factor, start)
    return None if pos < 0 else Occurrence(pos, len(factor))


def is_factor_of(candidate: bytes, s: WordStream, limit: int) -> bool:
    if limit < len(candidate):
        raise InvalidInput("limit must be at least len(candidate)")
    return candidate in s.prefix(limit)


def factors(w: bytes, n: int) -> set[bytes]:
    """All distinct factors of ``w`` of length exactly ``n``."""
    return {w[i:i + n] for i in range(len(w) - n + 1)}
