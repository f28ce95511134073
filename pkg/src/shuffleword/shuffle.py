"""Shuffle relations between infinite words, decided and certified on prefixes.

A word ``z`` is a shuffle of ``x`` and ``y`` when ``z = U0 V0 U1 V1 ...`` with
``x = U0 U1 ...`` and ``y = V0 V1 ...``.  Blocks may be empty and adjacent
blocks from the same source merge, so a length-``n`` prefix of ``z`` admits
such a factorisation exactly when it is an interleaving of some prefixes of
``x`` and ``y``.  The frontier DP below therefore ignores block boundaries.

Everything here is finite-depth evidence: a surviving frontier is necessary
for ``z`` to be a shuffle, never sufficient, and a bounded balanced-survival
curve is consistent with non-membership without proving it.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .catalog import G, H, H_PRIME
from .errors import (
    ExhaustedSchedule,
    ExhaustedStream,
    InvalidInput,
    RecurrenceBudgetExceeded,
)
from .words import (
    STALL_LIMIT,
    Chunks,
    WordStream,
    find_occurrence,
    iterate,
    left_quotient,
    to_str,
    word,
)

NO_LETTER = 255  # never a letter: alphabets stop at 255 letters, i.e. letter 254


def _letters(s: WordStream | bytes, n: int) -> bytes:
    """Up to ``n`` letters of ``s``; finite sources may return fewer."""
    if isinstance(s, (bytes, bytearray)):
        return bytes(s[:n])
    try:
        return s.prefix(n)
    except ExhaustedStream:
        return s.prefix(s.materialised)[:n]


_ONE_HOT = [bytes(49 if b == a else 48 for b in range(256)) for a in range(256)]


def _masks(w: bytes, reverse_to: Optional[int] = None) -> dict[int, int]:
    """Per-letter bitmasks: bit ``t`` set iff ``w[t]`` is that letter.

    With ``reverse_to = N`` bit ``t`` refers to ``w[N - 1 - t]`` instead.
    """
    if reverse_to is None:
        seq = w[::-1]
    else:
        seq = w + bytes([NO_LETTER]) * (reverse_to - len(w))
    return {a: int(seq.translate(_ONE_HOT[a]), 2) for a in set(w)}


def _advance(Z: bytes, mx: dict[int, int], my: dict[int, int], top: int, bits: int = 1) -> int:
    for level, c in enumerate(Z):
        bits = ((bits & mx.get(c, 0)) << 1) | (bits & (my.get(c, 0) >> (top - 1 - level)))
        if not bits:
            break
    return bits


# --------------------------------------------------------------------------
# Frontier DP


@dataclass(frozen=True)
class ShuffleFrontier:
    """Split states at level ``n``, one bit per state of the anti-diagonal:
    bit ``i`` of ``bits`` is set when the length-``n`` prefix of ``z``
    interleaves ``x[:i]`` with ``y[:n - i]``."""

    level: int
    bits: int = field(repr=False)

    @property
    def states(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, self.level - i) for i in self.indices())

    def indices(self) -> Iterator[int]:
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low

    def __contains__(self, state: tuple[int, int]) -> bool:
        i, j = state
        return i + j == self.level and i >= 0 and j >= 0 and bool(self.bits >> i & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def balance(self) -> float:
        """``max min(i, j)`` over states, ``-inf`` when empty."""
        b = self.bits
        if not b:
            return -math.inf
        mid = self.level // 2
        low = b & ((1 << (mid + 1)) - 1)
        best = low.bit_length() - 1 if low else -1  # largest i <= mid
        high = b >> (mid + 1)
        if high:
            i = (high & -high).bit_length() + mid  # smallest i > mid
            best = max(best, self.level - i)
        return float(best)


def frontier_levels(z, x, y, n: int) -> Iterator[ShuffleFrontier]:
    """Frontiers for levels ``0..n``, advanced one anti-diagonal at a time.

    ``z`` must supply ``n`` letters; ``x`` and ``y`` may be finite, in which
    case states that would read past their end are simply absent.
    """
    if n < 0:
        raise InvalidInput("depth must be non-negative")
    Z = _letters(z, n)
    if len(Z) < n:
        raise ExhaustedStream(f"z supplies only {len(Z)} of {n} letters")
    mx = _masks(_letters(x, n))
    top = n + 1
    my = _masks(_letters(y, n), reverse_to=top)
    bits = 1
    yield ShuffleFrontier(0, bits)
    for level in range(n):
        c = Z[level]
        # (i, j) -> (i + 1, j) reads x[i]; (i, j) -> (i, j + 1) reads y[j] = y[level - i]
        bits = ((bits & mx.get(c, 0)) << 1) | (bits & (my.get(c, 0) >> (top - 1 - level)))
        yield ShuffleFrontier(level + 1, bits)


def shuffle_frontier(z, x, y, n: int) -> ShuffleFrontier:
    for frontier in frontier_levels(z, x, y, n):
        pass
    return frontier


def frontier_history(z, x, y, n: int) -> list[ShuffleFrontier]:
    """All frontiers up to level ``n`` (keeps every level, for trace checks)."""
    return list(frontier_levels(z, x, y, n))


def is_shuffle_to_depth(z, x, y, n: int) -> bool:
    return bool(shuffle_frontier(z, x, y, n))


def exact_finite_shuffle(z: bytes, x: bytes, y: bytes) -> bool:
    """Whether ``z`` interleaves finite words ``x`` and ``y`` consuming both fully."""
    z, x, y = word(z), word(x), word(y)
    if len(z) != len(x) + len(y):
        raise InvalidInput(f"|z| = {len(z)} but |x| + |y| = {len(x) + len(y)}")
    n = len(z)
    bits = _advance(z, _masks(x), _masks(y, reverse_to=n + 1), n + 1)
    return bool(bits >> len(x) & 1)


# --------------------------------------------------------------------------
# Balanced survival


@dataclass(frozen=True)
class SurvivalCurve:
    """``values[n - 1]`` is the balance ``b(n)`` of the frontier at level ``n``."""

    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= len(self.values):
            raise IndexError(n)
        return float(self.values[n - 1])

    def plateau(self) -> tuple[float, int]:
        """``(C, n0)``: the final value and the first level from which ``b`` stays at it."""
        v = self.values
        last = v[-1]
        differ = np.flatnonzero(v != last)
        n0 = int(differ[-1]) + 2 if len(differ) else 1
        return float(last), n0

    def to_csv(self) -> str:
        lines = ["n,b"]
        for n, b in enumerate(self.values.tolist(), 1):
            lines.append(f"{n},{'-inf' if b == -math.inf else int(b)}")
        return "\n".join(lines) + "\n"


def survival_curve(z, x, y, N: int) -> SurvivalCurve:
    if N < 1:
        raise InvalidInput("survival curve needs N >= 1")
    out = np.empty(N, dtype=np.float64)
    for f in frontier_levels(z, x, y, N):
        if f.level:
            out[f.level - 1] = f.balance()
    return SurvivalCurve(out)


# --------------------------------------------------------------------------
# Block schedules


class BlockSchedule:
    """Lazily produced block pairs ``(U_i, V_i)``, memoised as they are generated.

    ``source`` is a zero-argument callable returning an iterator of pairs; a
    finite iterator gives a finite (truncated) schedule.
    """

    def __init__(self, source: Callable[[], Iterable[tuple[bytes, bytes]]], name: str = "schedule"):
        self._it = iter(source())
        self._pairs: list[tuple[bytes, bytes]] = []
        self._done = False
        self._lock = threading.Lock()
        self.name = name

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[bytes, bytes]], name: str = "finite") -> "BlockSchedule":
        pairs = [(word(u), word(v)) for u, v in pairs]
        return cls(lambda: iter(pairs), name)

    def _fill(self, count: int) -> None:
        with self._lock:
            while len(self._pairs) < count and not self._done:
                try:
                    self._pairs.append(next(self._it))
                except StopIteration:
                    self._done = True

    def pair(self, i: int) -> tuple[bytes, bytes]:
        self._fill(i + 1)
        if i >= len(self._pairs):
            raise ExhaustedSchedule(f"{self.name} has only {len(self._pairs)} block pairs")
        return self._pairs[i]

    def U(self, i: int) -> bytes:
        return self.pair(i)[0]

    def V(self, i: int) -> bytes:
        return self.pair(i)[1]

    def __iter__(self) -> Iterator[tuple[bytes, bytes]]:
        i = 0
        while True:
            self._fill(i + 1)
            if i >= len(self._pairs):
                return
            yield self._pairs[i]
            i += 1

    def pairs(self, count: int) -> list[tuple[bytes, bytes]]:
        self._fill(count)
        return self._pairs[:count]

    def truncate(self, count: int) -> "BlockSchedule":
        return BlockSchedule.from_pairs(self.pairs(count), f"{self.name}[:{count}]")

    def _product(self, pick: Callable[[bytes, bytes], bytes], name: str) -> WordStream:
        return Chunks((pick(u, v) for u, v in self), name=f"{name}({self.name})")

    def u_product(self) -> WordStream:
        return self._product(lambda u, v: u, "prodU")

    def v_product(self) -> WordStream:
        return self._product(lambda u, v: v, "prodV")

    def uv_product(self) -> WordStream:
        return self._product(lambda u, v: u + v, "prodUV")

    def dumps(self, count: int) -> str:
        return "".join(
            f"U[{i}]={to_str(u)} V[{i}]={to_str(v)}\n"
            for i, (u, v) in enumerate(self.pairs(count))
        )

    @classmethod
    def loads(cls, text: str, name: str = "loaded") -> "BlockSchedule":
        """Parse the ``U[i]=<word> V[i]=<word>`` dump format."""
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                left, right = line.split()
                ul, uw = left.split("=", 1)
                vl, vw = right.split("=", 1)
            except ValueError:
                raise InvalidInput(f"line {lineno}: expected 'U[i]=<word> V[i]=<word>'") from None
            idx = len(pairs)
            if ul != f"U[{idx}]" or vl != f"V[{idx}]":
                raise InvalidInput(f"line {lineno}: expected block index {idx}")
            pairs.append((word(uw), word(vw)))
        return cls.from_pairs(pairs, name)

    def __repr__(self) -> str:
        return f"BlockSchedule({self.name})"


def block_trace(schedule: BlockSchedule, depth: int) -> Iterator[tuple[int, int]]:
    """Split states visited by the factorisation, one per level up to ``depth``."""
    i = j = 0
    yield (0, 0)
    for u, v in schedule:
        for _ in u:
            if i + j == depth:
                return
            i += 1
            yield (i, j)
        for _ in v:
            if i + j == depth:
                return
            j += 1
            yield (i, j)
        if i + j == depth:
            return


# --------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class Mismatch:
    stream: str
    position: int
    expected: Optional[int]
    actual: int

    def to_dict(self) -> dict:
        return {
            "stream": self.stream,
            "position": self.position,
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass(frozen=True)
class FactorizationReport:
    depth: int
    blocks_used: int
    lengths: dict[str, int]
    matched: dict[str, int]
    mismatch: Optional[Mismatch] = None

    @property
    def ok(self) -> bool:
        return self.mismatch is None

    def to_dict(self) -> dict:
        out = {
            "ok": self.ok,
            "depth": self.depth,
            "blocks": self.blocks_used,
            "lengths": dict(self.lengths),
            "matched": dict(self.matched),
        }
        if self.mismatch is not None:
            out["mismatch"] = self.mismatch.to_dict()
        return out


def _first_difference(expected: bytes, actual: bytes) -> Optional[int]:
    m = min(len(expected), len(actual))
    a = np.frombuffer(expected[:m], dtype=np.uint8)
    b = np.frombuffer(actual[:m], dtype=np.uint8)
    diff = np.flatnonzero(a != b)
    if len(diff):
        return int(diff[0])
    return None if len(expected) >= len(actual) else m


def verify_block_factorization(z, x, y, schedule: BlockSchedule, depth: int) -> FactorizationReport:
    """Check ``prod U_i V_i``, ``prod U_i`` and ``prod V_i`` against ``z``, ``x``, ``y``.

    Blocks are consumed until each of the three products holds at least
    ``depth`` letters; each product is then compared in full with the
    corresponding stream.
    """
    if depth < 1:
        raise InvalidInput("depth must be at least 1")
    uv, uu, vv = bytearray(), bytearray(), bytearray()
    used = 0
    stalled = 0
    for u, v in schedule:
        used += 1
        uv += u
        uv += v
        uu += u
        vv += v
        if len(uu) >= depth and len(vv) >= depth:
            break
        stalled = stalled + 1 if not (u or v) else 0
        if stalled > STALL_LIMIT:
            raise ExhaustedSchedule(f"{schedule.name} stopped producing letters")
    else:
        raise ExhaustedSchedule(
            f"{schedule.name} ran out after {used} pairs "
            f"(|prod U| = {len(uu)}, |prod V| = {len(vv)}, depth {depth})"
        )

    lengths = {"z": len(uv), "x": len(uu), "y": len(vv)}
    matched: dict[str, int] = {}
    first: Optional[Mismatch] = None
    for name, stream, built in (("z", z, uv), ("x", x, uu), ("y", y, vv)):
        expected = _letters(stream, len(built))
        pos = _first_difference(expected, bytes(built))
        matched[name] = len(built) if pos is None else pos
        if pos is not None and (first is None or pos < first.position):
            exp = expected[pos] if pos < len(expected) else None
            first = Mismatch(name, pos, exp, built[pos])
    return FactorizationReport(depth, used, lengths, matched, first)


# --------------------------------------------------------------------------
# Explicit witnesses


@lru_cache(maxsize=None)
def _g_iter(i: int, w: bytes) -> bytes:
    return iterate(G, w, i)


def _unwrap(s: str) -> bytes:
    """``0^{-1} g(s) 0``: drop the leading 0 of ``g(s)`` and append one."""
    return left_quotient(b"\x00", G(word(s))) + b"\x00"


# Pairs (U_{6i+r}, V_{6i+r}) for r = 2..7 as (power offset, word) templates;
# the block is g^{i + offset}(word).
_G_PERIOD = (
    ((0, _unwrap("0")), (0, _unwrap("1"))),
    ((0, _unwrap("3")), (0, _unwrap("03"))),
    ((0, _unwrap("201")), (0, word("1"))),
    ((0, word("30")), (0, word("3"))),
    ((0, word("2") + G(word("03"))), (1, word("0"))),
    ((1, word("20")), (1, _unwrap("2"))),
)


def g_witness_block(n: int) -> tuple[bytes, bytes]:
    """Block pair ``(U_n, V_n)`` of the self-shuffle of the fixed point of g."""
    if n == 0:
        return _g_iter(2, word("0")), G(word("0")) + word("03")
    if n == 1:
        return word("0"), word("2") + G(word("2")) + word("0")
    i, r = divmod(n - 2, 6)
    (ku, wu), (kv, wv) = _G_PERIOD[r]
    return _g_iter(i + ku, wu), _g_iter(i + kv, wv)


def self_shuffle_witness_g() -> BlockSchedule:
    def pairs():
        n = 0
        while True:
            yield g_witness_block(n)
            n += 1

    return BlockSchedule(pairs, "g-self")


def g_u_closed_form() -> WordStream:
    """``g^2(0) g^2(121) g^3(121) ...``, which should equal ``prod U_i`` of the g witness."""

    def chunks():
        yield _g_iter(2, word("0"))
        k = 2
        while True:
            yield _g_iter(k, word("121"))
            k += 1

    return Chunks(chunks(), name="g2(0)g2(121)g3(121)...")


@lru_cache(maxsize=None)
def _hp2_h_iter(i: int) -> bytes:
    """``h'^2(h^i(1))``."""
    return H_PRIME(H_PRIME(iterate(H, word("1"), i)))


def hall_witness_block(n: int) -> tuple[bytes, bytes]:
    """Block pair ``(U_n, V_n)`` of the shuffle of the Hall word."""
    if n == 0:
        return word("01"), H_PRIME(word("1"))
    if n == 1:
        return H_PRIME(word("0")), _hp2_h_iter(0)
    if n == 2:
        return H_PRIME(word("1")), _hp2_h_iter(1)
    return _hp2_h_iter(n - 3), _hp2_h_iter(n - 1)


def hall_shuffle_witness() -> BlockSchedule:
    def pairs():
        n = 0
        while True:
            yield hall_witness_block(n)
            n += 1

    return BlockSchedule(pairs, "hall")


WITNESSES = {"g-self": self_shuffle_witness_g, "hall": hall_shuffle_witness}


# --------------------------------------------------------------------------
# Recurrent-word construction


@dataclass(frozen=True)
class RecurrentShuffle:
    """Result of :func:`build_recurrent_shuffle`.

    ``u_positions[k]`` is where ``U_0 ... U_k`` sits as a suffix of the covered
    prefix of ``x`` (the position ``i_{k+1}``), ``v_positions[k]`` likewise for
    ``V_0 ... V_k`` (``j_k``, with ``j_0 = |U_0|``).
    """

    schedule: BlockSchedule
    u_positions: list[int]
    v_positions: list[int]
    covered: int
    u_length: int
    v_length: int

    @property
    def positions(self) -> list[tuple[int, int]]:
        return list(zip(self.u_positions, self.v_positions))

    @property
    def depth(self) -> int:
        return min(self.u_length, self.v_length)


def build_recurrent_shuffle(
    x: WordStream, rounds: int, search_limit: int, u0: bytes | str | None = None
) -> RecurrentShuffle:
    """Shuffle ``x`` from two words of its orbit closure, block pair by block pair.

    Invariant after each half-step: ``prod U`` and ``prod V`` are both
    suffixes of the covered prefix ``x[:covered]``, occurring at ``a`` and
    ``b``.  Extending ``prod V`` means finding its next occurrence ``j > b``;
    the letters of ``x`` between the covered end and that occurrence's end form
    the new ``U`` block, and symmetrically for ``V``.  Occurrences are always
    the leftmost admissible ones.
    """
    if rounds < 1:
        raise InvalidInput("rounds must be at least 1")
    u0 = x.prefix(1) if u0 is None else word(u0)
    if not u0:
        raise InvalidInput("U_0 must be non-empty")
    if x.prefix(len(u0)) != u0:
        raise InvalidInput(f"U_0 = {to_str(u0)!r} is not a prefix of x")

    def next_occurrence(start: int, length: int, after: int) -> int:
        factor = x.factor(start, start + length)
        occ = None
        if after + 1 + length <= search_limit:
            occ = find_occurrence(x, factor, after + 1, search_limit)
        if occ is None:
            raise RecurrenceBudgetExceeded(
                f"no occurrence of a length-{length} factor after position {after} "
                f"within the first {search_limit} letters"
            )
        return occ.position

    us: list[bytes] = [u0]
    vs: list[bytes] = []
    u_pos: list[int] = []
    v_pos: list[int] = []
    su = covered = len(u0)
    a = 0

    # V_0: reach the next occurrence of U_0.
    i_k = next_occurrence(a, su, a)
    vs.append(x.factor(covered, i_k + su))
    sv = len(vs[0])
    b, covered, a = covered, i_k + su, i_k
    u_pos.append(a)
    v_pos.append(b)

    for _ in range(rounds - 1):
        j_k = next_occurrence(b, sv, b)
        us.append(x.factor(covered, j_k + sv))
        su += len(us[-1])
        covered, b = j_k + sv, j_k
        i_k = next_occurrence(a, su, a)
        vs.append(x.factor(covered, i_k + su))
        sv += len(vs[-1])
        covered, a = i_k + su, i_k
        u_pos.append(a)
        v_pos.append(b)

    schedule = BlockSchedule.from_pairs(list(zip(us, vs)), f"recurrent[{rounds}]")
    return RecurrentShuffle(schedule, u_pos, v_pos, covered, su, sv)
