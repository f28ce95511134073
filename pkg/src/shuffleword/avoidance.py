"""Square, 3u1u3 and fractional-repetition scans over finite words.

All scans run on longest-common-extension queries (see :mod:`shuffleword.lce`)
so that prefixes of length 10^5 are handled in seconds.  Exponents are kept
as :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidInput
from .lce import LCE
from .words import Occurrence, to_str

# Upper bound on (position, period) samples evaluated per numpy batch.
BATCH = 1 << 21
# Below this length a direct scan beats building suffix arrays.
SHORT = 48


@dataclass(frozen=True)
class SquareReport:
    clean: bool
    position: Optional[int] = None
    root: Optional[bytes] = None

    def to_dict(self) -> dict:
        if self.clean:
            return {"clean": True}
        return {"clean": False, "position": self.position, "root": to_str(self.root)}


@dataclass(frozen=True)
class PatternReport:
    """Outcome of a 3u1u3 scan; ``u`` may be empty."""

    clean: bool
    occurrence: Optional[Occurrence] = None
    u: Optional[bytes] = None

    @property
    def position(self) -> Optional[int]:
        return None if self.occurrence is None else self.occurrence.position

    def to_dict(self) -> dict:
        if self.clean:
            return {"clean": True}
        return {
            "clean": False,
            "position": self.occurrence.position,
            "length": self.occurrence.length,
            "root": to_str(self.u),
        }


@dataclass(frozen=True)
class ExponentReport:
    max_exponent: Fraction
    position: int
    period: int
    length: int

    def to_dict(self) -> dict:
        e = self.max_exponent
        return {
            "exponent": f"{e.numerator}/{e.denominator}",
            "position": self.position,
            "period": self.period,
            "length": self.length,
        }

    def exceeds(self, bound: Fraction) -> bool:
        return self.max_exponent > bound


def _period_batches(n: int, p_lo: int, p_hi: int, step_of):
    """Yield ``(q, p)`` sample arrays: for each period ``p``, the multiples of
    ``step_of(p)`` strictly below ``n - p``."""
    ps, steps, counts = [], [], []
    total = 0

    def flush():
        p_arr = np.repeat(np.asarray(ps, dtype=np.int64), counts)
        s_arr = np.repeat(np.asarray(steps, dtype=np.int64), counts)
        starts = np.repeat(np.cumsum([0] + counts[:-1]), counts)
        q = (np.arange(len(p_arr), dtype=np.int64) - starts) * s_arr
        return q, p_arr

    for p in range(p_lo, p_hi):
        t = step_of(p)
        if t is None or t > n - p:
            continue
        c = (n - p - 1) // t + 1
        ps.append(p)
        steps.append(t)
        counts.append(c)
        total += c
        if total >= BATCH:
            yield flush()
            ps, steps, counts, total = [], [], [], 0
    if ps:
        yield flush()


def find_square(w: bytes) -> SquareReport:
    """Leftmost square in ``w``, shortest root first at that position.

    A square ``uu`` with ``|u| = p`` starting at ``s`` makes the letters at
    ``s..s+p-1`` agree with those ``p`` places later; that stretch contains a
    multiple of ``p``, so sampling multiples of ``p`` and extending both ways
    finds every maximal run of period ``p``.
    """
    if len(w) <= SHORT:
        return _square_direct(w)
    return _square_lce(w)


def _square_direct(w: bytes) -> SquareReport:
    n = len(w)
    for s in range(n - 1):
        for p in range(1, (n - s) // 2 + 1):
            if w[s:s + p] == w[s + p:s + 2 * p]:
                return SquareReport(False, s, w[s:s + p])
    return SquareReport(True)


def _square_lce(w: bytes) -> SquareReport:
    n = len(w)
    if n < 2:
        return SquareReport(True)
    lce = LCE(w)
    best = None
    for q, p in _period_batches(n, 1, n // 2 + 1, lambda p: p):
        back = lce.backward(q, q + p)
        fwd = lce.forward(q, q + p)
        hit = back + fwd >= p
        if not hit.any():
            continue
        starts = (q - back)[hit]
        periods = p[hit]
        k = np.lexsort((periods, starts))[0]
        cand = (int(starts[k]), int(periods[k]))
        if best is None or cand < best:
            best = cand
    if best is None:
        return SquareReport(True)
    s, p = best
    return SquareReport(False, s, w[s:s + p])


def is_square_free(w: bytes) -> bool:
    return find_square(w).clean


def max_exponent(w: bytes) -> ExponentReport:
    """Largest ``|v| / period(v)`` over factors ``v`` of ``w``.

    The witness is the leftmost factor of maximal exponent among those with
    the smallest period.  Periods are scanned in increasing order; once an
    exponent ``e`` is known, a run of period ``p`` can only beat it by
    matching at least ``floor((e - 1) p) + 1`` consecutive positions, which
    lets the scan sample positions sparsely.
    """
    n = len(w)
    if n < 1:
        raise InvalidInput("max_exponent needs a non-empty word")
    lce = LCE(w)
    best_len, best_per, best_pos = 1, 1, 0

    p = 1
    while p < n:
        # Freeze the threshold for one block of periods; a smaller threshold is
        # still exact, just denser.
        bl, bp = best_len, best_per
        step = lambda per: (bl - bp) * per // bp + 1
        block_end = p
        budget = 0
        while block_end < n and budget < BATCH:
            t = step(block_end)
            if t <= n - block_end:
                budget += (n - block_end - 1) // t + 1
            block_end += 1
        for q, per in _period_batches(n, p, block_end, step):
            back = lce.backward(q, q + per)
            fwd = lce.forward(q, q + per)
            length = back + fwd + per
            # exponent length/per strictly above the current best
            better = length * best_per > best_len * per
            if not better.any():
                continue
            length, per_b, start = length[better], per[better], (q - back)[better]
            # maximise length/per exactly; floats only narrow the candidates
            approx = length / per_b
            near = np.flatnonzero(approx >= approx.max() * (1 - 1e-9))
            i = max(
                near.tolist(),
                key=lambda i: (Fraction(int(length[i]), int(per_b[i])), -int(per_b[i]), -int(start[i])),
            )
            best_len, best_per, best_pos = int(length[i]), int(per_b[i]), int(start[i])
        p = block_end
    return ExponentReport(Fraction(best_len, best_per), best_pos, best_per, best_len)


def find_pattern_3u1u3(w: bytes) -> PatternReport:
    """Leftmost factor ``3 u 1 u 3`` (then shortest), with ``u`` possibly empty."""
    if w.count(3) < 2:
        return PatternReport(True)
    if len(w) <= SHORT:
        return _pattern_direct(w)
    return _pattern_lce(w)


def _pattern_direct(w: bytes) -> PatternReport:
    n = len(w)
    for a in range(n):
        if w[a] != 3:
            continue
        for m in range((n - a - 3) // 2 + 1):
            b = a + 2 * m + 2
            if w[b] == 3 and w[a + m + 1] == 1 and w[a + 1:a + 1 + m] == w[a + m + 2:b]:
                return PatternReport(False, Occurrence(a, 2 * m + 3), w[a + 1:a + 1 + m])
    return PatternReport(True)


def _pattern_lce(w: bytes) -> PatternReport:
    arr = np.frombuffer(w, dtype=np.uint8)
    threes = np.flatnonzero(arr == 3)
    if len(threes) < 2:
        return PatternReport(True)
    lce = LCE(w)
    for k, a in enumerate(threes[:-1].tolist()):
        b = threes[k + 1:]
        gap = b - a
        ok = (gap % 2 == 0)
        mid = a + gap // 2
        ok &= arr[np.where(ok, mid, a)] == 1
        if not ok.any():
            continue
        b, mid = b[ok], mid[ok]
        m = mid - a - 1
        match = lce.forward(np.full_like(mid, a + 1), mid + 1) >= m
        if match.any():
            j = int(np.flatnonzero(match)[0])
            u_len = int(m[j])
            return PatternReport(
                False, Occurrence(a, 2 * u_len + 3), w[a + 1:a + 1 + u_len]
            )
    return PatternReport(True)


def repetition_threshold(k: int) -> Fraction:
    """Least exponent avoidable by an infinite word over ``k`` letters."""
    if k < 2:
        raise InvalidInput("repetition threshold needs an alphabet of at least 2 letters")
    if k == 3:
        return Fraction(7, 4)
    if k == 4:
        return Fraction(7, 5)
    return Fraction(k, k - 1)
