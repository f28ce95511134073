"""Longest-common-extension queries over a fixed word.

``LCE(w).forward(i, j)`` is the length of the longest common prefix of
``w[i:]`` and ``w[j:]``; ``backward(i, j)`` counts matching letters going
left from positions ``i - 1`` and ``j - 1``.  Both accept numpy index arrays
and answer in O(1) per pair after an O(n log^2 n) suffix array build.
"""

from __future__ import annotations

import numpy as np


def suffix_array(w: bytes) -> np.ndarray:
    """Suffix array by prefix doubling over integer ranks."""
    n = len(w)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.frombuffer(w, dtype=np.uint8).astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r, s = rank[order], second[order]
        fresh = np.empty(n, dtype=np.int64)
        fresh[0] = 0
        fresh[1:] = np.cumsum((r[1:] != r[:-1]) | (s[1:] != s[:-1]))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = fresh
        if fresh[-1] == n - 1:
            return order
        k *= 2


def lcp_array(w: bytes, sa: np.ndarray) -> np.ndarray:
    """Kasai: ``lcp[r]`` is the common prefix of suffixes ``sa[r-1]`` and ``sa[r]``."""
    n = len(w)
    rank = np.empty(n, dtype=np.int64)
    rank[sa] = np.arange(n)
    sa_list = sa.tolist()
    rank_list = rank.tolist()
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank_list[i]
        if r == 0:
            h = 0
            continue
        j = sa_list[r - 1]
        while i + h < n and j + h < n and w[i + h] == w[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


class _Extension:
    def __init__(self, w: bytes):
        self.n = len(w)
        sa = suffix_array(w)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[sa] = np.arange(self.n)
        lcp = lcp_array(w, sa)
        # Sparse table of range minima over lcp.
        self.table = [lcp]
        span = 1
        while 2 * span <= self.n:
            prev = self.table[-1]
            self.table.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2

    def query(self, i, j):
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        out = np.zeros(np.broadcast(i, j).shape, dtype=np.int64)
        valid = (i < self.n) & (j < self.n) & (i >= 0) & (j >= 0)
        same = valid & (i == j)
        valid &= i != j
        ii, jj = np.broadcast_to(i, out.shape)[valid], np.broadcast_to(j, out.shape)[valid]
        ri, rj = self.rank[ii], self.rank[jj]
        lo = np.minimum(ri, rj) + 1
        hi = np.maximum(ri, rj) + 1
        width = hi - lo
        level = np.zeros_like(width)
        nz = width > 1
        level[nz] = np.floor(np.log2(width[nz])).astype(np.int64)
        # log2 rounding guard
        level -= (1 << level) > width
        level += (1 << (level + 1)) <= width
        res = np.empty_like(lo)
        for lv in np.unique(level):
            sel = level == lv
            tab = self.table[lv]
            a, b = lo[sel], hi[sel] - (1 << lv)
            res[sel] = np.minimum(tab[a], tab[b])
        out[valid] = res
        out[same] = self.n - np.broadcast_to(i, out.shape)[same]
        return out


class LCE:
    """Forward and backward longest common extensions on ``w``."""

    def __init__(self, w: bytes):
        self.n = len(w)
        self._fwd = _Extension(w)
        self._bwd = _Extension(w[::-1])

    def forward(self, i, j):
        return self._fwd.query(i, j)

    def backward(self, i, j):
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        # w[i-1] sits at index n-i of the reversed word.
        return self._bwd.query(self.n - i, self.n - j)
