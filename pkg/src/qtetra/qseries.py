"""q-Pochhammer symbols (p)_i with p = q^base, and the multinomial bracket.

Everything here is cached; caches only grow, so concurrent readers never see a
half-built entry (the list append is the publication point).
"""

from __future__ import annotations

import threading
from functools import lru_cache

from .qpoly import ONE, ZERO, LaurentPoly, QRat

__all__ = ["qfact", "qfact_ratio", "qbinom", "qtrinom", "qbracket", "QFactCache"]


class QFactCache:
    """Grow-only table of (q^base)_0, (q^base)_1, ..."""

    def __init__(self, base: int):
        if base < 1:
            raise ValueError("base exponent must be positive")
        self.base = base
        self.table: list[LaurentPoly] = [ONE]
        self._lock = threading.Lock()

    def __getitem__(self, i: int) -> LaurentPoly:
        if i < 0:
            raise ValueError(f"q-factorial index must be >= 0, got {i}")
        table = self.table
        if i < len(table):
            return table[i]
        with self._lock:
            while len(self.table) <= i:
                n = len(self.table)
                self.table.append(self.table[-1] * (ONE - LaurentPoly.monomial(self.base * n)))
        return self.table[i]


_CACHES: dict[int, QFactCache] = {}
_CACHES_LOCK = threading.Lock()


def _cache(base: int) -> QFactCache:
    cache = _CACHES.get(base)
    if cache is None:
        with _CACHES_LOCK:
            cache = _CACHES.setdefault(base, QFactCache(base))
    return cache


def qfact(i: int, base: int = 2) -> LaurentPoly:
    """(q^base)_i = prod_{j=1..i} (1 - q^(base*j))."""
    return _cache(base)[i]


@lru_cache(maxsize=None)
def qfact_ratio(hi: int, lo: int, base: int = 2) -> LaurentPoly:
    """(q^base)_hi / (q^base)_lo for hi >= lo >= 0, as a polynomial."""
    if lo < 0 or hi < lo:
        raise ValueError(f"need hi >= lo >= 0, got hi={hi}, lo={lo}")
    out = ONE
    for t in range(lo + 1, hi + 1):
        out = out * (ONE - LaurentPoly.monomial(base * t))
    return out


@lru_cache(maxsize=None)
def qbinom(n: int, k: int, base: int = 2) -> LaurentPoly:
    """Gaussian binomial in q^base; zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return ZERO
    return qfact_ratio(n, n - k, base).divexact(qfact(k, base))


@lru_cache(maxsize=None)
def qtrinom(n: int, a: int, b: int, base: int = 2) -> LaurentPoly:
    """(p)_n / ((p)_a (p)_b (p)_{n-a-b}); zero if any index is negative."""
    if a < 0 or b < 0 or n - a - b < 0:
        return ZERO
    return qbinom(n, a, base) * qbinom(n - a, b, base)


def qbracket(numers, denoms, base: int = 2) -> QRat:
    """prod (p)_{i} over numers / prod (p)_{j} over denoms; zero if any index < 0."""
    if any(i < 0 for i in numers) or any(j < 0 for j in denoms):
        return QRat(ZERO)
    num = ONE
    for i in numers:
        num = num * qfact(i, base)
    den = ONE
    for j in denoms:
        den = den * qfact(j, base)
    return QRat(num, den)
