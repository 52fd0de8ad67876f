import threading

import pytest

from qtetra.qpoly import ONE, LaurentPoly
from qtetra.qseries import QFactCache, qbinom, qbracket, qfact, qfact_ratio, qtrinom


def test_qfact_examples():
    assert qfact(0, 2) == ONE
    assert qfact(2, 2).terms == {0: 1, 2: -1, 4: -1, 6: 1}
    assert qfact(1, 4).terms == {0: 1, 4: -1}
    with pytest.raises(ValueError):
        qfact(-1)


def test_qbracket_examples():
    assert qbracket([1], [1]).as_poly() == ONE
    r = qbracket([2], [1, 1])
    assert r.is_poly() and r.as_poly().terms == {0: 1, 2: 1}
    assert qbracket([1], [-1, 2]).is_zero()


def test_qbinomials_are_polynomials():
    for m in range(13):
        for r in range(m + 1):
            b = qbracket([m], [r, m - r])
            assert b.is_poly()
            assert b.as_poly() == qbinom(m, r)


def test_qfact_at_zero_is_one():
    for base in (2, 4):
        for i in range(15):
            assert qfact(i, base).at_zero() == 1


def test_helpers():
    assert qfact_ratio(5, 3, 4) * qfact(3, 4) == qfact(5, 4)
    assert qbinom(3, 5).is_zero() and qbinom(4, -1).is_zero()
    assert qtrinom(4, 1, 1) * qfact(1) * qfact(1) * qfact(2) == qfact(4)
    assert qtrinom(3, 2, 2).is_zero()


def test_cache_concurrent_growth():
    cache = QFactCache(3)
    out = {}

    def work(k):
        out[k] = cache[20 + k % 3]

    ts = [threading.Thread(target=work, args=(k,)) for k in range(12)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    expect = ONE
    for j in range(1, 23):
        expect = expect * (ONE - LaurentPoly.monomial(3 * j))
        if j >= 20:
            assert cache[j] == expect
    assert len(cache.table) == 23
