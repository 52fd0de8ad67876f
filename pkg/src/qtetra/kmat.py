"""Matrix elements of the 3D K.

K acts on F_{q^2} (x) F_q (x) F_{q^2} (x) F_q and sends |a,i,b,j> to
sum_{c,m,d,n} K^{cmdn}_{aibj} |c,m,d,n>.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

from .qpoly import ONE, ZERO, LaurentPoly
from .qseries import qbinom, qfact, qfact_ratio, qtrinom

__all__ = [
    "KIndex",
    "ParamExponentsK",
    "KernelError",
    "k_conserved",
    "k_elem",
    "k_elem_oracle",
    "k_kernel",
    "kb_elem",
    "comb_k",
    "k_slice",
    "k_param_exponents",
]


class KernelError(ArithmeticError):
    """A K element failed to clear its denominator (an implementation bug)."""


class KIndex(NamedTuple):
    a: int
    i: int
    b: int
    j: int
    c: int
    m: int
    d: int
    n: int

    @classmethod
    def of(cls, inp: Sequence[int], out: Sequence[int]) -> "KIndex":
        return cls(*inp, *out)

    @property
    def inp(self) -> tuple[int, int, int, int]:
        return (self.a, self.i, self.b, self.j)

    @property
    def out(self) -> tuple[int, int, int, int]:
        return (self.c, self.m, self.d, self.n)


class ParamExponentsK(NamedTuple):
    eps: int
    e2: int
    e3: int
    rho: int


def _check_nonneg(*xs: int) -> None:
    for x in xs:
        if x < 0:
            raise ValueError(f"occupation numbers must be >= 0, got {xs}")


def k_conserved(inp: Sequence[int], out: Sequence[int]) -> bool:
    a, i, b, j = inp
    c, m, d, n = out
    return c + m + d == a + i + b and d + n - c == b + j - a


@lru_cache(maxsize=None)
def k_kernel(a: int, i: int, j: int, c: int, m: int, n: int) -> LaurentPoly:
    """The b = d = 0 element K^{c m 0 n}_{a i 0 j}."""
    if c + m != a + i or n - c != j - a:
        return ZERO
    if min(a, i, j, c, m, n) < 0:
        return ZERO
    total = ZERO
    for lam in range(max(0, m - i), min(j, m) + 1):
        exp = (a + c + 1) * (m + j - 2 * lam) + m - j
        term = qfact_ratio(c + lam, c, 4) * qbinom(j, lam) * qbinom(i, m - lam)
        term = term.shift(exp)
        total = total - term if (m + lam) % 2 else total + term
    return total


@lru_cache(maxsize=None)
def _k(a: int, i: int, b: int, j: int, c: int, m: int, d: int, n: int) -> LaurentPoly:
    if c + m + d != a + i + b or d + n - c != b + j - a:
        return ZERO
    # Each summand is put over the common denominator
    # (q^4)_c (q^4)_d (q^2)_m (q^2)_n; the final division must be exact.
    total = ZERO
    for alpha in range(min(b, m, n) + 1):
        for beta in range(min(b - alpha, d) + 1):
            ii = i + b - alpha - beta
            jj = j + b - alpha - beta
            base = (qtrinom(b, alpha, beta) * qfact(ii) * qfact(jj)
                    * qfact_ratio(m, m - alpha) * qfact_ratio(n, n - alpha)
                    * qfact_ratio(d, d - beta, 4))
            for gamma in range(d - beta + 1):
                s = alpha + beta + gamma
                kern = k_kernel(c, m + d - s, n + d - s, a, i + b - s, j + b - s)
                if kern.is_zero():
                    continue
                phi = (alpha * (alpha + 2 * d - 2 * beta - 1)
                       + (2 * beta - d) * (m + n + d)
                       + gamma * (gamma - 1) - b * (i + j + b))
                term = (base * qbinom(d - beta, gamma) * kern).shift(phi)
                total = total - term if (alpha + gamma) % 2 else total + term
    total = total * qfact(a, 4)
    den = qfact(c, 4) * qfact(d, 4) * qfact(m) * qfact(n)
    return _clear(total, den, (a, i, b, j, c, m, d, n))


def _clear(num: LaurentPoly, den: LaurentPoly, idx) -> LaurentPoly:
    try:
        return num.divexact(den)
    except ArithmeticError as exc:
        raise KernelError(f"K element {idx} is not a Laurent polynomial") from exc


def k_elem(inp: Sequence[int], out: Sequence[int]) -> LaurentPoly:
    """Parameter-free element K^{cmdn}_{aibj}."""
    _check_nonneg(*inp, *out)
    return _k(*inp, *out)


def kb_elem(inp: Sequence[int], out: Sequence[int]) -> LaurentPoly:
    """Type-B K: the element of K with both index quadruples reversed."""
    return k_elem(tuple(inp)[::-1], tuple(out)[::-1])


# -- independent recursive oracle -------------------------------------------

def _qm(e: int) -> LaurentPoly:
    return LaurentPoly.monomial(e)


def _one_minus(e: int) -> LaurentPoly:
    return ONE - LaurentPoly.monomial(e)


@lru_cache(maxsize=None)
def _ko(a: int, i: int, b: int, j: int, c: int, m: int, d: int, n: int) -> LaurentPoly:
    if min(a, i, b, j, c, m, d, n) < 0:
        return ZERO
    if c + m + d != a + i + b or d + n - c != b + j - a:
        return ZERO
    if b >= 1:
        # lower b by one; uses the b-1 elements with shifted i, j, m, n, d
        bb = b - 1
        acc = (-_ko(a, i, bb, j, c, m - 1, d, n - 1)
               + _ko(a, i + 1, bb, j + 1, c, m, d, n)
               + _ko(a, i, bb, j, c, m, d - 1, n).shift(m + n + 1))
        return acc.shift(-i - j - 1)
    if d >= 1:
        acc = (-(_one_minus(2 * i) * _one_minus(2 * j)) * _ko(a, i - 1, 0, j - 1, c, m, d - 1, n)
               + _one_minus(2 * m + 2) * _one_minus(2 * n + 2) * _ko(a, i, 0, j, c, m + 1, d - 1, n + 1))
        return acc.shift(-m - n - 1).divexact(_one_minus(4 * d))
    if n >= 1:
        acc = (_one_minus(2 * j) * _ko(a, i, 0, j - 1, c, m, 0, n - 1)).shift(2 * a + i - m)
        acc = acc + (_one_minus(2 * i) * _ko(a + 1, i - 1, 0, j, c, m, 0, n - 1)).shift(j - m)
        return acc.divexact(_one_minus(2 * n))
    if j >= 1:
        return (_ko(a, i, 0, j - 1, c, m, 0, n - 1).shift(2 * c - i + m)
                + (_one_minus(4 * c + 4) * _ko(a, i, 0, j - 1, c + 1, m - 1, 0, n)).shift(n - i))
    # n = j = d = b = 0 with conservation forces c = a, m = i
    val = _qm(2 * (a + 1) * i)
    return -val if i % 2 else val


def k_elem_oracle(inp: Sequence[int], out: Sequence[int]) -> LaurentPoly:
    """K element by recursive descent b -> 0, d -> 0, then n, j -> 0."""
    _check_nonneg(*inp, *out)
    return _ko(*inp, *out)


# -- combinatorial K --------------------------------------------------------

def comb_k(state: Sequence[int]) -> tuple[int, int, int, int]:
    """The q = 0 bijection on (c, m, d, n)."""
    c, m, d, n = state
    _check_nonneg(c, m, d, n)
    x = max(d - c + max(n - m, 0), 0)
    dd = min(c, d + x)
    return (x + c + m - n, d - x + n - dd, dd, m + max(d + x - c, 0))


def k_slice(inp: Sequence[int]) -> list[tuple[int, int, int, int]]:
    """All out-quadruples sharing the conserved charges of ``inp``."""
    a, i, b, j = inp
    s1, s2 = a + i + b, b + j - a
    out = []
    for c in range(s1 + 1):
        for d in range(s1 - c + 1):
            m = s1 - c - d
            n = s2 + c - d
            if n >= 0:
                out.append((c, m, d, n))
    return out


def k_param_exponents(inp: Sequence[int], out: Sequence[int]) -> ParamExponentsK:
    """Exponents of epsilon, mu_2, mu_3 and rho multiplying K^{cmdn}_{aibj}."""
    if not k_conserved(inp, out):
        raise ValueError(f"conservation law violated for {tuple(inp)} -> {tuple(out)}")
    a, i, b, j = inp
    c, m, d, n = out
    return ParamExponentsK((m + j) % 2, 2 * d - 2 * b, m - i, (m - i) % 2)
