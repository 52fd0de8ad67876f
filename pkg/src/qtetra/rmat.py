"""Matrix elements of the 3D R and its relatives.

An element is addressed by an in-triple (i, j, k) and an out-triple (a, b, c);
R sends |i,j,k> to sum_{a,b,c} R^{abc}_{ijk} |a,b,c>.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

from .qpoly import ONE, ZERO, LaurentPoly
from .qseries import qbinom, qfact, qfact_ratio

__all__ = [
    "RIndex",
    "ParamExponentsR",
    "r_conserved",
    "r_elem",
    "r_elem_oracle",
    "s_elem",
    "comb_r",
    "r_slice",
    "r_param_exponents",
]


class RIndex(NamedTuple):
    i: int
    j: int
    k: int
    a: int
    b: int
    c: int

    @classmethod
    def of(cls, inp: Sequence[int], out: Sequence[int]) -> "RIndex":
        return cls(*inp, *out)

    @property
    def inp(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)

    @property
    def out(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


class ParamExponentsR(NamedTuple):
    e1: int
    e2: int
    eps: int
    sig: int


def _check_nonneg(*xs: int) -> None:
    for x in xs:
        if x < 0:
            raise ValueError(f"occupation numbers must be >= 0, got {xs}")


def r_conserved(inp: Sequence[int], out: Sequence[int]) -> bool:
    i, j, k = inp
    a, b, c = out
    return i + j == a + b and j + k == b + c


@lru_cache(maxsize=None)
def _r(i: int, j: int, k: int, a: int, b: int, c: int) -> LaurentPoly:
    if i + j != a + b or j + k != b + c:
        return ZERO
    total = ZERO
    # lambda + mu = b, with mu <= i and lambda <= j
    for lam in range(max(0, b - i), min(b, j) + 1):
        mu = b - lam
        exp = i * (c - j) + (k + 1) * lam + mu * (mu - k)
        term = qbinom(i, mu) * qbinom(j, lam) * qfact_ratio(c + mu, c)
        term = term.shift(exp)
        total = total - term if lam % 2 else total + term
    return total


def r_elem(inp: Sequence[int], out: Sequence[int]) -> LaurentPoly:
    """Parameter-free element R^{abc}_{ijk}; zero off the conservation slice."""
    _check_nonneg(*inp, *out)
    return _r(*inp, *out)


@lru_cache(maxsize=None)
def _p(m: int, x: int, y: int, z: int) -> LaurentPoly:
    # P_m(q^{2x}, q^{2y}, q^{2z}) from its defining three-term recursion
    if m == 0:
        return ONE
    left = (ONE - LaurentPoly.monomial(2 * x)) * (ONE - LaurentPoly.monomial(2 * z))
    left = left * _p(m - 1, x - 1, y, z - 1)
    right = (ONE - LaurentPoly.monomial(2 * y)).shift(2 - 2 * m + 2 * x + 2 * z)
    right = right * _p(m - 1, x, y - 1, z)
    return left - right


@lru_cache(maxsize=None)
def _r_oracle(i: int, j: int, k: int, a: int, b: int, c: int) -> LaurentPoly:
    if i + j != a + b or j + k != b + c:
        return ZERO
    return _p(b, i, j, k).shift((a - j) * (c - j)).divexact(qfact(b, 2))


def r_elem_oracle(inp: Sequence[int], out: Sequence[int]) -> LaurentPoly:
    """Same element via the P_m recursion; shares nothing with ``r_elem``."""
    _check_nonneg(*inp, *out)
    return _r_oracle(*inp, *out)


@lru_cache(maxsize=None)
def _s(i: int, j: int, k: int, a: int, b: int, c: int) -> LaurentPoly:
    return _r(i, j, k, a, b, c).subs_power(2)


def s_elem(inp: Sequence[int], out: Sequence[int]) -> LaurentPoly:
    """R with q replaced by q^2."""
    _check_nonneg(*inp, *out)
    return _s(*inp, *out)


def comb_r(state: Sequence[int]) -> tuple[int, int, int]:
    """The q = 0 bijection: (i, j, k) -> (j + (i-k)_+, min(i,k), j + (k-i)_+)."""
    i, j, k = state
    _check_nonneg(i, j, k)
    return (j + max(i - k, 0), min(i, k), j + max(k - i, 0))


def r_slice(inp: Sequence[int]) -> list[tuple[int, int, int]]:
    """All out-triples sharing the conserved charges of ``inp``."""
    i, j, k = inp
    s1, s2 = i + j, j + k
    return [(s1 - b, b, s2 - b) for b in range(min(s1, s2) + 1)]


def r_param_exponents(inp: Sequence[int], out: Sequence[int], gauge: str = "SL",
                      inverse: bool = False) -> ParamExponentsR:
    """Exponents of the gauge parameters multiplying R^{abc}_{ijk}.

    ``gauge`` is "SL" (mu_1, mu_2 only) or "Sp" (adds the sign factors
    epsilon and sigma).  ``inverse`` gives the exponents for R^{-1}.
    """
    if not r_conserved(inp, out):
        raise ValueError(f"conservation law violated for {tuple(inp)} -> {tuple(out)}")
    i, j, k = inp
    a, b, c = out
    e1, e2 = a - j + k, b - a - k
    if inverse:
        e1, e2 = e2, e1
    if gauge == "SL":
        return ParamExponentsR(e1, e2, 0, 0)
    if gauge == "Sp":
        eps = (b if inverse else j) % 2
        return ParamExponentsR(e1, e2, eps, (e1 + e2) % 2)
    raise ValueError(f"unknown gauge {gauge!r}")
