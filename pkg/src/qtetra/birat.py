"""Birational 3D R and K, unipotent matrix identities, and tropicalization.

The maps are written once against +, * and / so the same code runs over
sympy rational function fields (symbolic), ``fractions.Fraction`` (sampled)
and ``TropExpr`` (min-plus).
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Sequence

from sympy import ZZ
from sympy.polys.fields import FracElement, field

from .kmat import comb_k, k_conserved
from .rmat import comb_r, r_conserved

__all__ = [
    "MRat",
    "mrat_field",
    "birational_r",
    "birational_k",
    "abcdt",
    "TropExpr",
    "check_matrix_identities",
    "verify_birational_equations",
    "tropicalize_and_compare",
    "check_involutions",
    "K_TROP_IDENTIFICATION",
    "find_k_identification",
]

MRat = FracElement


def mrat_field(names: str | Sequence[str]):
    """Return (field, generators) for rational functions over ZZ in ``names``."""
    if not isinstance(names, str):
        names = ",".join(names)
    F, *gens = field(names, ZZ)
    return F, gens


# -- the maps ----------------------------------------------------------------

def birational_r(t: Sequence) -> tuple:
    """(c, b, a) -> (bc/(a+c), a+c, ab/(a+c))."""
    c, b, a = t
    s = a + c
    if s == 0:
        raise ZeroDivisionError("a + c vanishes")
    return (b * c / s, s, a * b / s)


def abcdt(a, b, c, d) -> tuple:
    """Solution (a~, b~, c~, d~) of the X/Y braid-type matrix equations."""
    A = a * b + a * d + c * d
    B = a * b * b + 2 * a * b * d + a * d * d + c * d * d
    if A == 0 or B == 0:
        raise ZeroDivisionError("A or B vanishes")
    return (b * c * d / A, A * A / B, B / A, a * b * b * c / B)


def birational_k(t: Sequence) -> tuple:
    """(d, c, b, a) -> (a~, b~, c~, d~)."""
    d, c, b, a = t
    return abcdt(a, b, c, d)


def _apply_to_slots(xs: list, slots: Sequence[int], fn: Callable) -> list:
    out = list(xs)
    for s, v in zip(slots, fn([xs[s - 1] for s in slots])):
        out[s - 1] = v
    return out


# products are written left to right; the rightmost factor acts first
_TE = [("R", (3, 5, 6)), ("R", (2, 4, 6)), ("R", (1, 4, 5)), ("R", (1, 2, 3))]
_RE = [("R", (4, 5, 6)), ("R", (4, 8, 9)), ("K", (3, 5, 7, 9)), ("R", (2, 6, 9)),
       ("R", (2, 5, 8)), ("K", (1, 6, 7, 8)), ("K", (1, 2, 3, 4))]
_EQS = {"te": (6, _TE), "re": (9, _RE)}


def _compose(xs: list, factors) -> list:
    for op, slots in reversed(factors):
        xs = _apply_to_slots(xs, slots, birational_r if op == "R" else birational_k)
    return xs


# -- matrices ------------------------------------------------------------------

def _identity(n: int, one, zero) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _matmul(*ms):
    out = ms[0]
    for m in ms[1:]:
        n = len(out)
        out = [[sum((out[i][k] * m[k][j] for k in range(n)), start=out[i][0] * 0)
                for j in range(n)] for i in range(n)]
    return out


def _G(n: int, i: int, x, one, zero):
    m = _identity(n, one, zero)
    m[i - 1][i] = x
    return m


def _X(i: int, z, one, zero):
    m = _identity(4, one, zero)
    if i == 1:
        m[0][1], m[2][3] = z, -z
    else:
        m[1][2] = 2 * z
    return m


def _Y(i: int, z, one, zero):
    m = _identity(5, one, zero)
    if i == 1:
        m[0][1], m[3][4] = z, -z
    else:
        m[1][2], m[1][3], m[2][3] = z, -z * z / 2, -z
    return m


def check_matrix_identities() -> dict:
    """Symbolic checks of the 3x3, Sp4 (4x4) and SO5 (5x5) identities."""
    F, (a, b, c, d) = mrat_field("a,b,c,d")
    one, zero = F.one, F.zero
    checks = {}
    at, bt, ct = birational_r((c, b, a))
    for i, j in ((1, 2), (2, 1)):
        lhs = _matmul(_G(3, i, a, one, zero), _G(3, j, b, one, zero), _G(3, i, c, one, zero))
        rhs = _matmul(_G(3, j, at, one, zero), _G(3, i, bt, one, zero), _G(3, j, ct, one, zero))
        checks[f"GGG({i},{j})"] = lhs == rhs
    # degenerate a = 0: (a~, b~, c~) = (b, c, 0)
    at0, bt0, ct0 = birational_r((c, b, zero))
    lhs = _matmul(_G(3, 2, b, one, zero), _G(3, 1, c, one, zero))
    rhs = _matmul(_G(3, 2, at0, one, zero), _G(3, 1, bt0, one, zero), _G(3, 2, ct0, one, zero))
    checks["GGG(1,2) at a=0"] = lhs == rhs and ct0 == 0
    tl = abcdt(a, b, c, d)
    lhs = _matmul(_X(2, a, one, zero), _X(1, b, one, zero), _X(2, c, one, zero), _X(1, d, one, zero))
    rhs = _matmul(_X(1, tl[0], one, zero), _X(2, tl[1], one, zero),
                  _X(1, tl[2], one, zero), _X(2, tl[3], one, zero))
    checks["Xeq"] = lhs == rhs
    lhs = _matmul(_Y(1, a, one, zero), _Y(2, b, one, zero), _Y(1, c, one, zero), _Y(2, d, one, zero))
    rhs = _matmul(_Y(2, tl[0], one, zero), _Y(1, tl[1], one, zero),
                  _Y(2, tl[2], one, zero), _Y(1, tl[3], one, zero))
    checks["Yeq"] = lhs == rhs
    return {"checks": checks, "pass": all(checks.values())}


def check_involutions() -> dict:
    """R o R and K o K reduce to the identity symbolically."""
    F, xs = mrat_field("x1,x2,x3,x4")
    r_ok = tuple(birational_r(birational_r(xs[:3]))) == tuple(xs[:3])
    k_ok = tuple(birational_k(birational_k(xs))) == tuple(xs)
    return {"checks": {"R": r_ok, "K": k_ok}, "pass": r_ok and k_ok}


# -- birational tetrahedron / reflection equations -----------------------------

def _rand_point(rng: random.Random, n: int, bound: int) -> list[Fraction]:
    return [Fraction(rng.randint(1, bound), rng.randint(1, bound)) for _ in range(n)]


def verify_birational_equations(mode: str = "te", strategy: str = "sampled",
                                samples: int = 32, seed: int = 0,
                                bound: int = 10 ** 6) -> dict:
    """Compare both sides of the birational tetrahedron ("te") or reflection ("re") equation."""
    if mode not in _EQS:
        raise ValueError(f"mode must be 'te' or 're', got {mode!r}")
    n, factors = _EQS[mode]
    start = time.perf_counter()
    if strategy == "symbolic":
        F, xs = mrat_field([f"x{k}" for k in range(1, n + 1)])
        lhs = _compose(list(xs), factors)
        rhs = _compose(list(xs), factors[::-1])
        ok = lhs == rhs
        return {"equation": mode, "strategy": strategy, "pass": ok,
                "elapsed_ms": round((time.perf_counter() - start) * 1000, 1)}
    if strategy != "sampled":
        raise ValueError(f"strategy must be 'symbolic' or 'sampled', got {strategy!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    points, failures = 0, []
    while points < samples:
        pt = _rand_point(rng, n, bound)
        try:
            lhs = _compose(list(pt), factors)
            rhs = _compose(list(pt), factors[::-1])
        except ZeroDivisionError:
            continue    # resample
        points += 1
        if lhs != rhs:
            failures.append([str(x) for x in pt])
    return {"equation": mode, "strategy": strategy, "seed": seed, "samples": points,
            "bound": bound, "failures": failures, "pass": not failures,
            "elapsed_ms": round((time.perf_counter() - start) * 1000, 1)}


# -- tropical semiring ----------------------------------------------------------

class TropExpr:
    """Min-plus expression: products become sums, sums become min.

    Built by running the birational formulas on ``TropExpr.var`` leaves;
    positive integer coefficients collapse to the additive constant 0.
    """

    __slots__ = ("kind", "args", "value")

    def __init__(self, kind: str, args=(), value=0):
        self.kind, self.args, self.value = kind, tuple(args), value

    @classmethod
    def var(cls, name: str) -> "TropExpr":
        return cls("var", value=name)

    @classmethod
    def const(cls, c: int) -> "TropExpr":
        return cls("const", value=c)

    @staticmethod
    def _lift(x) -> "TropExpr":
        if isinstance(x, TropExpr):
            return x
        if isinstance(x, int) and x > 0:
            return TropExpr.const(0)
        raise TypeError(f"only positive integer constants tropicalize, got {x!r}")

    # ordinary +  ->  min
    def __add__(self, other):
        return TropExpr("min", (self, self._lift(other)))

    __radd__ = __add__

    # ordinary *  ->  +
    def __mul__(self, other):
        return TropExpr("add", (self, self._lift(other)))

    __rmul__ = __mul__

    # ordinary /  ->  -
    def __truediv__(self, other):
        return TropExpr("sub", (self, self._lift(other)))

    def __eq__(self, other):
        # only used for the zero-denominator guard; a tropical value is never zero
        return False if isinstance(other, int) else NotImplemented

    __hash__ = object.__hash__

    def evaluate(self, env: dict) -> int:
        k = self.kind
        if k == "var":
            return env[self.value]
        if k == "const":
            return self.value
        vals = [a.evaluate(env) for a in self.args]
        if k == "add":
            return vals[0] + vals[1]
        if k == "sub":
            return vals[0] - vals[1]
        return min(vals)

    def __str__(self):
        k = self.kind
        if k in ("var", "const"):
            return str(self.value)
        a, b = (str(x) for x in self.args)
        return {"add": f"({a} + {b})", "sub": f"({a} - {b})", "min": f"min({a}, {b})"}[k]


def _trop_map(fn: Callable, names: Sequence[str]) -> list[TropExpr]:
    return list(fn([TropExpr.var(n) for n in names]))


# Identification for K: feed (c,m,d,n) into the slots listed in K_IN (positions of
# the birational argument tuple (d,c,b,a)) and read (c',m',d',n') from output
# positions K_OUT.  Found by find_k_identification and frozen here.
K_TROP_IDENTIFICATION = {"in": (0, 1, 2, 3), "out": (0, 1, 2, 3)}


def _trop_k_exprs():
    return _trop_map(birational_k, ["x0", "x1", "x2", "x3"])


def _trop_k_apply(exprs, ident, state):
    env = {f"x{ident['in'][k]}": state[k] for k in range(4)}
    vals = [e.evaluate(env) for e in exprs]
    return tuple(vals[ident["out"][k]] for k in range(4))


def find_k_identification(bound: int = 3) -> list[dict]:
    """All slot permutations under which tropical K equals comb_k on the grid."""
    exprs = _trop_k_exprs()
    grid = list(product(range(bound + 1), repeat=4))
    found = []
    for pin in permutations(range(4)):
        for pout in permutations(range(4)):
            ident = {"in": pin, "out": pout}
            if all(_trop_k_apply(exprs, ident, s) == comb_k(s) for s in grid):
                found.append(ident)
    return found


def tropicalize_and_compare(which: str = "R", bound: int = 6) -> dict:
    """Compare the min-plus image of the birational map with the combinatorial one."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    start = time.perf_counter()
    mismatches, checked = [], 0
    if which == "R":
        exprs = _trop_map(birational_r, ["x", "y", "z"])
        for s in product(range(bound + 1), repeat=3):
            env = dict(zip("xyz", s))
            img = tuple(e.evaluate(env) for e in exprs)
            checked += 1
            if img != comb_r(s) or not r_conserved(s, img):
                mismatches.append({"state": list(s), "tropical": list(img)})
        ident = {"in": (0, 1, 2), "out": (0, 1, 2)}
    elif which == "K":
        exprs = _trop_k_exprs()
        ident = K_TROP_IDENTIFICATION
        for s in product(range(bound + 1), repeat=4):
            img = _trop_k_apply(exprs, ident, s)
            checked += 1
            if img != comb_k(s) or not k_conserved(s, img):
                mismatches.append({"state": list(s), "tropical": list(img)})
    else:
        raise ValueError(f"map must be 'R' or 'K', got {which!r}")
    return {"map": which, "bound": bound, "checked": checked,
            "identification": {k: list(v) for k, v in ident.items()},
            "formulas": [str(e) for e in exprs],
            "mismatches": mismatches[:20], "pass": not mismatches,
            "elapsed_ms": round((time.perf_counter() - start) * 1000, 1)}
