"""Sparse vectors on tensor products of Fock spaces and the operators acting on them.

Slots are numbered from 1, as in the usual R_{123}, K_{1234} notation.  A
basis state is a tuple of occupation numbers; a vector maps states to
coefficients (``LaurentPoly`` in exact mode, ``TruncPoly`` mod q^N).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .kmat import comb_k, k_elem, k_slice
from .qpoly import ONE, ZERO, LaurentPoly, TruncPoly, trunc_reduce
from .rmat import comb_r, r_elem, r_slice, s_elem

__all__ = [
    "SparseVec",
    "SlotSignature",
    "SlotError",
    "apply_r",
    "apply_k",
    "osc_apply",
    "apply_osc_string",
    "INTERTWINING",
    "check_intertwining",
    "check_r_recursions",
    "ket",
    "parse_ket",
]

Q, Q2 = "q", "q2"


class SlotError(ValueError):
    """Operator applied to slots whose base or range does not fit it."""


# -- vectors ------------------------------------------------------------------

class SparseVec(Mapping):
    """Immutable map from occupation tuples to nonzero coefficients."""

    __slots__ = ("_data",)

    def __init__(self, data: Mapping[tuple, object] | None = None):
        self._data = {}
        if data:
            for state, coef in data.items():
                if coef:
                    self._data[tuple(state)] = coef

    @classmethod
    def _trusted(cls, data: dict) -> "SparseVec":
        v = cls.__new__(cls)
        v._data = data
        return v

    @classmethod
    def basis(cls, state: Sequence[int], coef=ONE) -> "SparseVec":
        if any(x < 0 for x in state):
            raise ValueError(f"negative occupation in {tuple(state)}")
        return cls({tuple(state): coef})

    def __getitem__(self, state):
        return self._data[tuple(state)]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, SparseVec):
            return self._data == other._data
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "SparseVec") -> "SparseVec":
        out = dict(self._data)
        for s, c in other._data.items():
            if s in out:
                out[s] = out[s] + c
            else:
                out[s] = c
        return SparseVec._trusted({s: c for s, c in out.items() if c})

    def __neg__(self) -> "SparseVec":
        return SparseVec._trusted({s: -c for s, c in self._data.items()})

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        return self + (-other)

    def scale(self, coef) -> "SparseVec":
        return SparseVec({s: c * coef for s, c in self._data.items()})

    def truncate(self, order: int) -> "SparseVec":
        """Reduce every coefficient mod q^order."""
        return SparseVec({s: trunc_reduce(c, order) for s, c in self._data.items()})

    @property
    def nslots(self) -> int | None:
        for s in self._data:
            return len(s)
        return None

    def single_state(self) -> tuple:
        """The lone basis state of a one-term vector."""
        if len(self._data) != 1:
            raise ValueError(f"vector has {len(self._data)} terms, not 1")
        return next(iter(self._data))

    def to_json(self) -> list[dict]:
        return [{"state": list(s), "coeff": c.to_json()} for s, c in sorted(self._data.items())]

    def __repr__(self):
        if len(self._data) > 6:
            return f"SparseVec(<{len(self._data)} terms>)"
        inner = ", ".join(f"|{ket(s)}>: {c}" for s, c in sorted(self._data.items()))
        return f"SparseVec({{{inner}}})"


def ket(state: Sequence[int]) -> str:
    """Digit-string rendering when every entry is < 10, comma list otherwise."""
    if all(0 <= x < 10 for x in state):
        return "".join(str(x) for x in state)
    return ",".join(str(x) for x in state)


def parse_ket(text: str) -> tuple[int, ...]:
    text = text.strip().strip("|>").replace(" ", "")
    if "," in text:
        vals = tuple(int(t) for t in text.split(","))
    elif text.isdigit():
        vals = tuple(int(ch) for ch in text)
    else:
        raise ValueError(f"cannot parse occupation state {text!r}")
    if any(v < 0 for v in vals):
        raise ValueError(f"negative occupation in {text!r}")
    return vals


# -- slot typing --------------------------------------------------------------

class SlotSignature(tuple):
    """Per-slot deformation base: "q" or "q2"."""

    def __new__(cls, bases: Iterable[str]):
        bases = tuple(bases)
        for b in bases:
            if b not in (Q, Q2):
                raise ValueError(f"slot base must be 'q' or 'q2', got {b!r}")
        return super().__new__(cls, bases)

    @classmethod
    def from_q2_slots(cls, n: int, q2_slots: Iterable[int]) -> "SlotSignature":
        q2 = set(q2_slots)
        return cls(Q2 if s in q2 else Q for s in range(1, n + 1))

    def require(self, slots: Sequence[int], expected: Sequence[str], what: str) -> None:
        for s, e in zip(slots, expected):
            if not 1 <= s <= len(self):
                raise SlotError(f"{what}: slot {s} outside 1..{len(self)}")
            if self[s - 1] != e:
                raise SlotError(f"{what}: slot {s} has base {self[s - 1]}, needs {e}")


R_BASES = (Q, Q, Q)
S_BASES = (Q2, Q2, Q2)
K_BASES = (Q2, Q, Q2, Q)


# -- element rows -------------------------------------------------------------

@lru_cache(maxsize=None)
def _r_row(variant: str, inp: tuple) -> tuple:
    elem = r_elem if variant == "R" else s_elem
    row = []
    for out in r_slice(inp):
        v = elem(inp, out)
        if v:
            row.append((out, v))
    return tuple(row)


@lru_cache(maxsize=None)
def _k_row(inp: tuple) -> tuple:
    row = []
    for out in k_slice(inp):
        v = k_elem(inp, out)
        if v:
            row.append((out, v))
    return tuple(row)


@lru_cache(maxsize=None)
def _trunc_row(kind: str, inp: tuple, order: int) -> tuple:
    full = _k_row(inp) if kind == "K" else _r_row(kind, inp)
    row = []
    for out, v in full:
        t = trunc_reduce(v, order)
        if t:
            row.append((out, t))
    return tuple(row)


def _row(kind: str, inp: tuple, trunc: int | None) -> tuple:
    if trunc is not None:
        return _trunc_row(kind, inp, trunc)
    return _k_row(inp) if kind == "K" else _r_row(kind, inp)


def _check_slots(v: SparseVec, slots: Sequence[int]) -> None:
    if len(set(slots)) != len(slots):
        raise SlotError(f"repeated slot in {tuple(slots)}")
    n = v.nslots
    if n is not None:
        for s in slots:
            if not 1 <= s <= n:
                raise SlotError(f"slot {s} outside 1..{n}")


def _apply(v: SparseVec, slots: Sequence[int], kind: str, mode: str,
           trunc: int | None) -> SparseVec:
    _check_slots(v, slots)
    idx = [s - 1 for s in slots]
    if mode == "comb":
        fn = comb_k if kind == "K" else comb_r
        out: dict = {}
        for state, coef in v.items():
            new = list(state)
            for pos, val in zip(idx, fn([state[p] for p in idx])):
                new[pos] = val
            out[tuple(new)] = coef
        return SparseVec._trusted(out)
    if mode != "quantum":
        raise ValueError(f"unknown mode {mode!r}")
    acc: dict = {}
    for state, coef in v.items():
        row = _row(kind, tuple(state[p] for p in idx), trunc)
        for outs, val in row:
            new = list(state)
            for pos, x in zip(idx, outs):
                new[pos] = x
            new = tuple(new)
            term = coef * val
            prev = acc.get(new)
            acc[new] = term if prev is None else prev + term
    return SparseVec._trusted({s: c for s, c in acc.items() if c})


def apply_r(v: SparseVec, slots: Sequence[int], variant: str = "R", mode: str = "quantum",
            trunc: int | None = None, signature: SlotSignature | None = None) -> SparseVec:
    """Apply R (or S = R at q -> q^2) to the slot triple ``slots``."""
    if variant not in ("R", "S"):
        raise ValueError(f"variant must be 'R' or 'S', got {variant!r}")
    if len(slots) != 3:
        raise SlotError(f"{variant} acts on 3 slots, got {tuple(slots)}")
    if signature is not None:
        signature.require(slots, R_BASES if variant == "R" else S_BASES, f"{variant}{tuple(slots)}")
    return _apply(v, slots, variant, mode, trunc)


def apply_k(v: SparseVec, slots: Sequence[int], orientation: str = "forward",
            mode: str = "quantum", trunc: int | None = None,
            signature: SlotSignature | None = None) -> SparseVec:
    """Apply K to the slot quadruple; "reversed" is the type-B K on the same slots."""
    if len(slots) != 4:
        raise SlotError(f"K acts on 4 slots, got {tuple(slots)}")
    if orientation == "reversed":
        slots = tuple(slots)[::-1]
    elif orientation != "forward":
        raise ValueError(f"orientation must be 'forward' or 'reversed', got {orientation!r}")
    if signature is not None:
        signature.require(slots, K_BASES, f"K{tuple(slots)}")
    return _apply(v, slots, "K", mode, trunc)


# -- q-oscillators ------------------------------------------------------------

def osc_apply(sym: str, base: str, m: int) -> tuple[int, LaurentPoly] | None:
    """Action of 1, a+, a-, k on |m> in F_q (base "q") or F_{q^2} (base "q2").

    Returns (m', coefficient), or None when the result vanishes.
    """
    if m < 0:
        raise ValueError("occupation must be >= 0")
    p = 1 if base == Q else 2 if base == Q2 else None
    if p is None:
        raise ValueError(f"unknown base {base!r}")
    if sym == "1":
        return m, ONE
    if sym == "k":
        return m, LaurentPoly.monomial(p * m)
    if sym == "a+":
        return m + 1, ONE
    if sym == "a-":
        if m == 0:
            return None
        return m - 1, ONE - LaurentPoly.monomial(2 * p * m)
    raise ValueError(f"unknown oscillator symbol {sym!r}")


def apply_osc_string(v: SparseVec, terms, bases: Sequence[str]) -> SparseVec:
    """Apply sum(coef * sym_1 (x) ... (x) sym_n) to ``v``."""
    acc: dict = {}
    for state, coef in v.items():
        for tcoef, syms in terms:
            new, val = [], coef * tcoef
            for sym, base, m in zip(syms, bases, state):
                hit = osc_apply(sym, base, m)
                if hit is None:
                    break
                new.append(hit[0])
                val = val * hit[1]
            else:
                key = tuple(new)
                acc[key] = acc[key] + val if key in acc else val
    return SparseVec._trusted({s: c for s, c in acc.items() if c})


# -- intertwining relations of K ---------------------------------------------

def _ops(*terms: str):
    """Parse strings like "-q2 K a- K k" into (coef, symbols) pairs.

    Upper-case A+, A-, K denote the q^2-oscillator on slots 1 and 3; they
    are normalized to the lower-case names since the slot base decides.
    """
    out = []
    for text in terms:
        toks = text.split()
        coef = ONE
        if len(toks) == 5:
            head = toks.pop(0)
            sign = -1 if head.startswith("-") else 1
            power = head.lstrip("+-")
            exp = 0 if power == "" else 1 if power == "q" else int(power[1:])
            coef = LaurentPoly.monomial(exp, sign)
        out.append((coef, tuple(t.replace("A", "a").replace("K", "k") for t in toks)))
    return tuple(out)


# (left operator, right operator): left . K == K . right
INTERTWINING = {
    (2, 2): (_ops("1 a- 1 a-", "-q 1 k A- k"),) * 2,
    (2, 3): (_ops("1 a- 1 k", "1 k A- a+"),
             _ops("A- a+ A- k", "A- k 1 a-", "-q2 K a- K k")),
    (2, 4): (_ops("1 k K a-"),
             _ops("A+ a- K k", "K a+ A- k", "K k 1 a-")),
    (2, 5): (_ops("1 k K k"),) * 2,
    (3, 2): (_ops("A- a+ A- k", "A- k 1 a-", "-q2 K a- K k"),
             _ops("1 a- 1 k", "1 k A- a+")),
    (3, 3): (_ops("A- a+ A- a+", "-q A- k 1 k", "-q2 K a- K a+"),) * 2,
    (3, 4): (_ops("A- a+ K a-", "K a- A+ a-", "-q K k 1 k"),
             _ops("A+ a- K a+", "K a+ A- a+", "-q K k 1 k")),
    (3, 5): (_ops("A- a+ K k", "K a- A+ k", "K k 1 a+"),
             _ops("1 k K a+")),
    (4, 2): (_ops("A+ a- K k", "K a+ A- k", "K k 1 a-"),
             _ops("1 k K a-")),
    (4, 3): (_ops("A+ a- K a+", "K a+ A- a+", "-q K k 1 k"),
             _ops("A- a+ K a-", "K a- A+ a-", "-q K k 1 k")),
    (4, 4): (_ops("A+ a- A+ a-", "-q A+ k 1 k", "-q2 K a+ K a-"),) * 2,
    (4, 5): (_ops("A+ a- A+ k", "A+ k 1 a+", "-q2 K a+ K k"),
             _ops("1 a+ 1 k", "1 k A+ a-")),
    (5, 2): (_ops("1 k K k"),) * 2,
    (5, 3): (_ops("1 k K a+"),
             _ops("A- a+ K k", "K a- A+ k", "K k 1 a+")),
    (5, 4): (_ops("1 a+ 1 k", "1 k A+ a-"),
             _ops("A+ a- A+ k", "A+ k 1 a+", "-q2 K a+ K k")),
    (5, 5): (_ops("1 a+ 1 a+", "-q 1 k A+ k"),) * 2,
}


def check_intertwining(rel: tuple[int, int], bound: int) -> dict:
    """Check (left) K = K (right) on every basis ket with entries <= bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rel = tuple(rel)
    if rel not in INTERTWINING:
        raise ValueError(f"no intertwining relation <{rel[0]}{rel[1]}>; need 2 <= r, s <= 5")
    left, right = INTERTWINING[rel]
    mismatches, checked = [], 0
    for state in product(range(bound + 1), repeat=4):
        v = SparseVec.basis(state)
        lhs = apply_osc_string(apply_k(v, (1, 2, 3, 4)), left, K_BASES)
        rhs = apply_k(apply_osc_string(v, right, K_BASES), (1, 2, 3, 4))
        checked += 1
        if lhs != rhs:
            diff = lhs - rhs
            mismatches.append({"in": list(state), "out": [list(s) for s in sorted(diff)]})
    return {"relation": f"<{rel[0]}{rel[1]}>", "bound": bound, "checked": checked,
            "mismatches": mismatches, "pass": not mismatches}


# -- recursions of R ----------------------------------------------------------

def _rr(i, j, k, a, b, c) -> LaurentPoly:
    if min(i, j, k, a, b, c) < 0:
        return ZERO
    return r_elem((i, j, k), (a, b, c))


def _om(e: int) -> LaurentPoly:
    return ONE - LaurentPoly.monomial(e)


R_RECURSIONS: dict[str, Callable] = {
    # lowers i; valid for i >= 1
    "t32": lambda i, j, k, a, b, c: (
        None if i < 1 else
        (_om(2 * c + 2) * _rr(i - 1, j, k, a, b - 1, c + 1)).shift(a - j)
        + _rr(i - 1, j, k, a - 1, b, c).shift(c - j)),
    # lowers j; valid for j >= 1
    "t33": lambda i, j, k, a, b, c: (
        None if j < 1 else
        _rr(i, j - 1, k, a - 1, b, c - 1) - _rr(i, j - 1, k, a, b - 1, c).shift(a + c + 1)),
    # (1 - q^{2b}) R = ..., no side condition
    "pr": lambda i, j, k, a, b, c: (
        _om(2 * i) * _om(2 * k) * _rr(i - 1, j, k - 1, a, b - 1, c)
        - (_om(2 * j) * _rr(i, j - 1, k, a, b - 1, c)).shift(i + k + 1)),
}


def check_r_recursions(bound: int) -> dict:
    """Check the three element recursions of R for all indices <= bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    results = {}
    for name, rhs_fn in R_RECURSIONS.items():
        checked, bad = 0, []
        for idx in product(range(bound + 1), repeat=6):
            rhs = rhs_fn(*idx)
            if rhs is None:
                continue
            lhs = _rr(*idx)
            if name == "pr":
                lhs = _om(2 * idx[4]) * lhs
            checked += 1
            if lhs != rhs:
                bad.append(list(idx))
        results[name] = {"checked": checked, "mismatches": bad, "pass": not bad}
    return {"bound": bound, "recursions": results,
            "pass": all(r["pass"] for r in results.values())}
