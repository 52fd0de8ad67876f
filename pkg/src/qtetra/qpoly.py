"""Exact Laurent polynomials in q, their fractions, and power series mod q^N.

``LaurentPoly`` is stored as ``q**shift * P(q)`` with ``P`` an integer
polynomial whose constant term is nonzero (or ``P == 0`` and ``shift == 0``).
Integer polynomial arithmetic is delegated to FLINT's ``fmpz_poly``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from flint import fmpz_poly

__all__ = [
    "LaurentPoly",
    "QRat",
    "TruncPoly",
    "lp_arith",
    "qrat_reduce",
    "trunc_reduce",
    "q",
]


def _normalize(poly: fmpz_poly, shift: int) -> tuple[fmpz_poly, int]:
    if poly[0] != 0:
        return poly, shift
    if poly.is_zero():
        return poly, 0
    low = 1
    while poly[low] == 0:
        low += 1
    if low:
        poly = poly.right_shift(low)
    return poly, shift + low


class LaurentPoly:
    """Sparse-looking, immutable Laurent polynomial with integer coefficients."""

    __slots__ = ("_poly", "_shift", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        if not terms:
            self._poly, self._shift = fmpz_poly([]), 0
        else:
            items = {int(e): int(c) for e, c in terms.items() if c}
            if not items:
                self._poly, self._shift = fmpz_poly([]), 0
            else:
                lo = min(items)
                dense = [0] * (max(items) - lo + 1)
                for e, c in items.items():
                    dense[e - lo] = c
                self._poly, self._shift = fmpz_poly(dense), lo
        self._hash = None

    @classmethod
    def _wrap(cls, poly: fmpz_poly, shift: int = 0) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._poly, obj._shift = _normalize(poly, shift)
        obj._hash = None
        return obj

    @classmethod
    def _raw(cls, poly: fmpz_poly, shift: int) -> "LaurentPoly":
        # caller guarantees poly is already normalized
        obj = cls.__new__(cls)
        obj._poly, obj._shift, obj._hash = poly, shift, None
        return obj

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], shift: int = 0) -> "LaurentPoly":
        """Build ``sum(c_k q^(shift+k))`` from a dense coefficient list."""
        return cls._wrap(fmpz_poly(list(coeffs)), shift)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        if coeff == 0:
            return ZERO
        return cls._wrap(fmpz_poly([coeff]), exp)

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, c)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """Map exponent -> nonzero coefficient."""
        s = self._shift
        return {s + k: int(c) for k, c in enumerate(self._poly.coeffs()) if c != 0}

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def __bool__(self) -> bool:
        return not self._poly.is_zero()

    @property
    def min_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no lowest exponent")
        return self._shift

    @property
    def max_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no highest exponent")
        return self._shift + self._poly.degree()

    def is_polynomial(self) -> bool:
        return self.is_zero() or self._shift >= 0

    def is_one(self) -> bool:
        return self._shift == 0 and self._poly.is_one()

    def num_terms(self) -> int:
        return sum(1 for c in self._poly.coeffs() if c != 0)

    def coeff(self, exp: int) -> int:
        k = exp - self._shift
        if k < 0 or self.is_zero() or k > self._poly.degree():
            return 0
        return int(self._poly.coeffs()[k])

    def at_zero(self) -> int:
        """Value at q = 0; requires no negative exponents."""
        if self.is_zero():
            return 0
        if self._shift < 0:
            raise ValueError(f"{self} has negative exponents; q=0 is a pole")
        return int(self._poly.coeffs()[0]) if self._shift == 0 else 0

    def lowest_parity(self) -> int | None:
        """Common parity of all exponents, or None if mixed (zero -> None)."""
        if self.is_zero():
            return None
        parities = {e % 2 for e in self.terms}
        return parities.pop() if len(parities) == 1 else None

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b = self, other
        if a._shift > b._shift:
            a, b = b, a
        return LaurentPoly._wrap(a._poly + b._poly.left_shift(b._shift - a._shift), a._shift)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap(-self._poly, self._shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly._wrap(self._poly * other, self._shift)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self._poly.is_zero() or other._poly.is_zero():
            return ZERO
        # constant terms are nonzero, so the product needs no renormalization
        return LaurentPoly._raw(self._poly * other._poly, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        return LaurentPoly._wrap(self._poly ** n, self._shift * n)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q**k."""
        if self.is_zero():
            return self
        return LaurentPoly._raw(self._poly, self._shift + k)

    def subs_power(self, k: int) -> "LaurentPoly":
        """Substitute q -> q**k for k >= 1."""
        if k < 1:
            raise ValueError("substitution power must be positive")
        if self.is_zero() or k == 1:
            return self
        return LaurentPoly._wrap(self._poly.inflate(k), self._shift * k)

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient in Z[q, 1/q]; raises ArithmeticError if it does not exist."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        quo, rem = divmod(self._poly, other._poly)
        if not rem.is_zero() or quo * other._poly != self._poly:
            raise ArithmeticError(f"{other} does not divide {self}")
        return LaurentPoly._wrap(quo, self._shift - other._shift)

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._shift, tuple(int(c) for c in self._poly.coeffs())))
        return self._hash

    def __reduce__(self):
        return (LaurentPoly.from_coeffs, ([int(c) for c in self._poly.coeffs()], self._shift))

    # -- rendering --------------------------------------------------------

    def to_json(self) -> list[list]:
        """Sorted ``[[exponent, "coefficient"], ...]``."""
        return [[e, str(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in data})

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                qe = "q" if e == 1 else f"q^{e}"
                body = qe if mag == 1 else f"{mag}*{qe}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"

    @property
    def flint_poly(self) -> fmpz_poly:
        return self._poly

    @property
    def shift_exp(self) -> int:
        return self._shift


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
q = LaurentPoly.monomial(1)
LaurentPoly.ZERO = ZERO
LaurentPoly.ONE = ONE


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


class QRat:
    """Reduced fraction num/den of Laurent polynomials.

    Normal form: den has lowest exponent 0, positive leading coefficient and
    gcd(num, den) is a unit, so equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = ONE
        if isinstance(num, int):
            num = LaurentPoly.constant(num)
        if isinstance(den, int):
            den = LaurentPoly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("QRat with zero denominator")
        self.num, self.den = self._reduce(num, den)

    @staticmethod
    def _reduce(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        if num.is_zero():
            return ZERO, ONE
        shift = num._shift - den._shift
        n, d = num._poly, den._poly
        g = n.gcd(d)
        if not g.is_one():
            n, d = n // g, d // g
        if d.leading_coefficient() < 0:
            n, d = -n, -d
        return LaurentPoly._wrap(n, shift), LaurentPoly._wrap(d, 0)

    def is_poly(self) -> bool:
        return self.den.is_one()

    def as_poly(self) -> LaurentPoly:
        if not self.den.is_one():
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @staticmethod
    def _coerce(other):
        if isinstance(other, QRat):
            return other
        if isinstance(other, (LaurentPoly, int)):
            return QRat(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = QRat.__new__(QRat)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return QRat(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.is_one():
            return f"QRat({self.num})"
        return f"QRat(({self.num}) / ({self.den}))"


def qrat_reduce(num: LaurentPoly, den: LaurentPoly) -> QRat:
    return QRat(num, den)


class TruncPoly:
    """Power series in q modulo q**order with integer coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[int] = ()):
        if order < 1:
            raise ValueError("truncation order must be positive")
        cs = list(coeffs)[:order]
        cs += [0] * (order - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def from_terms(cls, order: int, terms: Mapping[int, int]) -> "TruncPoly":
        cs = [0] * order
        for e, c in terms.items():
            if e < 0:
                raise ValueError(f"negative exponent {e} in truncated mode")
            if e < order:
                cs[e] += c
        return cls(order, cs)

    @property
    def terms(self) -> dict[int, int]:
        return {e: c for e, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def _check(self, other: "TruncPoly"):
        if not isinstance(other, TruncPoly):
            raise TypeError(f"cannot mix TruncPoly with {type(other).__name__}")
        if other.order != self.order:
            raise ValueError("truncation orders differ")

    def __add__(self, other):
        self._check(other)
        return TruncPoly(self.order, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return TruncPoly(self.order, [x - y for x, y in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncPoly(self.order, [-x for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncPoly(self.order, [x * other for x in self.coeffs])
        self._check(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return TruncPoly(n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def to_json(self) -> list[list]:
        return [[e, str(c)] for e, c in sorted(self.terms.items())]

    def __repr__(self):
        return f"TruncPoly({LaurentPoly(self.terms)} mod q^{self.order})"


def trunc_reduce(p: LaurentPoly, order: int) -> TruncPoly:
    """Reduce a polynomial (no negative exponents) modulo q**order."""
    if not p.is_zero() and p.min_exp < 0:
        raise ValueError(f"{p} has negative exponents; cannot truncate")
    return TruncPoly.from_terms(order, p.terms)
