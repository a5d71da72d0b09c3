"""Exact arithmetic in the rational function field Q(q).

Two value types live here:

``LaurentPoly``
    an element of Q[q, q^-1], stored as ``q**shift * p(q)`` with ``p`` a
    flint ``fmpq_poly`` whose constant term is nonzero.

``Scalar``
    an element of Q(q) in canonical form ``q**v * num(q) / den(q)`` where
    ``num`` and ``den`` are coprime polynomials with nonzero constant terms and
    ``den`` is monic.  Two scalars are equal iff their stored triples are equal,
    so ``==`` and ``hash`` are cheap and exact.

The q-numbers used throughout the package are balanced: ``[n]_x`` is
``(x^n - x^-n) / (x - x^-1)`` with ``x = q**d``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import flint

__all__ = [
    "LaurentPoly",
    "Scalar",
    "Q",
    "ONE",
    "ZERO",
    "as_scalar",
    "expq_coeff",
    "q_factorial",
    "q_int",
    "qpow",
]

_P = flint.fmpq_poly
_ZERO_POLY = _P([])
_ONE_POLY = _P([1])


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, Rational):
        return flint.fmpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


def _fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _valuation(p) -> int:
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    raise ValueError("valuation of the zero polynomial")


def _reverse(p):
    return _P(list(reversed(p.coeffs())))


def _render_poly(terms: list[tuple[int, Fraction]]) -> str:
    """Render ``[(exponent, coeff), ...]`` (descending) as ``2*q[3] - q[-1] + 1``."""
    if not terms:
        return "0"
    out = []
    for pos, (e, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if e == 0:
            body = str(a)
        elif a == 1:
            body = f"q[{e}]"
        else:
            body = f"{a}*q[{e}]"
        if pos == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


class LaurentPoly:
    """Element of Q[q, q^-1]; immutable."""

    __slots__ = ("_shift", "_poly")

    def __init__(self, coefficients: dict[int, object] | None = None):
        coefficients = {e: c for e, c in (coefficients or {}).items() if c != 0}
        if not coefficients:
            self._shift, self._poly = 0, _ZERO_POLY
            return
        lo = min(coefficients)
        hi = max(coefficients)
        coeffs = [flint.fmpq(0)] * (hi - lo + 1)
        for e, c in coefficients.items():
            coeffs[e - lo] = _to_fmpq(c)
        self._shift, self._poly = lo, _P(coeffs)

    @classmethod
    def _raw(cls, shift: int, poly) -> LaurentPoly:
        obj = cls.__new__(cls)
        if poly.is_zero():
            obj._shift, obj._poly = 0, _ZERO_POLY
            return obj
        v = _valuation(poly)
        if v:
            poly = poly.right_shift(v)
        obj._shift, obj._poly = shift + v, poly
        return obj

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {
            self._shift + k: _fraction(c)
            for k, c in enumerate(self._poly.coeffs())
            if c != 0
        }

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    @property
    def low(self) -> int:
        return self._shift

    @property
    def high(self) -> int:
        return self._shift + self._poly.degree()

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._shift, other._shift)
        p = self._poly.left_shift(self._shift - lo) + other._poly.left_shift(other._shift - lo)
        return LaurentPoly._raw(lo, p)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self._shift, -self._poly)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly._raw(self._shift + other._shift, self._poly * other._poly)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._shift, tuple(self._poly.coeffs())))

    def render(self) -> str:
        terms = sorted(self.coefficients.items(), reverse=True)
        return _render_poly(terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()!r})"


class Scalar:
    """Element of Q(q) in canonical form; immutable and hashable."""

    __slots__ = ("_v", "_num", "_den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self._v, self._num, self._den = value._v, value._num, value._den
        elif isinstance(value, LaurentPoly):
            self._v, self._num, self._den = value._shift, value._poly, _ONE_POLY
        else:
            c = _to_fmpq(value)
            self._v, self._num, self._den = 0, (_P([c]) if c != 0 else _ZERO_POLY), _ONE_POLY
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def _make(cls, v: int, num, den) -> Scalar:
        obj = cls.__new__(cls)
        obj._hash = None
        if num.is_zero():
            obj._v, obj._num, obj._den = 0, _ZERO_POLY, _ONE_POLY
            return obj
        if not den.is_one():
            if den.degree() > 0:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        w = _valuation(num)
        if w:
            num = num.right_shift(w)
            v += w
        obj._v, obj._num, obj._den = v, num, den
        return obj

    @classmethod
    def fraction(cls, num: LaurentPoly, den: LaurentPoly) -> Scalar:
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return ZERO
        return cls._make(num._shift - den._shift, num._poly, den._poly)

    # -- views ----------------------------------------------------------
    @property
    def numerator(self) -> LaurentPoly:
        return LaurentPoly._raw(self._v, self._num)

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly._raw(0, self._den)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.is_one()

    def is_one(self) -> bool:
        return self._v == 0 and self._den.is_one() and self._num.is_one()

    def monomial(self) -> tuple[Fraction, int] | None:
        """``(c, n)`` if the scalar equals ``c * q**n``, else ``None``."""
        if self._den.is_one() and self._num.degree() == 0:
            return _fraction(self._num[0]), self._v
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        if self._num.is_zero():
            return other
        if other._num.is_zero():
            return self
        v = min(self._v, other._v)
        a = self._num.left_shift(self._v - v) if self._v != v else self._num
        b = other._num.left_shift(other._v - v) if other._v != v else other._num
        if self._den == other._den:
            return Scalar._make(v, a + b, self._den)
        return Scalar._make(v, a * other._den + b * self._den, self._den * other._den)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        obj = Scalar.__new__(Scalar)
        obj._hash = None
        obj._v, obj._num, obj._den = self._v, -self._num, self._den
        return obj

    def __sub__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        return as_scalar(other) - self

    def __mul__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                other = as_scalar(other)
            else:
                return NotImplemented
        if self._num.is_zero() or other._num.is_zero():
            return ZERO
        if self._den.is_one() and other._den.is_one():
            obj = Scalar.__new__(Scalar)
            obj._hash = None
            obj._v, obj._num, obj._den = self._v + other._v, self._num * other._num, _ONE_POLY
            return obj
        return Scalar._make(self._v + other._v, self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self._num.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(q)")
        obj = Scalar.__new__(Scalar)
        obj._hash = None
        num, den = self._den, self._num
        lead = den.leading_coefficient()
        obj._v, obj._num, obj._den = -self._v, num / lead, den / lead
        return obj

    def __truediv__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> Scalar:
        return as_scalar(other) * self.inverse()

    def __pow__(self, n: int) -> Scalar:
        if n < 0:
            return self.inverse() ** (-n)
        if self._den.is_one() and self._num.degree() == 0:
            return Scalar._make(self._v * n, self._num ** n, _ONE_POLY)
        return Scalar._make(self._v * n, self._num ** n, self._den ** n)

    def bar(self) -> Scalar:
        """Image under the field automorphism q -> q^-1."""
        if self._num.is_zero():
            return self
        v = -self._v - self._num.degree() + self._den.degree()
        return Scalar._make(v, _reverse(self._num), _reverse(self._den))

    # -- comparison -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                other = as_scalar(other)
            else:
                return NotImplemented
        return self._v == other._v and self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._v, tuple(self._num.coeffs()), tuple(self._den.coeffs())))
        return self._hash

    def __bool__(self) -> bool:
        return not self._num.is_zero()

    # -- rendering ------------------------------------------------------
    def render(self) -> str:
        """Stable textual form ``(num)/(den)`` with exponents in brackets."""
        return f"({self.numerator.render()})/({self.denominator.render()})"

    def __str__(self) -> str:
        if self._den.is_one():
            return self.numerator.render()
        return self.render()

    def __repr__(self) -> str:
        return f"Scalar({self.render()!r})"


ZERO = Scalar(0)
ONE = Scalar(1)


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar(x)


@lru_cache(maxsize=None)
def qpow(n: int) -> Scalar:
    """``q**n`` for any integer ``n``."""
    return Scalar._make(n, _ONE_POLY, _ONE_POLY)


Q = qpow(1)


@lru_cache(maxsize=None)
def q_int(n: int, d: int = 1) -> Scalar:
    """Balanced q-integer ``[n]_{q^d}``."""
    if n < 0:
        raise ValueError("q_int needs n >= 0")
    if d < 1:
        raise ValueError("q_int needs d >= 1")
    if n == 0:
        return ZERO
    return Scalar(LaurentPoly({d * (n - 1 - 2 * k): 1 for k in range(n)}))


@lru_cache(maxsize=None)
def q_factorial(n: int, d: int = 1) -> Scalar:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = ONE
    for k in range(1, n + 1):
        out = out * q_int(k, d)
    return out


@lru_cache(maxsize=None)
def expq_coeff(n: int, d: int = 1) -> Scalar:
    """Coefficient of y**n in exp_x(y) for x = q**d.

    ``d`` may be negative, giving the series at ``x^-1`` (the balanced
    q-factorial is invariant under ``x -> x^-1``).
    """
    if n < 0:
        raise ValueError("expq_coeff needs n >= 0")
    if d == 0:
        raise ValueError("expq_coeff needs d != 0")
    return qpow(d * n * (n - 1) // 2) / q_factorial(n, abs(d))
