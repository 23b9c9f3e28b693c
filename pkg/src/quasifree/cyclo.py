"""Exact arithmetic in cyclotomic fields Q(zeta_m).

An element is stored as an integer coefficient vector over the power basis
``1, z, ..., z^(phi(m)-1)`` of Q[x]/Phi_m(x) together with one positive common
denominator.  Binary operations lift both operands to the lcm of their orders.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "Cyclotomic",
    "DivisionByZero",
    "NotCoprime",
    "CyclotomicParseError",
    "cyclotomic_polynomial",
    "euler_phi",
    "zeta",
    "parse",
    "arith",
    "invert",
    "galois",
    "absolute_norm",
    "integrality",
]


class DivisionByZero(ZeroDivisionError):
    pass


class NotCoprime(ValueError):
    pass


class CyclotomicParseError(ValueError):
    pass


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _moebius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    # den monic; coefficients low -> high
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first.

    Computed as (x^m - 1) divided by Phi_d for every proper divisor d of m.
    """
    if m < 1:
        raise ValueError(f"order must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        poly = _poly_exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _reduce(coeffs: list[int], m: int) -> list[int]:
    """Reduce an integer polynomial modulo Phi_m; result has length phi(m)."""
    # x^m = 1 in the field, fold exponents first
    folded = [0] * m
    for i, c in enumerate(coeffs):
        if c:
            folded[i % m] += c
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    for i in range(m - 1, deg - 1, -1):
        c = folded[i]
        if c:
            folded[i] = 0
            base = i - deg
            for j in range(deg):
                folded[base + j] -= c * phi[j]
    return folded[:deg]


class Cyclotomic:
    """Element of Q(zeta_m) in canonical power-basis form.

    ``num`` has length phi(m); the value is ``sum(num[i] * z^i) / den``.
    Instances are immutable and hash consistently across orders.
    """

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, num: Iterable[int], den: int = 1):
        if order < 1:
            raise ValueError(f"order must be positive, got {order}")
        num = tuple(int(c) for c in num)
        if len(num) != euler_phi(order):
            raise ValueError(
                f"expected {euler_phi(order)} coefficients at order {order}, got {len(num)}"
            )
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num, den = tuple(-c for c in num), -den
        g = den
        for c in num:
            g = math.gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num, den = tuple(c // g for c in num), den // g
        if not any(num):
            den = 1
        self.order = order
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, q: int | Fraction, order: int = 1) -> Cyclotomic:
        q = Fraction(q)
        num = [0] * euler_phi(order)
        num[0] = q.numerator
        return cls(order, num, q.denominator)

    @classmethod
    def from_exponents(cls, order: int, terms: Mapping[int, int | Fraction]) -> Cyclotomic:
        """Build ``sum(c * z^k)`` from a map exponent -> rational coefficient."""
        den = 1
        for c in terms.values():
            den = math.lcm(den, Fraction(c).denominator)
        raw = [0] * order
        for k, c in terms.items():
            c = Fraction(c)
            raw[k % order] += c.numerator * (den // c.denominator)
        return cls(order, _reduce(raw, order), den)

    @classmethod
    def from_fractions(cls, order: int, coeffs: Iterable[int | Fraction]) -> Cyclotomic:
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = math.lcm(den, c.denominator)
        return cls(order, [c.numerator * (den // c.denominator) for c in coeffs], den)

    # -- structure ----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def lift(self, order: int) -> Cyclotomic:
        """Re-express at ``order``, which must be a multiple of the current one."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        raw = [0] * order
        for i, c in enumerate(self.num):
            raw[i * step] = c
        return Cyclotomic(order, _reduce(raw, order), self.den)

    def _pair(self, other: Cyclotomic) -> tuple[Cyclotomic, Cyclotomic]:
        m = math.lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def normalized_trace(self) -> Fraction:
        """Trace to Q divided by the field degree; independent of the order."""
        m = self.order
        total = Fraction(0)
        for i, c in enumerate(self.num):
            if c:
                d = m // math.gcd(i, m)
                total += Fraction(c * _moebius(d), euler_phi(d))
        return total * Fraction(1, self.den)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Cyclotomic | None:
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(other, self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._pair(other)
        den = math.lcm(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return Cyclotomic(a.order, [x * fa + y * fb for x, y in zip(a.num, b.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.num], self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return Cyclotomic(self.order, [other * c for c in self.num], self.den)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._pair(other)
        if a.is_rational() or b.is_rational():
            if b.is_rational():
                a, b = b, a
            s = a.num[0]
            return Cyclotomic(b.order, [s * c for c in b.num], a.den * b.den)
        prod = [0] * (len(a.num) + len(b.num) - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.order, _reduce(prod, a.order), a.den * b.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result = Cyclotomic.from_rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.order == other.order:
            return self.num == other.num and self.den == other.den
        a, b = self._pair(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.coeffs

    # -- display ------------------------------------------------------------

    def approx(self) -> complex:
        """Floating-point value; display and cross-checks only."""
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(c * z**i for i, c in enumerate(self.num)) / self.den

    def __str__(self) -> str:
        return format_cyclotomic(self)

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, {self.num!r}, {self.den})"


def zeta(m: int, k: int = 1) -> Cyclotomic:
    return Cyclotomic.from_exponents(m, {k: 1})


def _coerce_pair(a, b):
    if not isinstance(a, Cyclotomic):
        a = Cyclotomic.from_rational(a)
    if not isinstance(b, Cyclotomic):
        b = Cyclotomic.from_rational(b)
    return a, b


def arith(a: Cyclotomic, b: Cyclotomic, op: str) -> Cyclotomic:
    a, b = _coerce_pair(a, b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def galois(a: Cyclotomic, k: int) -> Cyclotomic:
    """Apply the automorphism z -> z^k; ``k = -1`` is complex conjugation."""
    m = a.order
    if math.gcd(k, m) != 1:
        raise NotCoprime(f"{k} is not coprime to {m}")
    if a.is_rational():
        return a
    raw = [0] * m
    for i, c in enumerate(a.num):
        if c:
            raw[(i * k) % m] += c
    return Cyclotomic(m, _reduce(raw, m), a.den)


def conj(a: Cyclotomic) -> Cyclotomic:
    return galois(a, -1)


def absolute_norm(a: Cyclotomic) -> Fraction:
    m = a.order
    if a.is_rational():
        return Fraction(a.num[0], a.den) ** euler_phi(m)
    result = Cyclotomic.from_rational(1, m)
    for k in range(1, m):
        if math.gcd(k, m) == 1:
            result = result * galois(a, k)
    return result.rational_value()


def invert(a: Cyclotomic) -> Cyclotomic:
    if not isinstance(a, Cyclotomic):
        a = Cyclotomic.from_rational(a)
    if a.is_zero():
        raise DivisionByZero("cannot invert zero")
    m = a.order
    if a.is_rational():
        return Cyclotomic.from_rational(Fraction(a.den, a.num[0]), m)
    # a * prod_{k != 1} sigma_k(a) = N(a)
    cofactor = Cyclotomic.from_rational(1, m)
    for k in range(2, m):
        if math.gcd(k, m) == 1:
            cofactor = cofactor * galois(a, k)
    norm = (a * cofactor).rational_value()
    return cofactor * Fraction(norm.denominator, norm.numerator)


def integrality(a: Cyclotomic) -> dict[str, bool]:
    # the power basis of Z[zeta_m] is an integral basis
    is_int = a.den == 1
    is_rat = a.is_rational()
    return {
        "is_algebraic_integer": is_int,
        "is_rational": is_rat,
        "is_rational_integer": is_int and is_rat,
    }


# -- textual interchange form ------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_cyclotomic(a: Cyclotomic) -> str:
    """Canonical text ``a0 + a1*z{m} + a2*z{m}^2 ...``; rationals print bare."""
    terms = []
    for i, c in enumerate(a.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = _format_coeff(mag)
        else:
            power = f"z{a.order}" if i == 1 else f"z{a.order}^{i}"
            body = power if mag == 1 else f"{_format_coeff(mag)}*{power}"
        terms.append((c < 0, body))
    if not terms:
        return "0"
    neg, body = terms[0]
    out = ("-" if neg else "") + body
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*(?P<z1>z\d+(?:\^\d+)?))?
        | (?P<z2>z\d+(?:\^\d+)?)
        )\s*""",
    re.VERBOSE,
)


def parse(text: str, order: int | None = None) -> Cyclotomic:
    """Parse the textual form; exponents need not be reduced.

    A string without any ``z{m}`` term is rational and gets ``order`` (default 1).
    """
    if not isinstance(text, str):
        raise CyclotomicParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise CyclotomicParseError("empty cyclotomic string")
    pos = 0
    terms: list[tuple[Fraction, int | None, int]] = []
    first = True
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if mt is None or mt.end() == pos:
            raise CyclotomicParseError(f"cannot parse {text!r} at offset {pos}")
        if mt.group("sign") is None and not first:
            raise CyclotomicParseError(f"missing operator in {text!r} at offset {pos}")
        first = False
        sign = -1 if mt.group("sign") == "-" else 1
        coef = Fraction(mt.group("coef")) if mt.group("coef") else Fraction(1)
        ztok = mt.group("z1") or mt.group("z2")
        if ztok:
            zm, _, ze = ztok[1:].partition("^")
            m, e = int(zm), int(ze) if ze else 1
            if m < 1:
                raise CyclotomicParseError(f"bad root of unity order in {text!r}")
            terms.append((sign * coef, m, e))
        else:
            terms.append((sign * coef, None, 0))
        pos = mt.end()
    orders = {m for _, m, _ in terms if m is not None}
    if len(orders) > 1:
        raise CyclotomicParseError(f"mixed root-of-unity orders in {text!r}")
    m = orders.pop() if orders else (order or 1)
    if order is not None and order != m:
        if order % m:
            raise CyclotomicParseError(f"{text!r} does not live at order {order}")
    exps: dict[int, Fraction] = {}
    for c, _, e in terms:
        exps[e % m] = exps.get(e % m, Fraction(0)) + c
    value = Cyclotomic.from_exponents(m, exps)
    return value.lift(order) if order is not None else value
