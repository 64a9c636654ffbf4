"""Exact arithmetic in Q, Q[q, q^-1] and the rational function field Q(q).

A :class:`Scalar` is stored as ``num / den`` where ``num`` is a Laurent
polynomial and ``den`` is an ordinary polynomial with constant term 1.
Every power of q is pushed into the numerator and the fraction is fully
reduced, so two scalars are equal exactly when their representations are
identical.  This "monic lowest term" normalization also makes the Laurent
expansion at q = 0 easy to read off: ``den`` is a unit of Q[[q]].

Text grammar (used for JSON and CLI output)::

    scalar := poly | "(" poly ")/(" poly ")"
    poly   := term (("+" | "-") term)*
    term   := [rational "*"] "q" ["^" int] | rational

The parser accepts any arithmetic expression in q built from integers,
``+ - * / ^`` and parentheses, so ``"(q^2+1)/(q)"`` reads back as
``q + q^-1``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

_F0 = Fraction(0)
_F1 = Fraction(1)


class PoleAtZero(ArithmeticError):
    """Raised when evaluating at q = 0 a scalar that has a pole there."""


# ----------------------------------------------------------------------------
# dense coefficient-list helpers (low degree first, no trailing zeros)


def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, x in enumerate(b):
        out[k] += x
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    out = list(a) + [_F0] * (n - len(a))
    for k, x in enumerate(b):
        out[k] -= x
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [_F0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    """Polynomial long division in Q[q]; ``b`` nonzero."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) <= db:
        return [], a
    quo = [_F0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if not c:
            continue
        c = c / lead
        quo[k - db] = c
        for j in range(db + 1):
            a[k - db + j] -= c * b[j]
    return _trim(quo), _trim(a[:db])


def _pgcd(a, b):
    """Monic gcd in Q[q] by Euclid's algorithm."""
    a, b = list(a), list(b)
    while b:
        _, r = _pdivmod(a, b)
        if r:
            inv = 1 / r[-1]
            r = [x * inv for x in r]
        a, b = b, r
    if not a:
        return []
    inv = 1 / a[-1]
    return [x * inv for x in a]


# ----------------------------------------------------------------------------


class LaurentPoly:
    """An element of Q[q, q^-1].

    Stored densely as ``coeffs[k]`` = coefficient of ``q^(low + k)``; the
    first and last stored coefficients are nonzero, the zero polynomial has
    no coefficients and ``low == 0``.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, low: int = 0, coeffs: Iterable[Rational] = ()):
        c = [x if type(x) is Fraction else Fraction(x) for x in coeffs]
        _trim(c)
        k = 0
        while k < len(c) and not c[k]:
            k += 1
        self.low = low + k if c else 0
        self.coeffs = tuple(c[k:])
        self._hash = None

    @classmethod
    def _raw(cls, low: int, coeffs: tuple) -> "LaurentPoly":
        # caller guarantees normalized Fraction tuple
        p = object.__new__(cls)
        p.low = low
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def from_list(cls, low: int, c: list) -> "LaurentPoly":
        _trim(c)
        k = 0
        while k < len(c) and not c[k]:
            k += 1
        if k == len(c):
            return ZERO_POLY
        return cls._raw(low + k, tuple(c[k:]))

    @classmethod
    def from_terms(cls, terms: Mapping[int, Rational]) -> "LaurentPoly":
        terms = {e: Fraction(c) for e, c in terms.items() if c}
        if not terms:
            return ZERO_POLY
        lo, hi = min(terms), max(terms)
        return cls._raw(lo, tuple(terms.get(e, _F0) for e in range(lo, hi + 1)))

    @classmethod
    def monomial(cls, exp: int, coeff: Rational = 1) -> "LaurentPoly":
        if not coeff:
            return ZERO_POLY
        return cls._raw(exp, (Fraction(coeff),))

    # -- inspection ----------------------------------------------------------
    def terms(self) -> dict:
        """Exponent -> nonzero coefficient."""
        return {self.low + k: c for k, c in enumerate(self.coeffs) if c}

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def coeff(self, e: int) -> Fraction:
        k = e - self.low
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _F0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.low == 0 and self.coeffs == (_F1,)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def nterms(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def evaluate(self, x: Rational) -> Fraction:
        x = Fraction(x)
        acc = _F0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * x ** self.low if self.coeffs else _F0

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        a = [_F0] * (self.low - lo) + list(self.coeffs)
        b = [_F0] * (other.low - lo) + list(other.coeffs)
        return LaurentPoly.from_list(lo, _padd(a, b))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.low, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs or not other.coeffs:
            return ZERO_POLY
        if len(other.coeffs) == 1:
            c = other.coeffs[0]
            return LaurentPoly._raw(self.low + other.low, tuple(x * c for x in self.coeffs))
        if len(self.coeffs) == 1:
            c = self.coeffs[0]
            return LaurentPoly._raw(self.low + other.low, tuple(c * x for x in other.coeffs))
        return LaurentPoly._raw(self.low + other.low, tuple(_pmul(self.coeffs, other.coeffs)))

    def scale(self, c: Rational) -> "LaurentPoly":
        if not c:
            return ZERO_POLY
        c = Fraction(c)
        return LaurentPoly._raw(self.low, tuple(x * c for x in self.coeffs))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        if not self.coeffs:
            return self
        return LaurentPoly._raw(self.low + k, self.coeffs)

    def bar(self) -> "LaurentPoly":
        """Image under q -> q^-1."""
        if not self.coeffs:
            return self
        return LaurentPoly._raw(-self.high, self.coeffs[::-1])

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.low == other.low and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


ZERO_POLY = LaurentPoly._raw(0, ())
ONE_POLY = LaurentPoly._raw(0, (_F1,))


def format_poly(p: LaurentPoly) -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for e in range(p.high, p.low - 1, -1):
        c = p.coeff(e)
        if not c:
            continue
        if e == 0:
            s = str(c)
        else:
            var = "q" if e == 1 else f"q^{e}"
            if c == 1:
                s = var
            elif c == -1:
                s = "-" + var
            else:
                s = f"{c}*{var}"
        if parts and not s.startswith("-"):
            parts.append("+")
        parts.append(s)
    return "".join(parts)


# ----------------------------------------------------------------------------


class Scalar:
    """An exact element of Q(q).

    Instances are immutable.  ``Scalar(3)``, ``Scalar(Fraction(1, 2))`` and
    ``Scalar.q()`` build constants and the indeterminate; the usual
    arithmetic operators mix freely with ``int`` and ``Fraction``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value: Union[Rational, LaurentPoly, "Scalar"] = 0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
        elif isinstance(value, LaurentPoly):
            self.num, self.den = value, ONE_POLY
        else:
            self.num = LaurentPoly.monomial(0, value)
            self.den = ONE_POLY
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "Scalar":
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    @classmethod
    def q(cls, power: int = 1) -> "Scalar":
        return cls._raw(LaurentPoly.monomial(power), ONE_POLY)

    @classmethod
    def fraction(cls, num: LaurentPoly, den: LaurentPoly) -> "Scalar":
        """Reduce ``num/den`` to canonical form."""
        if not den.coeffs:
            raise ZeroDivisionError("zero denominator")
        if not num.coeffs:
            return ZERO
        # push q-powers of den into num, make den(0) = 1
        shift = den.low
        c0 = den.coeffs[0]
        d = list(den.coeffs)
        if c0 != 1:
            inv = 1 / c0
            d = [x * inv for x in d]
            n_coeffs = [x * inv for x in num.coeffs]
        else:
            n_coeffs = list(num.coeffs)
        n_low = num.low - shift
        if len(d) > 1:
            g = _pgcd(n_coeffs, d)
            if len(g) > 1:
                # normalize gcd to constant term 1 so den keeps d(0) = 1
                inv = 1 / g[0]
                g = [x * inv for x in g]
                n_coeffs, r1 = _pdivmod(n_coeffs, g)
                d, r2 = _pdivmod(d, g)
                assert not r1 and not r2
        return cls._raw(LaurentPoly._raw(n_low, tuple(n_coeffs)), LaurentPoly._raw(0, tuple(d)))

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __bool__(self) -> bool:
        return bool(self.num.coeffs)

    def is_laurent(self) -> bool:
        """True when the value lies in Q[q, q^-1]."""
        return len(self.den.coeffs) == 1

    def is_rational(self) -> bool:
        return len(self.den.coeffs) == 1 and (
            not self.num.coeffs or (self.num.low == 0 and len(self.num.coeffs) == 1)
        )

    @property
    def complexity(self) -> int:
        """Term count; used as the pivoting cost in elimination."""
        return len(self.num.coeffs) + len(self.den.coeffs)

    def valuation(self) -> float:
        """Order of vanishing at q = 0 (``inf`` for zero)."""
        if not self.num.coeffs:
            return float("inf")
        return self.num.low

    def is_regular_at_zero(self) -> bool:
        return not self.num.coeffs or self.num.low >= 0

    def eval_at_zero(self) -> Fraction:
        if not self.is_regular_at_zero():
            raise PoleAtZero(f"{self} has a pole at q=0")
        return self.num.coeff(0)

    def evaluate(self, x: Rational) -> Fraction:
        d = self.den.evaluate(x)
        if not d:
            raise ZeroDivisionError(f"denominator of {self} vanishes at {x}")
        return self.num.evaluate(x) / d

    def series(self, upto: int) -> dict:
        """Coefficients of the Laurent expansion at q = 0 up to ``q^upto``."""
        if not self.num.coeffs:
            return {}
        lo = self.num.low
        n = upto - lo + 1
        if n <= 0:
            return {}
        # 1/den as a power series; den(0) = 1
        d = self.den.coeffs
        inv = [_F1] + [_F0] * (n - 1)
        for k in range(1, n):
            acc = _F0
            for j in range(1, min(k, len(d) - 1) + 1):
                acc -= d[j] * inv[k - j]
            inv[k] = acc
        out = {}
        num = self.num.coeffs
        for k in range(n):
            acc = _F0
            for j in range(min(k, len(num) - 1) + 1):
                if num[j]:
                    acc += num[j] * inv[k - j]
            if acc:
                out[lo + k] = acc
        return out

    def bar(self) -> "Scalar":
        """Image under the involution q -> q^-1."""
        if len(self.den.coeffs) == 1:
            return Scalar._raw(self.num.bar(), ONE_POLY)
        return Scalar.fraction(self.num.bar(), self.den.bar())

    def is_bar_invariant(self) -> bool:
        return self.bar() == self

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den is other.den or self.den == other.den:
            if len(self.den.coeffs) == 1:
                return Scalar._raw(self.num + other.num, ONE_POLY)
            return Scalar.fraction(self.num + other.num, self.den)
        return Scalar.fraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num.coeffs or not other.num.coeffs:
            return ZERO
        if len(self.den.coeffs) == 1 and len(other.den.coeffs) == 1:
            return Scalar._raw(self.num * other.num, ONE_POLY)
        return Scalar.fraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar.fraction(self.den, self.num)

    def __truediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num.coeffs:
            raise ZeroDivisionError("division by zero scalar")
        if len(other.num.coeffs) == 1 and len(other.den.coeffs) == 1:
            # divide by a monomial c*q^k: no gcd needed
            c = other.num.coeffs[0]
            k = other.num.low
            return Scalar._raw(
                LaurentPoly._raw(self.num.low - k, tuple(x / c for x in self.num.coeffs))
                if self.num.coeffs
                else ZERO_POLY,
                self.den,
            )
        if len(self.den.coeffs) == 1 and len(other.den.coeffs) == 1:
            # exact Laurent division is common in fraction-free elimination
            a = self.num
            b = other.num
            quo, rem = _pdivmod(list(a.coeffs), list(b.coeffs))
            if not rem:
                return Scalar._raw(LaurentPoly.from_list(a.low - b.low, quo), ONE_POLY)
        return Scalar.fraction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                # agree with hash of equal int/Fraction
                self._hash = hash(self.num.coeff(0))
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    def __str__(self) -> str:
        if len(self.den.coeffs) == 1:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def _coerce(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    if isinstance(x, LaurentPoly):
        return Scalar(x)
    return None


ZERO = Scalar._raw(ZERO_POLY, ONE_POLY)
ONE = Scalar._raw(ONE_POLY, ONE_POLY)
Q = Scalar.q()


def is_regular_at_zero(s: Scalar) -> bool:
    return _coerce(s).is_regular_at_zero()


def eval_at_zero(s: Scalar) -> Fraction:
    return _coerce(s).eval_at_zero()


def bar(s: Scalar) -> Scalar:
    return _coerce(s).bar()


# ----------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(.))")


class ScalarSyntaxError(ValueError):
    pass


def parse_scalar(text: str) -> Scalar:
    """Parse an arithmetic expression in q (see module docstring)."""
    tokens = []
    for num, var, op in _TOKEN.findall(text):
        if num:
            tokens.append(("n", int(num)))
        elif var:
            tokens.append(("q", None))
        elif op.strip():
            if op not in "+-*/^()":
                raise ScalarSyntaxError(f"unexpected character {op!r} in {text!r}")
            tokens.append((op, None))
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind=None):
        nonlocal pos
        if pos >= len(tokens) or (kind is not None and tokens[pos][0] != kind):
            raise ScalarSyntaxError(f"malformed scalar {text!r}")
        tok = tokens[pos]
        pos += 1
        return tok

    def expr():
        v = term()
        while peek() in ("+", "-"):
            op = take()[0]
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term():
        v = unary()
        while peek() in ("*", "/"):
            op = take()[0]
            rhs = unary()
            v = v * rhs if op == "*" else v / rhs
        return v

    def unary():
        if peek() == "-":
            take()
            return -unary()
        if peek() == "+":
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "(":
                take()
                if peek() == "-":
                    take()
                    sign = -1
                e = take("n")[1]
                take(")")
            else:
                if peek() == "-":
                    take()
                    sign = -1
                e = take("n")[1]
            return base ** (sign * e)
        return base

    def atom():
        kind = peek()
        if kind == "n":
            return Scalar(take()[1])
        if kind == "q":
            take()
            return Q
        if kind == "(":
            take()
            v = expr()
            take(")")
            return v
        raise ScalarSyntaxError(f"malformed scalar {text!r}")

    if not tokens:
        raise ScalarSyntaxError("empty scalar")
    value = expr()
    if pos != len(tokens):
        raise ScalarSyntaxError(f"trailing input in {text!r}")
    return value


def to_scalar(x) -> Scalar:
    """Coerce ints, Fractions, Laurent polynomials and strings."""
    if isinstance(x, str):
        return parse_scalar(x)
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot interpret {x!r} as a scalar")
    return s
