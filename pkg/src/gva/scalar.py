"""Exact scalars: rationals and elements of cyclotomic fields.

Rationals are ``gmpy2.mpq``.  A :class:`Scalar` is an element of Q(zeta_n)
for an even conductor ``n``, stored in the power basis
``1, zeta_n, ..., zeta_n^(phi(n)-1)`` where ``zeta_n = exp(2*pi*i/n)``.
Elements of different conductors are compared and combined by embedding
both into the field of the lcm conductor.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

from gmpy2 import mpq

from .errors import DivisionByZero, ParseError

Rational = type(mpq())
Number = Union[int, Fraction, "mpq", "Scalar"]

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        try:
            if "/" in s:
                p, q = s.split("/")
                if int(q) == 0:
                    raise DivisionByZero("zero denominator in rational literal")
                return mpq(int(p), int(q))
            return mpq(int(s))
        except ValueError:
            raise ParseError(f"not a rational literal: {x!r}", 0, x) from None
    if isinstance(x, Scalar):
        r = x.rational()
        if r is None:
            raise TypeError("scalar is not rational")
        return r
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def floor(x) -> int:
    return int(math.floor(Q(x)))


def ceil(x) -> int:
    return int(math.ceil(Q(x)))


def frac(x) -> mpq:
    """Representative of ``x mod 1`` in ``[0, 1)``."""
    x = Q(x)
    return x - math.floor(x)


def is_integer(x) -> bool:
    return Q(x).denominator == 1


def general_binomial(n, j: int):
    """``n(n-1)...(n-j+1)/j!`` for any rational or scalar ``n``; 0 if j < 0."""
    j = int(j)
    if j < 0:
        return ZERO
    if isinstance(n, Scalar):
        acc: Number = Scalar.from_rational(ONE)
        for t in range(j):
            acc = acc * (n - t)
        return simplify(acc * mpq(1, math.factorial(j)))
    n = Q(n)
    if n.denominator == 1 and n >= 0:
        return mpq(math.comb(int(n), j)) if j <= n else ZERO
    num = ONE
    for t in range(j):
        num *= n - t
    return num / math.factorial(j)


# ---------------------------------------------------------------- cyclotomic data


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, _cyclotomic(d))
    return tuple(num)


def _exact_div(a: list[int], b: tuple[int, ...]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for k, bk in enumerate(b):
            a[i + k] -= c * bk
    assert not any(a), "cyclotomic division not exact"
    return out


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    return len(_cyclotomic(n)) - 1


@lru_cache(maxsize=None)
def _reduction(n: int) -> tuple[tuple[mpq, ...], ...]:
    """Row k is ``x^k mod Phi_n`` in the power basis, for ``0 <= k < n``."""
    phi = _phi(n)
    cyc = _cyclotomic(n)
    rows = []
    cur = [ZERO] * phi
    cur[0] = ONE
    for k in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [ZERO] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    return tuple(rows)


def _mobius(m: int) -> int:
    res, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    return -res if m > 1 else res


@lru_cache(maxsize=None)
def _trace_weights(n: int) -> tuple[mpq, ...]:
    # normalized trace of zeta_n^j does not depend on the ambient conductor
    out = []
    for j in range(_phi(n)):
        m = n // math.gcd(j, n)
        out.append(mpq(_mobius(m), _phi(m)))
    return tuple(out)


def _reduce(n: int, dense: list) -> tuple[mpq, ...]:
    """Reduce coefficients indexed by exponents ``0..n-1`` modulo Phi_n."""
    phi = _phi(n)
    red = _reduction(n)
    out = list(dense[:phi]) + [ZERO] * max(0, phi - len(dense))
    for k in range(phi, len(dense)):
        c = dense[k]
        if c:
            row = red[k]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


def _embed(n: int, coeffs: tuple, big: int) -> tuple[mpq, ...]:
    if n == big:
        return coeffs
    step = big // n
    dense = [ZERO] * big
    for j, c in enumerate(coeffs):
        if c:
            dense[j * step] += c
    return _reduce(big, dense)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class Scalar:
    """Exact element of a cyclotomic field Q(zeta_n), ``n`` even."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs) -> None:
        if n < 2 or n % 2:
            raise ValueError("conductor must be an even integer >= 2")
        coeffs = tuple(Q(x) for x in coeffs)
        if len(coeffs) != _phi(n):
            coeffs = _reduce(n, list(coeffs) + [ZERO] * max(0, n - len(coeffs)))
        self.n = n
        self.c = coeffs
        self._demote()

    @classmethod
    def _raw(cls, n: int, coeffs: tuple) -> "Scalar":
        obj = object.__new__(cls)
        obj.n = n
        obj.c = coeffs
        obj._demote()
        return obj

    def _demote(self) -> None:
        if self.n != 2 and not any(self.c[1:]):
            self.n = 2
            self.c = (self.c[0],)

    @classmethod
    def from_rational(cls, x) -> "Scalar":
        return cls._raw(2, (Q(x),))

    # -- inspection
    def rational(self):
        """The value as ``mpq`` if it is rational, else ``None``."""
        return self.c[0] if self.n == 2 else None

    def is_rational(self) -> bool:
        return self.n == 2

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def terms(self) -> list[tuple[mpq, mpq]]:
        """Pairs ``(coefficient, q)`` meaning ``coefficient * exp(i*pi*q)``."""
        m = self.minimal()
        out = []
        for j, c in enumerate(m.c):
            if c:
                out.append((c, mpq(2 * j, m.n)))
        return out

    def __complex__(self) -> complex:
        import cmath

        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * k / self.n) for k, c in enumerate(self.c)),
            0j,
        )

    # -- arithmetic
    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Rational, Fraction)) and not isinstance(other, bool):
            return Scalar._raw(2, (Q(other),))
        return None

    def _aligned(self, other: "Scalar"):
        if self.n == other.n:
            return self.n, self.c, other.c
        big = _lcm(self.n, other.n)
        return big, _embed(self.n, self.c, big), _embed(other.n, other.c, big)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n, a, b = self._aligned(o)
        return Scalar._raw(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.n, tuple(-x for x in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.n == 2:
            k = o.c[0]
            return Scalar._raw(self.n, tuple(x * k for x in self.c))
        if self.n == 2:
            k = self.c[0]
            return Scalar._raw(o.n, tuple(x * k for x in o.c))
        n, a, b = self._aligned(o)
        dense = [ZERO] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        dense[i + j] += x * y
        return Scalar._raw(n, _reduce(n, dense))

    __rmul__ = __mul__

    def conjugate_by(self, k: int) -> "Scalar":
        """Galois automorphism ``zeta_n -> zeta_n^k`` (k coprime to n)."""
        dense = [ZERO] * self.n
        for j, c in enumerate(self.c):
            if c:
                dense[(j * k) % self.n] += c
        return Scalar._raw(self.n, _reduce(self.n, dense))

    def conjugate(self) -> "Scalar":
        return self.conjugate_by(-1)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        if self.n == 2:
            return Scalar._raw(2, (1 / self.c[0],))
        other = Scalar.from_rational(ONE)
        for k in range(2, self.n):
            if math.gcd(k, self.n) == 1:
                other = other * self.conjugate_by(k)
        norm = (self * other).rational()
        assert norm is not None
        return other * (1 / norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = Scalar.from_rational(ONE)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison
    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.n == o.n:
            return self.c == o.c
        _, a, b = self._aligned(o)
        return a == b

    def __hash__(self) -> int:
        if self.n == 2:
            return hash(self.c[0])
        w = _trace_weights(self.n)
        return hash(("cyclotomic", sum((c * t for c, t in zip(self.c, w)), ZERO)))

    def minimal(self) -> "Scalar":
        """The same value represented at its smallest even conductor."""
        if self.n == 2:
            return self
        for m in sorted(d for d in range(2, self.n, 2) if self.n % d == 0):
            fixed = all(
                self.conjugate_by(k) == self
                for k in range(1, self.n, m)
                if math.gcd(k, self.n) == 1
            )
            if fixed:
                return _descend(self, m)
        return self

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


def _descend(x: Scalar, m: int) -> Scalar:
    """Rewrite ``x`` (known to lie in Q(zeta_m)) at conductor ``m``."""
    phi_m = _phi(m)
    images = [_embed(m, tuple(ONE if i == j else ZERO for i in range(phi_m)), x.n) for j in range(phi_m)]
    # solve sum_j y_j images[j] = x.c by Gaussian elimination
    rows = [[images[j][r] for j in range(phi_m)] + [x.c[r]] for r in range(len(x.c))]
    piv_rows = []
    col = 0
    r0 = 0
    while col < phi_m:
        p = next((r for r in range(r0, len(rows)) if rows[r][col]), None)
        if p is None:
            col += 1
            continue
        rows[r0], rows[p] = rows[p], rows[r0]
        inv = 1 / rows[r0][col]
        rows[r0] = [v * inv for v in rows[r0]]
        for r in range(len(rows)):
            if r != r0 and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[r0])]
        piv_rows.append((r0, col))
        r0 += 1
        col += 1
    y = [ZERO] * phi_m
    for r, c in piv_rows:
        y[c] = rows[r][-1]
    return Scalar._raw(m, tuple(y))


def root_of_unity(q) -> Scalar:
    """``exp(i*pi*q)`` for rational ``q``."""
    q = Q(q)
    n = _lcm(2, 2 * q.denominator)
    j = int((q * n / 2) % n)
    dense = [ZERO] * n
    dense[j] = ONE
    return Scalar._raw(n, _reduce(n, dense))


def u(q) -> Scalar:
    return root_of_unity(q)


def simplify(x):
    """Demote rational scalars to ``mpq``; leave other scalars alone."""
    t = type(x)
    if t is Rational:
        return x
    if t is Scalar:
        r = x.rational()
        return x if r is None else r
    if t is int or t is Fraction:
        return Q(x)
    return x


def to_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar.from_rational(x)


def is_zero(x) -> bool:
    return not x


def format_rational(x) -> str:
    return str(Q(x))


def format_scalar(x) -> str:
    """Canonical text of a scalar: ``c`` or ``c*u(q) + ...`` (q in (0, 2))."""
    x = simplify(x)
    if not isinstance(x, Scalar):
        return str(x)
    parts = []
    for c, q in x.terms():
        parts.append(str(c) if q == 0 else f"{c}*u({q})")
    return " + ".join(parts) if parts else "0"
