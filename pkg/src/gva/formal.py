"""Lazy formal series in one and two variables with rational exponents.

A series is a coefficient function plus the exponent classes (mod 1) it
may be supported on and optional bounds on where it may be nonzero.  The
coefficient function is exact and memoized; a window only decides which
coefficients get enumerated for display or comparison.  Products are
formed symbolically and their coefficients are finite sums, which is why
window truncation never leaks into the values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from gmpy2 import mpq

from .errors import NonSummable, PrecisionTooSmall
from .scalar import ZERO, Q, frac, general_binomial, root_of_unity, simplify

Opt = Optional[mpq]


@dataclass(frozen=True)
class ExponentWindow:
    """Upper bounds on the exponents to enumerate (``max2`` for 2 variables)."""

    max1: mpq
    max2: Opt = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "max1", Q(self.max1))
        if self.max2 is not None:
            object.__setattr__(self, "max2", Q(self.max2))

    @property
    def second(self) -> mpq:
        return self.max1 if self.max2 is None else self.max2


def _max(*xs: Opt) -> Opt:
    xs = [x for x in xs if x is not None]
    return max(xs) if xs else None


def _min(*xs: Opt) -> Opt:
    xs = [x for x in xs if x is not None]
    return min(xs) if xs else None


def _add(a: Opt, b: Opt) -> Opt:
    return None if a is None or b is None else a + b


def _sub(a: Opt, b: Opt) -> Opt:
    return None if a is None or b is None else a - b


def coset_points(lo: mpq, hi: mpq, cosets: Iterable[mpq]) -> list[mpq]:
    """All rationals in ``[lo, hi]`` whose class mod 1 is in ``cosets``."""
    out = []
    for c in cosets:
        x = c + math.ceil(lo - c)
        while x <= hi:
            out.append(x)
            x += 1
    out.sort()
    return out


def _cosets(cs: Iterable) -> frozenset:
    return frozenset(frac(c) for c in cs)


def _times(x, y):
    # scalars commute with states; keep the state on the left
    if getattr(y, "is_state", False):
        return y * x
    return x * y


class Series1:
    """Formal series ``sum_e f(e) z^e`` with ``e`` in finitely many cosets of Z."""

    __slots__ = ("_fn", "cosets", "lo", "hi", "zero", "_memo")

    def __init__(
        self,
        fn: Callable[[mpq], object],
        cosets: Iterable,
        lo: Opt = None,
        hi: Opt = None,
        zero=ZERO,
    ) -> None:
        self._fn = fn
        self.cosets = _cosets(cosets)
        self.lo = None if lo is None else Q(lo)
        self.hi = None if hi is None else Q(hi)
        self.zero = zero
        self._memo: dict = {}

    @classmethod
    def from_terms(cls, terms: dict, zero=ZERO) -> "Series1":
        terms = {Q(e): c for e, c in terms.items() if c}
        if not terms:
            return cls(lambda e: zero, [], zero=zero)
        return cls(lambda e: terms.get(e, zero), terms, min(terms), max(terms), zero=zero)

    def contains(self, e: mpq) -> bool:
        if frac(e) not in self.cosets:
            return False
        if self.lo is not None and e < self.lo:
            return False
        return self.hi is None or e <= self.hi

    def __getitem__(self, e) -> object:
        e = Q(e)
        if not self.contains(e):
            return self.zero
        try:
            return self._memo[e]
        except KeyError:
            v = simplify(self._fn(e))
            self._memo[e] = v
            return v

    def points(self, top, bottom: Opt = None) -> list[mpq]:
        lo = _max(self.lo, bottom)
        hi = _min(self.hi, Q(top))
        if lo is None:
            raise PrecisionTooSmall("series has no lower bound; cannot enumerate")
        return coset_points(lo, hi, self.cosets)

    def terms(self, window) -> dict:
        top = window.max1 if isinstance(window, ExponentWindow) else Q(window)
        out = {}
        for e in self.points(top):
            v = self[e]
            if v:
                out[e] = v
        return out

    def lowest(self, top) -> Opt:
        for e in self.points(top):
            if self[e]:
                return e
        return None

    # -- lazy arithmetic
    def __add__(self, other: "Series1") -> "Series1":
        return Series1(
            lambda e: self[e] + other[e],
            self.cosets | other.cosets,
            None if self.lo is None or other.lo is None else min(self.lo, other.lo),
            None if self.hi is None or other.hi is None else max(self.hi, other.hi),
            self.zero,
        )

    def __neg__(self) -> "Series1":
        return Series1(lambda e: -self[e], self.cosets, self.lo, self.hi, self.zero)

    def __sub__(self, other: "Series1") -> "Series1":
        return self + (-other)

    def scale(self, k) -> "Series1":
        return Series1(lambda e: _times(self[e], k), self.cosets, self.lo, self.hi, self.zero)

    def map(self, f: Callable, zero=None) -> "Series1":
        return Series1(lambda e: f(self[e]), self.cosets, self.lo, self.hi,
                       self.zero if zero is None else zero)

    def shift(self, k) -> "Series1":
        """Multiply by ``z^k``."""
        k = Q(k)
        return Series1(lambda e: self[e - k], [c + k for c in self.cosets],
                       _add(self.lo, k), _add(self.hi, k), self.zero)

    def phase(self, sign: int = 1) -> "Series1":
        """Substitute ``z -> exp(sign*i*pi) z``: the coefficient at ``e`` gets ``exp(sign*i*pi*e)``."""
        return Series1(lambda e: _times(self[e], root_of_unity(sign * e)),
                       self.cosets, self.lo, self.hi, self.zero)


@dataclass(frozen=True)
class Bounds2:
    plo: Opt = None
    phi: Opt = None
    qlo: Opt = None
    qhi: Opt = None
    slo: Opt = None
    shi: Opt = None

    def tightened(self) -> "Bounds2":
        plo = _max(self.plo, _sub(self.slo, self.qhi))
        phi = _min(self.phi, _sub(self.shi, self.qlo))
        qlo = _max(self.qlo, _sub(self.slo, self.phi))
        qhi = _min(self.qhi, _sub(self.shi, self.plo))
        slo = _max(self.slo, _add(self.plo, self.qlo))
        shi = _min(self.shi, _add(self.phi, self.qhi))
        return Bounds2(plo, phi, qlo, qhi, slo, shi)

    def shifted(self, dp, dq) -> "Bounds2":
        return Bounds2(
            _add(self.plo, dp), _add(self.phi, dp), _add(self.qlo, dq),
            _add(self.qhi, dq), _add(self.slo, dp + dq), _add(self.shi, dp + dq),
        )

    def hull(self, other: "Bounds2") -> "Bounds2":
        def lo(a, b):
            return None if a is None or b is None else min(a, b)

        def hi(a, b):
            return None if a is None or b is None else max(a, b)

        return Bounds2(lo(self.plo, other.plo), hi(self.phi, other.phi),
                       lo(self.qlo, other.qlo), hi(self.qhi, other.qhi),
                       lo(self.slo, other.slo), hi(self.shi, other.shi))


class Series2:
    """Formal series ``sum f(p, q) z^p w^q`` in two variables."""

    __slots__ = ("_fn", "cosets1", "cosets2", "bounds", "zero", "_memo")

    def __init__(self, fn, cosets1, cosets2, bounds: Bounds2 = Bounds2(), zero=ZERO) -> None:
        self._fn = fn
        self.cosets1 = _cosets(cosets1)
        self.cosets2 = _cosets(cosets2)
        self.bounds = bounds.tightened()
        self.zero = zero
        self._memo: dict = {}

    def contains(self, p: mpq, q: mpq) -> bool:
        b = self.bounds
        if frac(p) not in self.cosets1 or frac(q) not in self.cosets2:
            return False
        if (b.plo is not None and p < b.plo) or (b.phi is not None and p > b.phi):
            return False
        if (b.qlo is not None and q < b.qlo) or (b.qhi is not None and q > b.qhi):
            return False
        s = p + q
        if (b.slo is not None and s < b.slo) or (b.shi is not None and s > b.shi):
            return False
        return True

    def __getitem__(self, pq) -> object:
        p, q = Q(pq[0]), Q(pq[1])
        if not self.contains(p, q):
            return self.zero
        try:
            return self._memo[(p, q)]
        except KeyError:
            v = simplify(self._fn(p, q))
            self._memo[(p, q)] = v
            return v

    def points(self, window: ExponentWindow) -> Iterator[tuple[mpq, mpq]]:
        b = self.bounds
        p_hi = _min(window.max1, b.phi)
        q_hi = _min(window.second, b.qhi)
        p_lo = _max(b.plo, _sub(b.slo, q_hi))
        q_lo = _max(b.qlo, _sub(b.slo, p_hi))
        if p_lo is None or q_lo is None:
            raise PrecisionTooSmall("window does not bound the support of the series")
        for p in coset_points(p_lo, p_hi, self.cosets1):
            lo = _max(q_lo, _sub(b.slo, p))
            hi = _min(q_hi, _sub(b.shi, p))
            for q in coset_points(lo, hi, self.cosets2):
                yield p, q

    def terms(self, window: ExponentWindow) -> dict:
        out = {}
        for pq in self.points(window):
            v = self[pq]
            if v:
                out[pq] = v
        return out

    @classmethod
    def from_series1(cls, s: Series1, variable: int = 2) -> "Series2":
        """View a one-variable series as a series in ``z`` (1) or ``w`` (2)."""
        if variable == 1:
            return cls(lambda p, q: s[p], s.cosets, [ZERO],
                       Bounds2(s.lo, s.hi, ZERO, ZERO, s.lo, s.hi), s.zero)
        return cls(lambda p, q: s[q], [ZERO], s.cosets,
                   Bounds2(ZERO, ZERO, s.lo, s.hi, s.lo, s.hi), s.zero)

    def __add__(self, other: "Series2") -> "Series2":
        return Series2(lambda p, q: self[p, q] + other[p, q], self.cosets1 | other.cosets1,
                       self.cosets2 | other.cosets2, self.bounds.hull(other.bounds), self.zero)

    def __neg__(self) -> "Series2":
        return Series2(lambda p, q: -self[p, q], self.cosets1, self.cosets2, self.bounds, self.zero)

    def __sub__(self, other: "Series2") -> "Series2":
        return self + (-other)

    def scale(self, k) -> "Series2":
        return Series2(lambda p, q: _times(self[p, q], k), self.cosets1, self.cosets2,
                       self.bounds, self.zero)

    def map(self, f: Callable, zero=None) -> "Series2":
        return Series2(lambda p, q: f(self[p, q]), self.cosets1, self.cosets2, self.bounds,
                       self.zero if zero is None else zero)

    def shift(self, dp, dq) -> "Series2":
        """Multiply by ``z^dp w^dq``."""
        dp, dq = Q(dp), Q(dq)
        return Series2(lambda p, q: self[p - dp, q - dq], [c + dp for c in self.cosets1],
                       [c + dq for c in self.cosets2], self.bounds.shifted(dp, dq), self.zero)


# ---------------------------------------------------------------- products

_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


def _product1(a: Series1, b: Series1) -> Series1:
    # e1 ranges over a's support and e - e1 over b's
    if (a.lo is None and b.hi is None) or (a.hi is None and b.lo is None):
        raise NonSummable("product of one-variable series has infinite coefficient sums")

    def fn(e: mpq):
        lo = _max(a.lo, _sub(e, b.hi))
        hi = _min(a.hi, _sub(e, b.lo))
        total = a.zero if getattr(a.zero, "is_state", False) else b.zero
        for e1 in coset_points(lo, hi, a.cosets):
            if frac(e - e1) not in b.cosets:
                continue
            x = a[e1]
            if not x:
                continue
            y = b[e - e1]
            if y:
                total = total + _times(x, y)
        return total

    cos = {x + y for x in a.cosets for y in b.cosets}
    zero = a.zero if getattr(a.zero, "is_state", False) else b.zero
    return Series1(fn, cos, _add(a.lo, b.lo), _add(a.hi, b.hi), zero)


def _check_summable(a: Bounds2, b: Bounds2) -> None:
    # constraints on (p1, q1) for a fixed output exponent (p, q)
    lo_p = a.plo is not None or b.phi is not None
    hi_p = a.phi is not None or b.plo is not None
    lo_q = a.qlo is not None or b.qhi is not None
    hi_q = a.qhi is not None or b.qlo is not None
    lo_s = a.slo is not None or b.shi is not None
    hi_s = a.shi is not None or b.slo is not None
    for dp, dq in _DIRECTIONS:
        ds = dp + dq
        ok = (
            (not lo_p or dp >= 0) and (not hi_p or dp <= 0)
            and (not lo_q or dq >= 0) and (not hi_q or dq <= 0)
            and (not lo_s or ds >= 0) and (not hi_s or ds <= 0)
        )
        if ok:
            raise NonSummable(
                f"coefficient sums of the product are infinite along direction {(dp, dq)}"
            )


def _product2(a: Series2, b: Series2) -> Series2:
    A, B = a.bounds, b.bounds
    _check_summable(A, B)
    zero = a.zero if getattr(a.zero, "is_state", False) else b.zero

    def fn(p: mpq, q: mpq):
        s = p + q
        Pl, Ph = _max(A.plo, _sub(p, B.phi)), _min(A.phi, _sub(p, B.plo))
        Ql, Qh = _max(A.qlo, _sub(q, B.qhi)), _min(A.qhi, _sub(q, B.qlo))
        Sl, Sh = _max(A.slo, _sub(s, B.shi)), _min(A.shi, _sub(s, B.slo))
        Pl = _max(Pl, _sub(Sl, Qh))
        Ph = _min(Ph, _sub(Sh, Ql))
        total = zero
        for p1 in coset_points(Pl, Ph, a.cosets1):
            if frac(p - p1) not in b.cosets1:
                continue
            lo = _max(Ql, _sub(Sl, p1))
            hi = _min(Qh, _sub(Sh, p1))
            for q1 in coset_points(lo, hi, a.cosets2):
                if frac(q - q1) not in b.cosets2:
                    continue
                x = a[p1, q1]
                if not x:
                    continue
                y = b[p - p1, q - q1]
                if y:
                    total = total + _times(x, y)
        return total

    bounds = Bounds2(_add(A.plo, B.plo), _add(A.phi, B.phi), _add(A.qlo, B.qlo),
                     _add(A.qhi, B.qhi), _add(A.slo, B.slo), _add(A.shi, B.shi))
    c1 = {x + y for x in a.cosets1 for y in b.cosets1}
    c2 = {x + y for x in a.cosets2 for y in b.cosets2}
    return Series2(fn, c1, c2, bounds, zero)


def series_multiply(a, b, window: ExponentWindow | None = None):
    """Exact product of two series of the same arity.

    Raises :class:`NonSummable` when some coefficient of the product would
    be an infinite sum.  ``window`` is accepted for symmetry with the other
    operations; the result is lazy and exact everywhere.
    """
    if isinstance(a, Series1) and isinstance(b, Series1):
        return _product1(a, b)
    if isinstance(a, Series2) and isinstance(b, Series2):
        return _product2(a, b)
    raise TypeError("series_multiply needs two series of the same arity")


# ---------------------------------------------------------------- special series


def iota_expand(N, direction: str = "first_then_second", sign: str = "difference",
                window: ExponentWindow | None = None) -> Series2:
    """Binomial expansion of ``(z -+ w)^N``.

    ``first_then_second`` expands in nonnegative powers of ``w`` and
    ``second_then_first`` in nonnegative powers of ``z``.  For the
    difference in the second order the convention is
    ``(z - w)^N = exp(i*pi*N) (w - z)^N``.
    """
    N = Q(N)
    if sign not in ("difference", "sum"):
        raise ValueError("sign must be 'difference' or 'sum'")
    minus = sign == "difference"
    if direction == "first_then_second":

        def fn(p, q):
            j = int(q)
            c = general_binomial(N, j)
            return -c if minus and j % 2 else c

        return Series2(fn, [N], [ZERO], Bounds2(qlo=ZERO, slo=N, shi=N))
    if direction == "second_then_first":
        ph = root_of_unity(N) if minus else None

        def fn(p, q):
            j = int(p)
            c = general_binomial(N, j)
            if minus:
                c = c * ph
                return -c if j % 2 else c
            return c

        return Series2(fn, [ZERO], [N], Bounds2(plo=ZERO, slo=N, shi=N))
    raise ValueError(f"unknown expansion direction {direction!r}")


def delta_series(coset, window: ExponentWindow | None = None) -> Series2:
    """``sum_{n in coset} z^(-n-1) w^n`` for a coset ``coset + Z``."""
    g = frac(coset)

    def fn(p, q):
        return mpq(1)

    return Series2(fn, [-g], [g], Bounds2(slo=mpq(-1), shi=mpq(-1)))


def partial_derivative(s, variable: int = 1, k: int = 1):
    """Divided-power derivative ``d^k/k!`` in variable 1 (z) or 2 (w)."""
    k = int(k)
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k == 0:
        return s
    if isinstance(s, Series1):
        return Series1(lambda e: _times(s[e + k], general_binomial(e + k, k)),
                       s.cosets, _sub(s.lo, k), _sub(s.hi, k), s.zero)
    b = s.bounds
    if variable == 1:
        return Series2(lambda p, q: _times(s[p + k, q], general_binomial(p + k, k)),
                       s.cosets1, s.cosets2, b.shifted(-k, 0), s.zero)
    return Series2(lambda p, q: _times(s[p, q + k], general_binomial(q + k, k)),
                   s.cosets1, s.cosets2, b.shifted(0, -k), s.zero)


def shift_substitute(s: Series2, sign: int = 1) -> Series2:
    """Substitute ``z -> z + sign*w`` in a series bounded below in ``w``.

    The result is expanded in nonnegative powers of the added ``w``:
    ``[z^a w^b] = sum_j binom(a + j, j) sign^j [x^(a+j) w^(b-j)] s``.
    """
    b = s.bounds
    if b.qlo is None:
        raise NonSummable("substitution needs a lower bound on the second exponent")
    qlo = b.qlo

    def fn(p, q):
        total = s.zero
        for j in range(int(math.floor(q - qlo)) + 1):
            x = s[p + j, q - j]
            if x:
                c = general_binomial(p + j, j)
                if sign < 0 and j % 2:
                    c = -c
                total = total + _times(x, c)
        return total

    return Series2(fn, s.cosets1, s.cosets2, Bounds2(qlo=qlo, slo=b.slo, shi=b.shi), s.zero)


def taylor_shift(g: Series2, N, window: ExponentWindow | None = None) -> Series2:
    """``iota_{z,w}(z - w)^N g(z, w)`` computed through the change of variables
    ``u = z - w``: expand ``g(u + w, w)``, multiply by ``u^N`` and substitute back.

    Requires ``g`` to be bounded below in the second variable.  Agreement with
    ``series_multiply(g, iota_expand(N))`` is the Taylor identity.
    """
    N = Q(N)
    step = shift_substitute(g, +1).shift(N, 0)
    return shift_substitute(step, -1)


def compare(lhs, rhs, window: ExponentWindow):
    """Scan both series in the window; return ``(equal, witness, difference, count)``."""
    if isinstance(lhs, Series1):
        top = window.max1
        pts = sorted(set(lhs.points(top)) | set(rhs.points(top)))
        count = 0
        for e in pts:
            count += 1
            d = lhs[e] - rhs[e]
            if d:
                return False, (e,), d, count
        return True, None, None, count
    pts = sorted(set(lhs.points(window)) | set(rhs.points(window)), key=lambda t: (t[0] + t[1], t))
    count = 0
    for pq in pts:
        count += 1
        d = lhs[pq] - rhs[pq]
        if d:
            return False, pq, d, count
    return True, None, None, count
