"""Fock states: polynomials in oscillators ``e_{i,-n}`` times group elements ``e^gamma``.

A monomial is a pair ``(creations, charge)``.  ``creations`` is a sorted
tuple of integer codes, one per oscillator factor with repetition; the code
of ``e_{i,-n}`` is ``(n << 8) | i``.  ``charge`` is a tuple of rationals in
the ambient basis.  Coefficients are ``mpq`` when rational and
:class:`~gva.scalar.Scalar` otherwise.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator

from gmpy2 import mpq

from .errors import NotHomogeneous, ZeroState
from .linalg import Vector, bilinear, vec
from .scalar import ZERO, Q, Scalar, simplify

Creations = tuple
Mono = tuple  # (Creations, charge)

MAX_DIM = 256


def code(i: int, n: int) -> int:
    """Code of the oscillator ``e_{i,-n}`` (basis index ``i``, depth ``n >= 1``)."""
    return (n << 8) | i


def code_index(c: int) -> int:
    return c & 0xFF


def code_depth(c: int) -> int:
    return c >> 8


def creations_depth(cr: Creations) -> int:
    return sum(c >> 8 for c in cr)


def factor_list(cr: Creations) -> list[tuple[int, int, int]]:
    """``(index, depth, count)`` triples sorted by index then depth."""
    cnt = Counter(cr)
    return sorted(((code_index(c), code_depth(c), k) for c, k in cnt.items()))


def make_creations(factors: Iterable[tuple[int, int]]) -> Creations:
    out = []
    for i, n in factors:
        if n < 1:
            raise ValueError("oscillator depth must be >= 1")
        out.append(code(i, n))
    return tuple(sorted(out))


def _clean(c):
    c = simplify(c)
    return c


class FockState:
    """Finite linear combination of monomials ``(prod e_{i,-n}) e^gamma``."""

    __slots__ = ("terms",)
    is_state = True

    def __init__(self, terms: dict | None = None) -> None:
        self.terms: dict = {}
        if terms:
            for k, v in terms.items():
                v = _clean(v)
                if v:
                    self.terms[k] = v

    @classmethod
    def _raw(cls, terms: dict) -> "FockState":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls) -> "FockState":
        return cls._raw({})

    @classmethod
    def exp(cls, charge, coeff=1) -> "FockState":
        """The state ``coeff * e^charge`` (the vacuum when the charge is zero)."""
        return cls({((), vec(charge)): Q(coeff) if not isinstance(coeff, Scalar) else coeff})

    @classmethod
    def vacuum(cls, dim: int) -> "FockState":
        return cls.exp((0,) * dim)

    @classmethod
    def monomial(cls, factors: Iterable[tuple[int, int]], charge, coeff=1) -> "FockState":
        cr = make_creations(factors)
        c = coeff if isinstance(coeff, Scalar) else Q(coeff)
        return cls({(cr, vec(charge)): c})

    # -- container protocol
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def coefficient(self, factors: Iterable[tuple[int, int]], charge):
        return self.terms.get((make_creations(factors), vec(charge)), ZERO)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, FockState):
            if other == 0:
                return self
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                s = simplify(out[k] + v)
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return FockState._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return FockState._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, FockState):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, FockState):
            return NotImplemented
        if isinstance(k, Scalar):
            k = simplify(k)
        else:
            k = Q(k)
        if not k:
            return FockState._raw({})
        if isinstance(k, Scalar):
            return FockState({m: k * v for m, v in self.terms.items()})
        return FockState._raw({m: _scale(v, k) for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, FockState):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        from .parse import format_state

        return f"FockState({format_state(self)})"

    # -- gradings
    def charges(self) -> set:
        return {m[1] for m in self.terms}

    def max_depth(self) -> int:
        return max((creations_depth(m[0]) for m in self.terms), default=0)

    def min_depth(self) -> int:
        return min((creations_depth(m[0]) for m in self.terms), default=0)

    def map_coefficients(self, f) -> "FockState":
        return FockState({m: f(v) for m, v in self.terms.items()})


def _scale(v, k):
    return simplify(v * k) if isinstance(v, Scalar) else v * k


def degree_of(v: FockState) -> Vector:
    """The common charge of a nonzero homogeneous state."""
    ch = v.charges()
    if not ch:
        raise ZeroState("the zero state has no charge")
    if len(ch) > 1:
        raise NotHomogeneous("state mixes several charges")
    return next(iter(ch))


def depth_of(v: FockState) -> int:
    """The common oscillator depth of a state homogeneous in depth."""
    ds = {creations_depth(m[0]) for m in v.terms}
    if not ds:
        raise ZeroState("the zero state has no depth")
    if len(ds) > 1:
        raise NotHomogeneous("state mixes several depths")
    return next(iter(ds))


def _pairings_with_basis(gram, h: Vector) -> tuple[mpq, ...]:
    # (e_j | h) for every basis index j
    return tuple(sum((gram[j][k] * h[k] for k in range(len(h)) if h[k]), ZERO) for j in range(len(h)))


def heis_act(space, h, n: int, v: FockState) -> FockState:
    """Action of the Heisenberg mode ``h_n`` on ``v``.

    ``n < 0`` multiplies by ``sum_i h_i e_{i,n}``, ``n = 0`` multiplies by the
    pairing with the charge and ``n > 0`` differentiates with weight
    ``n (h|e_j)`` in each ``e_{j,-n}``.
    """
    h = vec(h)
    gram = space.gram
    n = int(n)
    out: dict = {}

    def put(key, c):
        s = out.get(key)
        s = c if s is None else s + c
        s = simplify(s)
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    if n < 0:
        for (cr, ch), c in v.terms.items():
            for i, hi in enumerate(h):
                if hi:
                    put((tuple(sorted(cr + (code(i, -n),))), ch), c * hi)
    elif n == 0:
        for (cr, ch), c in v.terms.items():
            k = bilinear(gram, h, ch)
            if k:
                put((cr, ch), c * k)
    else:
        pr = _pairings_with_basis(gram, h)
        for (cr, ch), c in v.terms.items():
            seen = set()
            for pos, cd in enumerate(cr):
                if code_depth(cd) != n or cd in seen:
                    continue
                seen.add(cd)
                j = code_index(cd)
                if not pr[j]:
                    continue
                mult = cr.count(cd)
                rest = cr[:pos] + cr[pos + 1:]
                put((rest, ch), c * (n * mult * pr[j]))
    return FockState._raw(out)


def translation_apply(space, v: FockState) -> FockState:
    """The translation operator ``T``.

    ``T`` acts on oscillators as the derivation ``e_{i,-n} -> n e_{i,-n-1}`` and
    on ``e^gamma`` as multiplication by ``gamma_{-1}``.
    """
    out: dict = {}

    def put(key, c):
        s = out.get(key)
        s = c if s is None else s + c
        s = simplify(s)
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    for (cr, ch), c in v.terms.items():
        seen = set()
        for pos, cd in enumerate(cr):
            if cd in seen:
                continue
            seen.add(cd)
            n = code_depth(cd)
            mult = cr.count(cd)
            rest = cr[:pos] + cr[pos + 1:]
            put((tuple(sorted(rest + (code(code_index(cd), n + 1),))), ch), c * (n * mult))
        for i, gi in enumerate(ch):
            if gi:
                put((tuple(sorted(cr + (code(i, 1),))), ch), c * gi)
    return FockState._raw(out)
