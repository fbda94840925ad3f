"""Mode computations on the Fock space with rational coefficients.

Polynomials here are dicts from a packed monomial to an ``mpq``.  A packed
monomial stores the multiplicity of ``e_{i,-n}`` in a 12-bit slot at
position ``(n - 1) * dim + i``, so multiplying monomials is adding
integers.  The cocycle factor is applied by the caller, so all numbers
stay rational.

For ``a = prod_t e_{i_t,-n_t} e^alpha`` the field is the normally ordered
product of the derivative currents with the vertex operator of ``alpha``:
creation parts stand to the left, annihilation parts (modes ``>= 0``) to
the right.  Identical factors are split by how many go to the creation
side, with binomial weights.  Modes are graded by the oscillator depth of
the output: ``a_(n) c`` only needs the depth ``D`` component, where
``D = -n - 1 - (alpha|gamma) + depth(a) + depth(c)``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

from gmpy2 import mpq

from .fock import code, code_depth, code_index
from .scalar import ZERO

BITS = 12
MASK = (1 << BITS) - 1
_ONE = mpq(1)


def _binom_int(n: int, k: int) -> int:
    """Binomial coefficient for any integer ``n`` and ``k >= 0``."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k) if k <= n else 0
    v = math.comb(k - n - 1, k)
    return -v if k % 2 else v


def _mul_into(acc: dict, p: dict, q: dict, w=_ONE) -> None:
    """``acc += w * p * q`` for packed polynomials."""
    get = acc.get
    for m1, c1 in p.items():
        c1w = c1 * w
        for m2, c2 in q.items():
            key = m1 + m2
            s = get(key)
            if s is None:
                acc[key] = c1w * c2
            else:
                acc[key] = s + c1w * c2


def _prune(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


class Kernel:
    """Memoized mode computations for one Gram matrix."""

    def __init__(self, gram) -> None:
        self.gram = gram
        self.dim = len(gram)
        self._pack: dict = {}
        self._unpack: dict = {}
        self._counts: dict = {}
        self._schur: dict = {}
        self._create: dict = {}
        self._factor: dict = {}
        self._ann: dict = {}
        self._prepared: dict = {}

    # -- packing
    def unit(self, i: int, n: int) -> int:
        return 1 << (BITS * ((n - 1) * self.dim + i))

    def pack(self, cr: tuple) -> int:
        x = self._pack.get(cr)
        if x is None:
            x = 0
            for cd in cr:
                x += self.unit(code_index(cd), code_depth(cd))
            self._pack[cr] = x
            self._unpack[x] = cr
        return x

    def unpack(self, x: int) -> tuple:
        cr = self._unpack.get(x)
        if cr is None:
            out = []
            for i, n, k in self.counts(x):
                out.extend([code(i, n)] * k)
            cr = tuple(sorted(out))
            self._unpack[x] = cr
            self._pack[cr] = x
        return cr

    def counts(self, x: int) -> tuple:
        """``(index, depth, multiplicity)`` for each oscillator present in ``x``."""
        hit = self._counts.get(x)
        if hit is not None:
            return hit
        out = []
        slot = 0
        y = x
        while y:
            k = y & MASK
            if k:
                out.append((slot % self.dim, slot // self.dim + 1, k))
            y >>= BITS
            slot += 1
        hit = tuple(out)
        self._counts[x] = hit
        return hit

    def depth(self, x: int) -> int:
        return sum(n * k for _, n, k in self.counts(x))

    # -- pairings
    def pairings(self, alpha) -> tuple:
        """``(alpha | e_j)`` for every basis index ``j``."""
        G = self.gram
        return tuple(
            sum((G[j][k] * alpha[k] for k in range(self.dim) if alpha[k]), ZERO)
            for j in range(self.dim)
        )

    # -- creation side
    def schur(self, alpha, s: int) -> dict:
        """Coefficient of ``z^s`` in ``exp(sum_{n>0} alpha_{-n} z^n / n)``."""
        tab = self._schur.get(alpha)
        if tab is None:
            tab = [{0: _ONE}]
            self._schur[alpha] = tab
        while len(tab) <= s:
            t = len(tab)
            acc: dict = {}
            for n in range(1, t + 1):
                prev = tab[t - n]
                for i, ai in enumerate(alpha):
                    if ai:
                        _mul_into(acc, prev, {self.unit(i, n): ai / t})
            tab.append(_prune(acc))
        return tab[s]

    def creation(self, ms: tuple, t: int) -> dict:
        """Depth-``t`` part of ``prod_{(i,n) in ms} sum_{m>=n} binom(m-1,n-1) e_{i,-m}``."""
        if not ms:
            return {0: _ONE} if t == 0 else {}
        key = (ms, t)
        hit = self._create.get(key)
        if hit is not None:
            return hit
        i, n = ms[0]
        rest = ms[1:]
        rest_min = sum(r for _, r in rest)
        acc: dict = {}
        for m in range(n, t - rest_min + 1):
            sub = self.creation(rest, t - m)
            if sub:
                _mul_into(acc, sub, {self.unit(i, m): mpq(_binom_int(m - 1, n - 1))})
        hit = _prune(acc)
        self._create[key] = hit
        return hit

    def factor(self, alpha, ms: tuple, t: int) -> dict:
        """Depth-``t`` part of the creation factor times the exponential of ``alpha``."""
        if not any(alpha):
            return self.creation(ms, t)
        key = (alpha, ms, t)
        hit = self._factor.get(key)
        if hit is not None:
            return hit
        acc: dict = {}
        for s in range(t + 1):
            C = self.creation(ms, t - s)
            if C:
                _mul_into(acc, self.schur(alpha, s), C)
        hit = _prune(acc)
        self._factor[key] = hit
        return hit

    # -- annihilation side
    def shift_expansion(self, pa: tuple, x: int) -> list:
        """``exp(-sum_{n>0} alpha_n z^-n / n)`` on one monomial, as
        ``(removed_depth, monomial, coefficient)`` triples."""
        key = (pa, x)
        hit = self._ann.get(key)
        if hit is not None:
            return hit
        options = []
        for i, n, k in self.counts(x):
            if not pa[i]:
                continue
            u = self.unit(i, n)
            neg = -pa[i]
            options.append([(r * n, r * u, math.comb(k, r) * neg ** r) for r in range(k + 1)])
        out = []
        for combo in itertools.product(*options):
            removed = 0
            y = x
            coef = _ONE
            for rn, ru, c in combo:
                removed += rn
                y -= ru
                coef *= c
            out.append((removed, y, coef))
        self._ann[key] = out
        return out

    def current_annihilate(self, poly: dict, i: int, n: int, gamma_pair: tuple) -> dict:
        """``sum_{m >= 0} binom(-m-1, n-1) (e_i)_m`` applied to ``poly``."""
        G = self.gram[i]
        out: dict = {}
        c0 = _binom_int(-1, n - 1) * gamma_pair[i]
        for x, c in poly.items():
            if c0:
                out[x] = out.get(x, ZERO) + c * c0
            for j, m, k in self.counts(x):
                if not G[j]:
                    continue
                w = _binom_int(-m - 1, n - 1) * m * k
                if w:
                    y = x - self.unit(j, m)
                    out[y] = out.get(y, ZERO) + c * (G[j] * w)
        return _prune(out)

    def prepare(self, a_x: int, alpha, cpoly: dict, gamma) -> list:
        """Everything in ``Y(a, z) c`` that does not depend on the output depth.

        Returns ``(weight, creation multiset, {depth: poly})`` entries where the
        polynomials are the annihilation stage followed by the shift from the
        vertex operator.
        """
        key = (a_x, alpha, gamma, frozenset(cpoly.items()))
        hit = self._prepared.get(key)
        if hit is not None:
            return hit
        factors = [((i, n), k) for i, n, k in self.counts(a_x)]
        gp = self.pairings(gamma)
        pa = self.pairings(alpha)
        out = []
        for split in itertools.product(*[range(k + 1) for _, k in factors]):
            weight = 1
            create = []
            acts = []
            for ((i, n), k), r in zip(factors, split):
                weight *= math.comb(k, r)
                create.extend([(i, n)] * r)
                acts.extend([(i, n)] * (k - r))
            poly = cpoly
            for i, n in acts:
                poly = self.current_annihilate(poly, i, n, gp)
                if not poly:
                    break
            if not poly:
                continue
            after: dict = {}
            if any(pa):
                for x, c in poly.items():
                    d0 = self.depth(x)
                    for removed, y, k in self.shift_expansion(pa, x):
                        tgt = after.setdefault(d0 - removed, {})
                        tgt[y] = tgt.get(y, ZERO) + c * k
                after = {d: _prune(p) for d, p in after.items()}
            else:
                for x, c in poly.items():
                    after.setdefault(self.depth(x), {})[x] = c
            after = {d: p for d, p in after.items() if p}
            if after:
                out.append((mpq(weight), tuple(sorted(create)), after))
        if len(self._prepared) > 20000:
            self._prepared.clear()
        self._prepared[key] = out
        return out

    def apply(self, a_x: int, alpha, cpoly: dict, gamma, D: int) -> dict:
        """Depth-``D`` output of ``Y(a, z)`` on a polynomial ``cpoly`` of charge ``gamma``."""
        acc: dict = {}
        for weight, create, after in self.prepare(a_x, alpha, cpoly, gamma):
            for d, poly in after.items():
                if d > D:
                    continue
                F = self.factor(alpha, create, D - d)
                if F:
                    _mul_into(acc, poly, F, weight)
        return _prune(acc)

    def clear(self) -> None:
        for cache in (self._schur, self._create, self._factor, self._ann, self._prepared):
            cache.clear()
