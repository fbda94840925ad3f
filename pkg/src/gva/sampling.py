"""Seeded random states and mode indices for test suites."""

from __future__ import annotations

import random
from typing import Sequence

from gmpy2 import mpq

from .fock import FockState
from .linalg import vadd, vscale
from .scalar import ZERO, frac


def partitions(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of ``n`` as nonincreasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def pbw_monomials(dim: int, depth: int) -> list[tuple[tuple[int, int], ...]]:
    """All oscillator monomials of exactly the given depth, as factor lists."""
    out = []
    for part in partitions(depth):
        out.extend(_colorings(part, dim))
    return out


def _colorings(part, dim):
    if not part:
        return [()]
    res = set()
    for rest in _colorings(part[1:], dim):
        for i in range(dim):
            res.add(tuple(sorted(((i, part[0]),) + rest)))
    return sorted(res)


def random_charge(rng: random.Random, basis: Sequence, radius: int = 2, offset=None):
    dim = len(basis[0])
    v = (ZERO,) * dim if offset is None else tuple(offset)
    for b in basis:
        v = vadd(v, vscale(rng.randint(-radius, radius), b))
    return v


def random_state(rng: random.Random, dim: int, charge, max_depth: int = 3,
                 terms: int = 2) -> FockState:
    """A random homogeneous-charge state with small rational coefficients."""
    out = FockState.zero()
    for _ in range(rng.randint(1, terms)):
        d = rng.randint(0, max_depth)
        mono = rng.choice(pbw_monomials(dim, d))
        coef = mpq(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 1, 2, 3]))
        out = out + FockState.monomial(mono, charge, coef)
    if not out:
        out = FockState.exp(charge)
    return out


def random_index(rng: random.Random, coset, lo: int = -3, hi: int = 3) -> mpq:
    """A rational in ``coset + Z`` lying in ``[lo, hi]``."""
    c = frac(coset)
    choices = [c + k for k in range(lo - 1, hi + 1) if lo <= c + k <= hi]
    return rng.choice(choices)
