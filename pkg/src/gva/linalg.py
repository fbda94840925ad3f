"""Exact rational matrices and integer row reduction."""

from __future__ import annotations

import math
from typing import Sequence

from gmpy2 import mpq

from .errors import DegenerateForm, DimensionMismatch
from .scalar import ZERO, Q

Vector = tuple  # tuple of mpq
Matrix = tuple  # tuple of Vector


def vec(xs) -> Vector:
    return tuple(Q(x) for x in xs)


def mat(rows) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def identity(n: int) -> Matrix:
    return tuple(tuple(mpq(1) if i == j else ZERO for j in range(n)) for i in range(n))


def vadd(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vscale(k, x: Vector) -> Vector:
    return tuple(k * a for a in x)


def dot(x: Vector, y: Vector) -> mpq:
    return sum((a * b for a, b in zip(x, y)), ZERO)


def bilinear(G: Matrix, x: Vector, y: Vector) -> mpq:
    """``x^T G y``."""
    total = ZERO
    for i, xi in enumerate(x):
        if xi:
            row = G[i]
            for j, yj in enumerate(y):
                if yj and row[j]:
                    total += xi * row[j] * yj
    return total


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return tuple(tuple(dot(r, c) for c in Bt) for r in A)


def madd(A: Matrix, B: Matrix) -> Matrix:
    return tuple(vadd(r, s) for r, s in zip(A, B))


def msub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(vsub(r, s) for r, s in zip(A, B))


def check_square(A: Matrix, n: int, what: str = "matrix") -> None:
    if len(A) != n or any(len(r) != n for r in A):
        raise DimensionMismatch(f"{what} must be {n}x{n}")


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises :class:`DegenerateForm` when singular."""
    A = mat(A)
    n = len(A)
    rows = [list(r) + [mpq(1) if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise DegenerateForm("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return tuple(tuple(r[n:]) for r in rows)


def det(A: Matrix) -> mpq:
    A = mat(A)
    n = len(A)
    rows = [list(r) for r in A]
    d = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            d = -d
        d *= rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                f = rows[r][col] / rows[col][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return d


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _hnf_int(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix; zero rows dropped.

    Pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``.  When several rows are eligible the lowest index wins.
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    r0 = 0
    for col in range(ncols):
        while True:
            nz = [r for r in range(r0, len(rows)) if rows[r][col]]
            if not nz:
                break
            piv = min(nz, key=lambda r: (abs(rows[r][col]), r))
            rows[r0], rows[piv] = rows[piv], rows[r0]
            done = True
            for r in range(r0 + 1, len(rows)):
                if rows[r][col]:
                    f = rows[r][col] // rows[r0][col]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[r0])]
                    if rows[r][col]:
                        done = False
            if done:
                break
        if r0 < len(rows) and rows[r0][col]:
            if rows[r0][col] < 0:
                rows[r0] = [-a for a in rows[r0]]
            p = rows[r0][col]
            for r in range(r0):
                f = rows[r][col] // p
                if f:
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[r0])]
            r0 += 1
            if r0 == len(rows):
                break
    return [r for r in rows if any(r)]


def zbasis(generators: Sequence[Vector]) -> tuple[Vector, ...]:
    """Canonical Z-basis (Hermite form) of the group generated by rational vectors."""
    gens = [vec(g) for g in generators]
    if not gens:
        return ()
    den = 1
    for g in gens:
        for x in g:
            den = _lcm(den, int(x.denominator))
    ints = [[int(x * den) for x in g] for g in gens]
    return tuple(tuple(mpq(a, den) for a in r) for r in _hnf_int(ints))


def in_zspan(v: Vector, basis: Sequence[Vector]) -> bool:
    """Membership test for a basis in Hermite (echelon) form."""
    v = list(vec(v))
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        t = v[col] / row[col]
        if t.denominator != 1:
            return False
        if t:
            v = [a - t * b for a, b in zip(v, row)]
    return not any(v)


def coordinates(v: Vector, basis: Sequence[Vector]) -> tuple[mpq, ...] | None:
    """Coordinates of ``v`` in an echelon basis, or ``None`` if not in its Q-span."""
    v = list(vec(v))
    out = []
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        t = v[col] / row[col]
        out.append(t)
        if t:
            v = [a - t * b for a, b in zip(v, row)]
    return tuple(out) if not any(v) else None
