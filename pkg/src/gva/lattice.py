"""Ambient spaces, subgroups, dual groups and bimultiplicative cocycles.

Every bimultiplicative function here has the shape
``(alpha, beta) -> exp(i*pi * alpha^T M beta)`` for a rational matrix ``M``
in the ambient basis; only the values on the relevant subgroup matter.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from gmpy2 import mpq

from .errors import (
    DegenerateForm,
    DimensionMismatch,
    IncompatibleLattices,
    InvalidEta,
    InvalidInvariant,
    NotIntegral,
)
from .linalg import (
    Matrix,
    Vector,
    bilinear,
    check_square,
    coordinates,
    det,
    in_zspan,
    inverse,
    madd,
    mat,
    matmul,
    msub,
    transpose,
    vadd,
    vec,
    zbasis,
)
from .scalar import ZERO, Q, Scalar, frac, root_of_unity


@dataclass(frozen=True)
class SpaceSpec:
    """The ambient rational space: dimension, symmetric Gram matrix, basis names."""

    dim: int
    gram: Matrix
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        g = mat(self.gram)
        check_square(g, self.dim, "gram matrix")
        for i in range(self.dim):
            for j in range(self.dim):
                if g[i][j] != g[j][i]:
                    raise DimensionMismatch("gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        names = tuple(self.names) or default_names(self.dim)
        if len(names) != self.dim or len(set(names)) != self.dim:
            raise DimensionMismatch("need one distinct name per basis vector")
        object.__setattr__(self, "names", names)

    def form(self, x, y) -> mpq:
        return bilinear(self.gram, x, y)

    def check_vector(self, v) -> Vector:
        v = vec(v)
        if len(v) != self.dim:
            raise DimensionMismatch(f"expected a vector of length {self.dim}")
        return v


def default_names(dim: int) -> tuple[str, ...]:
    letters = "abcdfghjklmnopqrstvxy"
    if dim <= len(letters):
        return tuple(letters[:dim])
    return tuple(f"h{i}" for i in range(dim))


@dataclass(frozen=True)
class SubgroupSpec:
    """A finitely generated additive subgroup of the ambient space."""

    generators: tuple[Vector, ...]
    basis: tuple[Vector, ...] = field(init=False)

    def __post_init__(self) -> None:
        gens = tuple(vec(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "basis", zbasis(gens))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return in_zspan(v, self.basis)

    def elements(self, radius: int) -> list[Vector]:
        """Combinations of the basis with coefficients in ``[-radius, radius]``."""
        out = []
        dim = len(self.basis[0]) if self.basis else 0
        for cs in itertools.product(range(-radius, radius + 1), repeat=len(self.basis)):
            v = (ZERO,) * dim
            for c, b in zip(cs, self.basis):
                if c:
                    v = vadd(v, tuple(c * x for x in b))
            out.append(v)
        return out


class CocycleData:
    """``epsilon(alpha, beta) = exp(i*pi * alpha^T M beta)`` for a rational matrix ``M``."""

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        self.matrix: Matrix = mat(matrix)
        check_square(self.matrix, len(self.matrix), "cocycle matrix")

    @classmethod
    def trivial(cls, dim: int) -> "CocycleData":
        return cls(((0,) * dim,) * dim)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def exponent(self, a, b) -> mpq:
        return bilinear(self.matrix, a, b)

    def value(self, a, b) -> Scalar:
        return root_of_unity(self.exponent(a, b))

    __call__ = value

    def compose(self, other: "CocycleData") -> "CocycleData":
        """Pointwise product."""
        if other.dim != self.dim:
            raise IncompatibleLattices("cocycles live on spaces of different dimension")
        return CocycleData(madd(self.matrix, other.matrix))

    def transpose(self) -> "CocycleData":
        return CocycleData(transpose(self.matrix))

    def agrees_on(self, other: "CocycleData", basis: Sequence[Vector]) -> bool:
        """Equality as functions on the group spanned by ``basis``."""
        for a in basis:
            for b in basis:
                if frac((self.exponent(a, b) - other.exponent(a, b)) / 2):
                    return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, CocycleData) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.matrix)
        return f"CocycleData([{rows}])"


class TableCocycle:
    """A function given by an explicit table (read-only; used for verification)."""

    def __init__(self, table: dict) -> None:
        self.table = {(vec(a), vec(b)): v for (a, b), v in table.items()}

    def value(self, a, b):
        return self.table[(vec(a), vec(b))]

    __call__ = value


@dataclass(frozen=True)
class LatticeData:
    """Ambient space, a subgroup ``Q`` and the eta-matrix ``E``.

    ``eta(alpha, beta) = exp(i*pi * alpha^T E beta)``.  By default ``E`` is the
    Gram matrix.  ``E`` must satisfy ``alpha^T (E + E^T) beta = 2 (alpha|beta)``
    modulo 2 on ``Q``.
    """

    space: SpaceSpec
    subgroup: SubgroupSpec
    eta_matrix: Optional[Matrix] = None

    def __post_init__(self) -> None:
        for g in self.subgroup.generators:
            if len(g) != self.space.dim:
                raise DimensionMismatch("subgroup generator has the wrong length")
        E = self.space.gram if self.eta_matrix is None else mat(self.eta_matrix)
        check_square(E, self.space.dim, "eta matrix")
        object.__setattr__(self, "eta_matrix", E)
        gens = self.subgroup.generators
        for a in gens:
            for b in gens:
                lhs = bilinear(E, a, b) + bilinear(E, b, a)
                if frac((lhs - 2 * self.space.form(a, b)) / 2):
                    raise InvalidEta("eta(a,b) eta(b,a) must equal exp(2 pi i (a|b)) on Q")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def gram(self) -> Matrix:
        return self.space.gram

    def form(self, a, b) -> mpq:
        return self.space.form(a, b)

    def delta(self, a, b) -> mpq:
        """Representative in ``[0, 1)`` of the coset ``-(a|b) + Z``."""
        return frac(-self.space.form(a, b))

    def eta_exponent(self, a, b) -> mpq:
        return bilinear(self.eta_matrix, a, b)

    def eta(self, a, b) -> Scalar:
        return root_of_unity(self.eta_exponent(a, b))

    def gram_q(self) -> Matrix:
        B = self.subgroup.basis
        return tuple(tuple(self.space.form(x, y) for y in B) for x in B)


def pairing(lat: LatticeData, a, b, kind: str = "form"):
    """The form, the coset Delta (as a representative in [0,1)) or eta."""
    a, b = lat.space.check_vector(a), lat.space.check_vector(b)
    if kind == "form":
        return lat.form(a, b)
    if kind == "delta":
        return lat.delta(a, b)
    if kind == "eta":
        return lat.eta(a, b)
    raise ValueError(f"unknown pairing kind {kind!r}")


def is_integral(space: SpaceSpec, group: SubgroupSpec) -> bool:
    gens = group.generators
    return all(space.form(a, b).denominator == 1 for a in gens for b in gens)


def dual_group(space: SpaceSpec, group: SubgroupSpec) -> SubgroupSpec:
    """``{x in span(Q) : (x|Q) in Z}`` for an integral nondegenerate ``Q``."""
    if not is_integral(space, group):
        raise NotIntegral("the form is not integral on the subgroup")
    B = group.basis
    G = tuple(tuple(space.form(x, y) for y in B) for x in B)
    if not B or det(G) == 0:
        raise DegenerateForm("the form restricted to the subgroup is degenerate")
    return SubgroupSpec(matmul(inverse(G), B))


def dual_index(space: SpaceSpec, group: SubgroupSpec) -> int:
    """Order of ``P/Q`` (the absolute Gram determinant of ``Q``)."""
    B = group.basis
    G = tuple(tuple(space.form(x, y) for y in B) for x in B)
    return abs(int(det(G)))


def _pullback(K: Matrix, basis: Sequence[Vector], dim: int) -> Matrix:
    # M with x^T M y = c^T K c' whenever x = c.B and y = c'.B
    B = tuple(basis)
    if not B:
        return ((ZERO,) * dim,) * dim
    R = matmul(inverse(matmul(B, transpose(B))), B)
    return matmul(matmul(transpose(R), K), R)


def omega_superalgebra(lat: LatticeData) -> CocycleData:
    """The invariant with ``omega(a, b) = (-1)^(p(a)p(b) + (a|b))`` on ``Q``.

    ``p`` is the parity ``(a|a) mod 2``.  The returned matrix is antisymmetric.
    """
    if not is_integral(lat.space, lat.subgroup):
        raise NotIntegral("the form is not integral on the subgroup")
    B = lat.subgroup.basis
    G = lat.gram_q()
    r = len(B)
    par = [int(G[i][i]) % 2 for i in range(r)]
    W = [[ZERO] * r for _ in range(r)]
    for i in range(r):
        for j in range(i):
            w = (par[i] * par[j] + int(G[i][j])) % 2
            W[i][j] = mpq(w)
            W[j][i] = mpq(-w)
    return CocycleData(_pullback(tuple(map(tuple, W)), B, lat.dim))


def construct_cocycle(omega: CocycleData, basis: Sequence[Vector]) -> CocycleData:
    """A bimultiplicative ``epsilon`` with ``epsilon(a,b)/epsilon(b,a) = omega(a,b)``.

    On the given basis, ``epsilon(b_i, b_j) = omega(b_i, b_j)`` for ``i > j``
    and 1 otherwise.  Requires ``omega(b, b) = 1`` for every basis vector.
    """
    B = [vec(b) for b in basis]
    r = len(B)
    for b in B:
        if frac(omega.exponent(b, b) / 2):
            raise InvalidInvariant("omega(b, b) must be 1 on every basis vector")
    for i in range(r):
        for j in range(i):
            s = omega.exponent(B[i], B[j]) + omega.exponent(B[j], B[i])
            if frac(s / 2):
                raise InvalidInvariant("omega must satisfy omega(a,b) omega(b,a) = 1")
    K = tuple(tuple(omega.exponent(B[i], B[j]) if i > j else ZERO for j in range(r))
              for i in range(r))
    return CocycleData(_pullback(K, B, omega.dim))


def canonical_invariant(eps: CocycleData) -> CocycleData:
    """``omega(a, b) = epsilon(a, b) / epsilon(b, a)``."""
    return CocycleData(msub(eps.matrix, transpose(eps.matrix)))


def eta_twist(lat: LatticeData, eps: CocycleData) -> LatticeData:
    """Lattice data whose eta is multiplied by the invariant of ``eps``."""
    if eps.dim != lat.dim:
        raise IncompatibleLattices("cocycle and lattice dimensions differ")
    E = madd(lat.eta_matrix, canonical_invariant(eps).matrix)
    return LatticeData(lat.space, lat.subgroup, E)


@dataclass
class CocycleReport:
    holds: bool
    checked: int
    witness: Optional[tuple] = None
    message: str = ""


def verify_cocycle(eps, triples: Iterable[tuple]) -> CocycleReport:
    """Check the 2-cocycle law and normalization on the given triples."""
    f: Callable = eps.value if hasattr(eps, "value") else eps
    n = 0
    for a, b, c in triples:
        a, b, c = vec(a), vec(b), vec(c)
        n += 1
        lhs = f(a, b) * f(vadd(a, b), c)
        rhs = f(a, vadd(b, c)) * f(b, c)
        if lhs != rhs:
            return CocycleReport(False, n, (a, b, c), "cocycle law fails")
        zero = (ZERO,) * len(a)
        if f(a, zero) != 1 or f(zero, a) != 1:
            return CocycleReport(False, n, (a, zero, zero), "not normalized")
    return CocycleReport(True, n)


def generator_triples(basis: Sequence[Vector]) -> list[tuple]:
    return list(itertools.product(basis, repeat=3))


def random_triples(group: SubgroupSpec, count: int, radius: int = 3,
                   rng: random.Random | None = None) -> list[tuple]:
    rng = rng or random.Random(0)
    B = group.basis
    dim = len(B[0])

    def draw():
        v = (ZERO,) * dim
        for b in B:
            c = rng.randint(-radius, radius)
            v = vadd(v, tuple(c * x for x in b))
        return v

    return [(draw(), draw(), draw()) for _ in range(count)]


def extend_cocycle(eps_q: CocycleData, lat: LatticeData, P: SubgroupSpec,
                   coset_reps: Sequence) -> CocycleData:
    """Extend a cocycle on ``Q`` to ``P = Q + sum Z gamma_i``.

    The invariant of ``eps_q`` is extended bilinearly over the rationals
    (its matrix is already defined on the ambient space) and a cocycle on
    ``P`` is rebuilt from it on the Hermite basis of ``P``.  The restriction
    to ``Q`` therefore has the same invariant as ``eps_q``.
    """
    if eps_q.dim != lat.dim:
        raise IncompatibleLattices("cocycle and lattice dimensions differ")
    reps = [lat.space.check_vector(g) for g in coset_reps]
    for g in lat.subgroup.generators:
        if not P.contains(g):
            raise IncompatibleLattices("Q is not contained in P")
    for g in reps:
        if not P.contains(g):
            raise IncompatibleLattices("coset representative lies outside P")
    gen = SubgroupSpec(tuple(lat.subgroup.generators) + tuple(reps))
    for g in P.generators:
        if not gen.contains(g):
            raise IncompatibleLattices("Q and the representatives do not generate P")
    omega = canonical_invariant(eps_q)
    return construct_cocycle(omega, P.basis)


def parity(lat: LatticeData, a) -> int:
    """``p(a)`` with ``(-1)^p(a) = eta(a, a)``; requires eta(a, a) = +-1."""
    e = lat.eta_exponent(a, a)
    if e.denominator != 1:
        raise InvalidInvariant("eta(a, a) is not a sign")
    return int(e) % 2


def basis_coordinates(group: SubgroupSpec, v) -> Optional[tuple]:
    return coordinates(v, group.basis)
