"""Modes, fields and identity checkers for the lattice-type algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from gmpy2 import mpq

from .errors import CosetMismatch, IncompatibleLattices, PrecisionTooSmall, PreconditionFailed
from .fock import FockState, creations_depth, degree_of, heis_act, translation_apply
from .formal import (
    Bounds2,
    ExponentWindow,
    Series1,
    Series2,
    compare,
    delta_series,
    iota_expand,
    partial_derivative,
    series_multiply,
    shift_substitute,
)
from .kernel import Kernel
from .lattice import CocycleData, LatticeData, eta_twist
from .linalg import vadd, vec
from .scalar import ZERO, Q, Rational, Scalar, frac, general_binomial, root_of_unity, simplify

DEFAULT_SPAN = 6
_KERNELS: dict = {}


def kernel_for(gram) -> Kernel:
    k = _KERNELS.get(gram)
    if k is None:
        k = _KERNELS[gram] = Kernel(gram)
    return k


class AlgebraInstance:
    """The algebra attached to lattice data, optionally twisted by a cocycle.

    With a cocycle ``eps`` the products are ``Y(a, z) b -> eps(alpha, beta) Y(a, z) b``
    and eta is multiplied by ``eps(alpha, beta) / eps(beta, alpha)``.
    """

    def __init__(self, lattice: LatticeData, cocycle: Optional[CocycleData] = None) -> None:
        if cocycle is not None and cocycle.dim != lattice.dim:
            raise IncompatibleLattices("cocycle and lattice dimensions differ")
        self.lattice = lattice
        self.cocycle = cocycle
        self.eta_data = lattice if cocycle is None else eta_twist(lattice, cocycle)
        self.kernel = kernel_for(lattice.space.gram)

    @property
    def space(self):
        return self.lattice.space

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def form(self, a, b) -> mpq:
        return self.lattice.form(a, b)

    def eta(self, a, b):
        return simplify(self.eta_data.eta(a, b))

    def eps(self, a, b):
        if self.cocycle is None:
            return mpq(1)
        return simplify(self.cocycle.value(a, b))

    def vacuum(self) -> FockState:
        return FockState.vacuum(self.dim)


def twist_engine(alg: AlgebraInstance, eps: CocycleData) -> AlgebraInstance:
    """The same algebra with products multiplied by ``eps``."""
    if eps.dim != alg.dim:
        raise IncompatibleLattices("cocycle and algebra dimensions differ")
    total = eps if alg.cocycle is None else alg.cocycle.compose(eps)
    return AlgebraInstance(alg.lattice, total)


# ---------------------------------------------------------------- modes


def _grouped(ker: Kernel, c: FockState) -> dict:
    """Terms of ``c`` packed and grouped by ``(charge, depth)``."""
    groups: dict = {}
    for (cr, gamma), cc in c.terms.items():
        groups.setdefault((gamma, creations_depth(cr)), {})[ker.pack(cr)] = cc
    return groups


def mode(alg: AlgebraInstance, a: FockState, n, c: FockState) -> FockState:
    """``a_(n) c``, the coefficient of ``z^(-n-1)`` in ``Y(a, z) c``.

    Terms whose charges put ``n`` outside ``-(alpha|gamma) + Z`` contribute zero.
    """
    n = Q(n)
    ker = alg.kernel
    out: dict = {}
    groups = None
    for (acr, alpha), ac in a.terms.items():
        da = creations_depth(acr)
        ax = ker.pack(acr)
        if groups is None:
            groups = _grouped(ker, c)
        for (gamma, dc), cpoly in groups.items():
            D = -n - 1 - alg.form(alpha, gamma) + da + dc
            if D.denominator != 1 or D < 0:
                continue
            poly = ker.apply(ax, alpha, cpoly, gamma, int(D))
            k = ac
            if not poly:
                continue
            if alg.cocycle is not None:
                k = simplify(k * alg.eps(alpha, gamma))
            charge = vadd(alpha, gamma)
            exact = type(k) is Rational
            for x, v in poly.items():
                key = (ker.unpack(x), charge)
                s = out.get(key)
                s = v * k if s is None else s + v * k
                if not exact or type(s) is not Rational:
                    s = simplify(s)
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return FockState._raw(out)


def field_floor(alg: AlgebraInstance, a: FockState, c: FockState) -> mpq:
    """A lower bound for the exponents of ``Y(a, z) c``."""
    return alg.form(degree_of(a), degree_of(c)) - a.max_depth() - c.max_depth()


def field_apply(alg: AlgebraInstance, a: FockState, c: FockState,
                window: ExponentWindow | None = None) -> Series1:
    """``Y(a, z) c`` as a lazy series with exact coefficients."""
    alpha, gamma = degree_of(a), degree_of(c)
    lo = field_floor(alg, a, c)
    return Series1(lambda e: mode(alg, a, -e - 1, c), [alg.form(alpha, gamma)], lo,
                   zero=FockState.zero())


def vertex_op_apply(alg: AlgebraInstance, alpha, c: FockState,
                    window: ExponentWindow | None = None) -> Series1:
    """``Y(e^alpha, z) c``."""
    return field_apply(alg, FockState.exp(alg.space.check_vector(alpha)), c, window)


def current_apply(alg: AlgebraInstance, h, c: FockState,
                  window: ExponentWindow | None = None) -> Series1:
    """``h(z) c = sum_n h_n c z^(-n-1)`` computed from the Heisenberg action."""
    h = alg.space.check_vector(h)
    lo = mpq(-c.max_depth() - 1)
    return Series1(lambda e: heis_act(alg.space, h, int(-e - 1), c), [ZERO], lo,
                   zero=FockState.zero())


def _lowest_nonzero(s: Series1, limit: int = 400):
    top = s.lo + limit
    e = s.lowest(top)
    if e is None:
        raise PrecisionTooSmall("no nonzero coefficient found in the search range")
    return e


def locality_order(alg: AlgebraInstance, a: FockState, b: FockState) -> mpq:
    """``N(a, b)``: minus the lowest exponent occurring in ``Y(a, z) b``.

    Equivalently one more than the largest ``n`` with ``a_(n) b != 0``.
    """
    return -_lowest_nonzero(field_apply(alg, a, b))


def ope_coefficient(alg: AlgebraInstance, a: FockState, b: FockState, k: int,
                    N=None) -> FockState:
    """``a_(N-1-k) b`` read off as the ``z1^k z2^0`` coefficient of
    ``iota(z1 - z2)^N Y(a, z1) Y(b, z2) vac`` where ``N = N(a, b)``."""
    if N is None:
        N = locality_order(alg, a, b)
    vac = alg.vacuum()
    F = product_series(alg, a, b, vac)
    G = series_multiply(F, iota_expand(N, "first_then_second"))
    return G[mpq(k), ZERO]


# ---------------------------------------------------------------- two-variable series


def product_series(alg: AlgebraInstance, a: FockState, b: FockState, c: FockState) -> Series2:
    """``Y(a, z) Y(b, w) c``; coefficient of ``z^p w^q`` is ``a_(-p-1) b_(-q-1) c``."""
    alpha, beta, gamma = degree_of(a), degree_of(b), degree_of(c)
    inner: dict = {}

    def bq(q):
        x = inner.get(q)
        if x is None:
            x = inner[q] = mode(alg, b, -q - 1, c)
        return x

    def fn(p, q):
        x = bq(q)
        return mode(alg, a, -p - 1, x) if x else FockState.zero()

    qlo = alg.form(beta, gamma) - b.max_depth() - c.max_depth()
    slo = qlo + alg.form(alpha, vadd(beta, gamma)) - a.max_depth()
    return Series2(fn, [alg.form(alpha, vadd(beta, gamma))], [alg.form(beta, gamma)],
                   Bounds2(qlo=qlo, slo=slo), FockState.zero())


def reversed_product_series(alg: AlgebraInstance, a, b, c) -> Series2:
    """``Y(b, w) Y(a, z) c`` with ``z`` first: coefficient ``b_(-q-1) a_(-p-1) c``."""
    alpha, beta, gamma = degree_of(a), degree_of(b), degree_of(c)
    inner: dict = {}

    def ap(p):
        x = inner.get(p)
        if x is None:
            x = inner[p] = mode(alg, a, -p - 1, c)
        return x

    def fn(p, q):
        x = ap(p)
        return mode(alg, b, -q - 1, x) if x else FockState.zero()

    plo = alg.form(alpha, gamma) - a.max_depth() - c.max_depth()
    slo = plo + alg.form(beta, vadd(alpha, gamma)) - b.max_depth()
    return Series2(fn, [alg.form(alpha, gamma)], [alg.form(beta, vadd(alpha, gamma))],
                   Bounds2(plo=plo, slo=slo), FockState.zero())


# ---------------------------------------------------------------- reports


@dataclass
class Report:
    check: str
    holds: bool
    compared: int = 0
    witness: Optional[tuple] = None
    difference: object = None
    lhs: object = None
    rhs: object = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _series_report(name: str, lhs, rhs, window: ExponentWindow, **detail) -> Report:
    ok, wit, diff, count = compare(lhs, rhs, window)
    return Report(name, ok, count, wit, diff, detail=dict(detail, window=window))


def natural_window(alg, a, b, c, span: int = DEFAULT_SPAN) -> ExponentWindow:
    """``span`` steps above the lowest exponents of ``Y(a,z)c`` and ``Y(b,w)c``."""
    return ExponentWindow(field_floor(alg, a, c) + span, field_floor(alg, b, c) + span)


def _homog(*states):
    return [degree_of(s) for s in states]


def check_locality(alg: AlgebraInstance, a, b, c, N,
                   window: ExponentWindow | None = None) -> Report:
    """``iota_{z,w}(z-w)^N a(z)b(w)c = eta(alpha,beta) iota_{w,z}(z-w)^N b(w)a(z)c``."""
    alpha, beta, gamma = _homog(a, b, c)
    N = Q(N)
    if frac(N + alg.form(alpha, beta)):
        raise CosetMismatch("N must lie in -(alpha|beta) + Z")
    window = window or natural_window(alg, a, b, c)
    lhs = series_multiply(product_series(alg, a, b, c), iota_expand(N, "first_then_second"))
    rhs = series_multiply(reversed_product_series(alg, a, b, c),
                          iota_expand(N, "second_then_first")).scale(alg.eta(alpha, beta))
    return _series_report("locality", lhs, rhs, window, N=N)


def _check_cosets(alg, alpha, beta, gamma, m, n, k):
    if frac(n + alg.form(alpha, beta)):
        raise CosetMismatch("n must lie in -(alpha|beta) + Z")
    if frac(m + alg.form(alpha, gamma)):
        raise CosetMismatch("m must lie in -(alpha|gamma) + Z")
    if frac(k + alg.form(beta, gamma)):
        raise CosetMismatch("k must lie in -(beta|gamma) + Z")


def _top_mode(floor_exp) -> mpq:
    # modes n with a_(n) x possibly nonzero satisfy -n-1 >= floor
    return -floor_exp - 1


def borcherds_sides(mode_fn: Callable, floors: dict, a, b, c, m, n, k, sign):
    """Both sides of the Borcherds identity for a generic mode map.

    ``floors`` holds lower exponent bounds ``ab``, ``ac`` and ``bc`` for the
    fields ``Y(a,z)b``, ``Y(a,z)c`` and ``Y(b,z)c``; ``sign`` multiplies the
    second term on the left.
    """
    m, n, k = Q(m), Q(n), Q(k)
    lhs = FockState.zero()
    jmax_bc = int(_top_mode(floors["bc"]) - k) if k <= _top_mode(floors["bc"]) else -1
    jmax_ac = int(_top_mode(floors["ac"]) - m) if m <= _top_mode(floors["ac"]) else -1
    jmax = max(jmax_bc, jmax_ac)
    if n.denominator == 1 and n >= 0:
        jmax = min(jmax, int(n))
    for j in range(jmax + 1):
        w = general_binomial(n, j)
        if not w:
            continue
        if j % 2:
            w = -w
        if j <= jmax_bc:
            x = mode_fn(b, k + j, c)
            if x:
                lhs = lhs + mode_fn(a, m + n - j, x) * w
        if j <= jmax_ac:
            y = mode_fn(a, m + j, c)
            if y:
                lhs = lhs - mode_fn(b, n + k - j, y) * simplify(w * sign)
    rhs = FockState.zero()
    top_ab = _top_mode(floors["ab"])
    jmax_ab = int(top_ab - n) if n <= top_ab else -1
    if m.denominator == 1 and m >= 0:
        jmax_ab = min(jmax_ab, int(m))
    for j in range(jmax_ab + 1):
        w = general_binomial(m, j)
        if not w:
            continue
        x = mode_fn(a, n + j, b)
        if x:
            rhs = rhs + mode_fn(x, m + k - j, c) * w
    return lhs, rhs


def check_borcherds(alg: AlgebraInstance, a, b, c, m, n, k) -> Report:
    """The Borcherds identity for one triple of modes, evaluated exactly."""
    alpha, beta, gamma = _homog(a, b, c)
    m, n, k = Q(m), Q(n), Q(k)
    _check_cosets(alg, alpha, beta, gamma, m, n, k)
    floors = {
        "ab": field_floor(alg, a, b),
        "ac": field_floor(alg, a, c),
        "bc": field_floor(alg, b, c),
    }
    sign = simplify(alg.eta(alpha, beta) * root_of_unity(n))
    lhs, rhs = borcherds_sides(lambda x, t, y: mode(alg, x, t, y), floors, a, b, c, m, n, k, sign)
    diff = lhs - rhs
    return Report("borcherds", not diff, 1, None if not diff else (m, n, k),
                  diff if diff else None, lhs, rhs)


def jacobi_sides(alg: AlgebraInstance, a, b, c, n):
    """Both sides of the Jacobi identity as two-variable series."""
    alpha, beta, gamma = _homog(a, b, c)
    n = Q(n)
    if frac(n + alg.form(alpha, beta)):
        raise CosetMismatch("n must lie in -(alpha|beta) + Z")
    left = series_multiply(product_series(alg, a, b, c), iota_expand(n, "first_then_second"))
    right = series_multiply(reversed_product_series(alg, a, b, c),
                            iota_expand(n, "second_then_first")).scale(alg.eta(alpha, beta))
    lhs = left - right
    top = _top_mode(field_floor(alg, a, b))
    delta = delta_series(-alg.form(alpha, gamma))
    rhs = None
    j = 0
    while n + j <= top:
        x = mode(alg, a, n + j, b)
        if x:
            term = series_multiply(Series2.from_series1(field_apply(alg, x, c), 2),
                                   partial_derivative(delta, 2, j))
            rhs = term if rhs is None else rhs + term
        j += 1
    if rhs is None:
        rhs = Series2(lambda p, q: FockState.zero(), [], [],
                      Bounds2(ZERO, ZERO, ZERO, ZERO), FockState.zero())
    return lhs, rhs


def check_jacobi_window(alg: AlgebraInstance, a, b, c, n,
                        window: ExponentWindow | None = None) -> Report:
    lhs, rhs = jacobi_sides(alg, a, b, c, n)
    window = window or natural_window(alg, a, b, c)
    return _series_report("jacobi", lhs, rhs, window, n=Q(n))


def exp_translation(alg: AlgebraInstance, s: Series1) -> Series1:
    """``e^{zT}`` applied to a state-valued series."""
    space = alg.space
    powers: dict = {}

    def tpow(e, k):
        key = (e, k)
        v = powers.get(key)
        if v is None:
            v = s[e] if k == 0 else translation_apply(space, tpow(e, k - 1)) * mpq(1, k)
            powers[key] = v
        return v

    def fn(e):
        total = FockState.zero()
        k = 0
        while s.lo is not None and e - k >= s.lo:
            x = tpow(e - k, k)
            if x:
                total = total + x
            k += 1
        return total

    return Series1(fn, s.cosets, s.lo, None, s.zero)


def check_skew_symmetry(alg: AlgebraInstance, a, b,
                        window: ExponentWindow | None = None, phase_sign: int = -1) -> Report:
    """``Y(a,z)b = eta(alpha,beta) e^{zT} Y(b, e^{phase_sign i pi} z) a``.

    With eta as defined here and the expansion convention for ``iota_{w,z}``,
    locality applied to the vacuum forces ``phase_sign = -1``.  The other sign
    differs by ``exp(2 pi i (alpha|beta))`` and agrees only for integral pairings.
    """
    alpha, beta = _homog(a, b)
    lhs = field_apply(alg, a, b)
    rhs = exp_translation(alg, field_apply(alg, b, a).phase(phase_sign)).scale(alg.eta(alpha, beta))
    window = window or ExponentWindow(lhs.lo + DEFAULT_SPAN)
    return _series_report("skew-symmetry", lhs, rhs, window, phase_sign=phase_sign)


def check_translation_covariance(alg: AlgebraInstance, a, samples: Iterable[FockState],
                                 window: ExponentWindow | None = None) -> Report:
    """``[T, Y(a,z)] = d/dz Y(a,z) = Y(Ta, z)`` on each sample state."""
    _homog(a)
    space = alg.space
    total = 0
    ta = translation_apply(space, a)
    for c in samples:
        f = field_apply(alg, a, c)
        lhs = f.map(lambda v: translation_apply(space, v))
        tc = translation_apply(space, c)
        if tc:
            lhs = lhs - field_apply(alg, a, tc)
        rhs = partial_derivative(f, 1, 1)
        w = window or ExponentWindow(f.lo + DEFAULT_SPAN)
        pairs = [(lhs, rhs)]
        if ta:
            pairs.append((field_apply(alg, ta, c), rhs))
        for left, right in pairs:
            rep = _series_report("translation", left, right, w)
            total += rep.compared
            if not rep.holds:
                rep.detail["sample"] = c
                rep.compared = total
                return rep
    return Report("translation", True, total)


def check_vacuum_translation(alg: AlgebraInstance, a: FockState) -> Report:
    """``T a = a_(-2) vac``."""
    lhs = translation_apply(alg.space, a)
    rhs = mode(alg, a, -2, alg.vacuum())
    d = lhs - rhs
    return Report("vacuum-translation", not d, 1, None if not d else (mpq(-2),), d or None, lhs, rhs)


def check_associativity(alg: AlgebraInstance, a, b, c, L,
                        window: ExponentWindow | None = None) -> Report:
    """``iota_{z,w}(z+w)^L a(z+w)b(w)c = iota_{w,z}(z+w)^L Y(a(z)b, w)c``."""
    alpha, beta, gamma = _homog(a, b, c)
    L = Q(L)
    if frac(L + alg.form(alpha, gamma)):
        raise CosetMismatch("L must lie in -(alpha|gamma) + Z")
    if L < locality_order(alg, a, c):
        raise PreconditionFailed("L must be at least N(a, c)")
    left = series_multiply(shift_substitute(product_series(alg, a, b, c), +1),
                           iota_expand(L, "first_then_second", "sum"))
    lo_ab = field_floor(alg, a, b)
    inner: dict = {}

    def ab(p):
        x = inner.get(p)
        if x is None:
            x = inner[p] = mode(alg, a, -p - 1, b)
        return x

    def fn(p, q):
        x = ab(p)
        return mode(alg, x, -q - 1, c) if x else FockState.zero()

    slo = lo_ab + alg.form(vadd(alpha, beta), gamma) - a.max_depth() - b.max_depth() - c.max_depth()
    yab = Series2(fn, [alg.form(alpha, beta)], [alg.form(vadd(alpha, beta), gamma)],
                  Bounds2(plo=lo_ab, slo=slo), FockState.zero())
    right = series_multiply(yab, iota_expand(L, "second_then_first", "sum"))
    if window is None:
        window = ExponentWindow(lo_ab + L + DEFAULT_SPAN, field_floor(alg, b, c) + DEFAULT_SPAN)
    return _series_report("associativity", left, right, window, L=L)
