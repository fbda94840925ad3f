"""Coset modules and their reading as twisted modules over a superalgebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .engine import (
    AlgebraInstance,
    Report,
    borcherds_sides,
    check_borcherds,
    field_apply,
    field_floor,
    mode,
    twist_engine,
)
from .errors import ChargeOutsideCoset, CosetMismatch, DictionaryMismatch, NotIntegral
from .fock import FockState, degree_of
from .formal import ExponentWindow, compare
from .lattice import (
    CocycleData,
    LatticeData,
    SubgroupSpec,
    construct_cocycle,
    extend_cocycle,
    is_integral,
    omega_superalgebra,
)
from .linalg import Vector, vec, vsub
from .scalar import Q, frac, root_of_unity, simplify


@dataclass(frozen=True)
class CosetModule:
    """The coset ``gamma + Q`` of an ambient algebra, acted on by ``V_Q``."""

    algebra: AlgebraInstance
    coset_rep: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "coset_rep", self.algebra.space.check_vector(self.coset_rep))

    @property
    def subgroup(self) -> SubgroupSpec:
        return self.algebra.lattice.subgroup

    def in_algebra(self, charge) -> bool:
        return self.subgroup.contains(charge)

    def in_module(self, charge) -> bool:
        return self.subgroup.contains(vsub(vec(charge), self.coset_rep))

    def check_algebra_state(self, a: FockState) -> Vector:
        alpha = degree_of(a)
        if not self.in_algebra(alpha):
            raise ChargeOutsideCoset(f"charge {tuple(map(str, alpha))} is not in Q")
        return alpha

    def check_module_state(self, c: FockState) -> Vector:
        gamma = degree_of(c)
        if not self.in_module(gamma):
            raise ChargeOutsideCoset(f"charge {tuple(map(str, gamma))} is not in the module coset")
        return gamma


def module_mode(mod: CosetModule, a: FockState, n, c: FockState) -> FockState:
    """``a_(n) c`` for ``a`` in the algebra and ``c`` in the module."""
    mod.check_algebra_state(a)
    mod.check_module_state(c)
    return mode(mod.algebra, a, n, c)


def check_module_borcherds(mod: CosetModule, a, b, c, m, n, k) -> Report:
    mod.check_algebra_state(a)
    mod.check_algebra_state(b)
    mod.check_module_state(c)
    rep = check_borcherds(mod.algebra, a, b, c, m, n, k)
    rep.check = "module-borcherds"
    return rep


@dataclass
class TwistedModuleView:
    """A coset module read as a twisted module over a superalgebra.

    ``parity(a)`` is the superalgebra parity of the charge of ``a`` and
    ``gamma_degree(a)`` the class in Q/Z of the monodromy exponent, so that
    ``Y(a, z) c`` has exponents in ``-gamma_degree(a) + Z``.
    """

    superalgebra: AlgebraInstance
    module: CosetModule
    parities: dict = field(default_factory=dict)

    def parity(self, alpha) -> int:
        alpha = vec(alpha)
        p = self.parities.get(alpha)
        if p is None:
            e = self.superalgebra.eta_data.eta_exponent(alpha, alpha)
            if e.denominator != 1:
                raise DictionaryMismatch("eta(a, a) is not a sign")
            p = self.parities[alpha] = int(e) % 2
        return p

    def gamma_degree(self, alpha) -> mpq:
        return frac(-self.module.algebra.form(alpha, self.module.coset_rep))

    def mode(self, a, n, c) -> FockState:
        return module_mode(self.module, a, n, c)


def build_twisted_view(superalg: AlgebraInstance, mod: CosetModule,
                       samples: Optional[Sequence[FockState]] = None,
                       window_span: int = 4) -> TwistedModuleView:
    lat = superalg.lattice
    Q_ = lat.subgroup
    if not is_integral(lat.space, Q_):
        raise DictionaryMismatch("Delta is not trivial on Q x Q")
    if mod.subgroup.basis != Q_.basis:
        raise DictionaryMismatch("module and superalgebra use different subgroups")
    gens = Q_.basis
    par = []
    for g in gens:
        e = superalg.eta_data.eta_exponent(g, g)
        if e.denominator != 1:
            raise DictionaryMismatch("eta is not a sign on Q")
        par.append(int(e) % 2)
    for i, g in enumerate(gens):
        for j, h in enumerate(gens):
            e = superalg.eta_data.eta_exponent(g, h)
            if frac((e - par[i] * par[j]) / 2):
                raise DictionaryMismatch("eta is not (-1)^(p(a)p(b)) on Q")
    sc = superalg.cocycle or CocycleData.trivial(superalg.dim)
    mc = mod.algebra.cocycle or CocycleData.trivial(superalg.dim)
    if not sc.agrees_on(mc, gens):
        raise DictionaryMismatch("the module's cocycle does not restrict to the superalgebra's")
    view = TwistedModuleView(superalg, mod)
    if samples is None:
        samples = [FockState.exp(mod.coset_rep)]
    for c in samples:
        gamma = mod.check_module_state(c)
        for g in gens:
            for sgn in (1, -1):
                alpha = tuple(sgn * x for x in g)
                a = FockState.exp(alpha)
                s = field_apply(mod.algebra, a, c)
                top = s.lo + window_span
                target = view.gamma_degree(alpha)
                for e, v in s.terms(ExponentWindow(top)).items():
                    if frac(e + target):
                        raise DictionaryMismatch(
                            f"exponent {e} of Y(e^alpha, z)c is outside -Delta + Z"
                        )
    return view


def check_twisted_borcherds(view: TwistedModuleView, a, b, c, n, m, k) -> Report:
    """Mode form of the twisted Jacobi identity with the superalgebra sign."""
    mod = view.module
    alpha = mod.check_algebra_state(a)
    beta = mod.check_algebra_state(b)
    mod.check_module_state(c)
    n, m, k = Q(n), Q(m), Q(k)
    if n.denominator != 1:
        raise CosetMismatch("n must be an integer")
    if frac(m - view.gamma_degree(alpha)):
        raise CosetMismatch("m must lie in the Gamma-degree coset of a")
    if frac(k - view.gamma_degree(beta)):
        raise CosetMismatch("k must lie in the Gamma-degree coset of b")
    sign = -1 if (view.parity(alpha) * view.parity(beta) + int(n)) % 2 else 1
    alg = mod.algebra
    floors = {
        "ab": field_floor(alg, a, b),
        "ac": field_floor(alg, a, c),
        "bc": field_floor(alg, b, c),
    }
    lhs, rhs = borcherds_sides(lambda x, t, y: mode(alg, x, t, y), floors, a, b, c, m, n, k,
                               mpq(sign))
    diff = lhs - rhs
    return Report("twisted-borcherds", not diff, 1, None if not diff else (m, n, k),
                  diff if diff else None, lhs, rhs)


def check_monodromy(view: TwistedModuleView, a: FockState, c: FockState,
                    window: ExponentWindow | None = None) -> Report:
    """``Y(a, z) c = Y(sigma a, e^{2 pi i} z) c`` with ``sigma a = e^{2 pi i alpha} a``."""
    alpha = view.module.check_algebra_state(a)
    view.module.check_module_state(c)
    lhs = field_apply(view.module.algebra, a, c)
    rhs = lhs.phase(2).scale(root_of_unity(2 * view.gamma_degree(alpha)))
    window = window or ExponentWindow(lhs.lo + 6)
    ok, wit, diff, count = compare(lhs, rhs, window)
    return Report("monodromy", ok, count, wit, diff)


def superalgebra_instance(lat: LatticeData, P: SubgroupSpec | None = None,
                          coset_reps: Sequence = ()) -> AlgebraInstance:
    """Twist an integral lattice algebra into a superalgebra.

    The invariant ``(-1)^(p(a)p(b) + (a|b))`` on ``Q`` gives a cocycle on
    ``Q``; with ``P`` it is extended to ``P`` so that coset modules can be
    built.  The result has ``eta = (-1)^(p(a)p(b))`` on ``Q``.
    """
    if not is_integral(lat.space, lat.subgroup):
        raise NotIntegral("the form is not integral on Q")
    omega = omega_superalgebra(lat)
    eps = construct_cocycle(omega, lat.subgroup.basis)
    if P is not None:
        eps = extend_cocycle(eps, lat, P, coset_reps)
    return twist_engine(AlgebraInstance(lat), eps)
