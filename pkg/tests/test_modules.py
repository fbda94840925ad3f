from __future__ import annotations

import random

import pytest
from gmpy2 import mpq

from gva.engine import AlgebraInstance
from gva.errors import ChargeOutsideCoset, CosetMismatch, DictionaryMismatch, NotIntegral
from gva.lattice import SubgroupSpec
from gva.modules import (
    CosetModule,
    build_twisted_view,
    check_module_borcherds,
    check_monodromy,
    check_twisted_borcherds,
    module_mode,
    superalgebra_instance,
)
from gva.parse import parse_state
from gva.sampling import random_charge, random_index, random_state

from .conftest import rank_one

HALF = mpq(1, 2)


def even_setup():
    lat = rank_one(2)
    sa = superalgebra_instance(lat, SubgroupSpec(((HALF,),)), [(HALF,)])
    mod = CosetModule(sa, (HALF,))
    return lat, sa, mod, build_twisted_view(sa, mod)


def test_module_mode_value():
    _, sa, mod, _ = even_setup()
    # lowest term of Y(e^alpha, z) e^{alpha/2} is z^{(alpha|alpha/2)} = z^1
    assert module_mode(mod, parse_state("e(1)"), -2, parse_state("e(1/2)")) == parse_state("e(3/2)")
    with pytest.raises(ChargeOutsideCoset):
        module_mode(mod, parse_state("e(1/2)"), 0, parse_state("e(1/2)"))
    with pytest.raises(ChargeOutsideCoset):
        module_mode(mod, parse_state("e(1)"), 0, parse_state("e(1)"))


def test_module_and_twisted_paths_agree():
    _, sa, mod, view = even_setup()
    rng = random.Random(2)
    basis = [(mpq(1),)]
    for _ in range(10):
        a = random_state(rng, 1, random_charge(rng, basis))
        b = random_state(rng, 1, random_charge(rng, basis))
        c = random_state(rng, 1, random_charge(rng, basis, offset=(HALF,)))
        al, be, ga = [next(iter(x.charges())) for x in (a, b, c)]
        n = random_index(rng, -sa.form(al, be))
        m = random_index(rng, -sa.form(al, ga))
        k = random_index(rng, -sa.form(be, ga))
        r1 = check_module_borcherds(mod, a, b, c, m, n, k)
        r2 = check_twisted_borcherds(view, a, b, c, n, m, k)
        assert r1.holds and r2.holds
        assert r1.lhs == r2.lhs and r1.rhs == r2.rhs


def test_twisted_rejects_bad_mode():
    _, _, _, view = even_setup()
    a = parse_state("e(1)")
    with pytest.raises(CosetMismatch):
        check_twisted_borcherds(view, a, a, parse_state("e(1/2)"), HALF, 0, 0)


def test_monodromy():
    _, _, _, view = even_setup()
    assert check_monodromy(view, parse_state("a[-1] e(1)"), parse_state("e(1/2)")).holds


def test_genuinely_twisted_module():
    # gram [[1]] with coset alpha/2: Y(e^alpha, z) c has exponents in 1/2 + Z
    lat = rank_one(1)
    P = SubgroupSpec(((HALF,),))
    sa = superalgebra_instance(lat, P, [(HALF,)])
    mod = CosetModule(sa, (HALF,))
    view = build_twisted_view(sa, mod)
    assert view.gamma_degree((1,)) == HALF
    a, c = parse_state("e(1)"), parse_state("a[-1] e(1/2)")
    assert check_monodromy(view, a, c).holds
    r = check_twisted_borcherds(view, a, parse_state("e(-1)"), c, 0, HALF, HALF)
    assert r.holds


def test_view_requires_integral_form():
    lat = rank_one(HALF)
    with pytest.raises(NotIntegral):
        superalgebra_instance(lat)
    alg = AlgebraInstance(lat)
    with pytest.raises(DictionaryMismatch):
        build_twisted_view(alg, CosetModule(alg, (0,)))
