from __future__ import annotations

import random

import pytest
from gmpy2 import mpq

from gva.engine import AlgebraInstance, twist_engine
from gva.lattice import LatticeData, SpaceSpec, SubgroupSpec, construct_cocycle, omega_superalgebra
from gva.sampling import random_charge, random_index, random_state


def rank_one(g, gen=1) -> LatticeData:
    return LatticeData(SpaceSpec(1, ((mpq(g),),)), SubgroupSpec(((mpq(gen),),)))


def fermion() -> AlgebraInstance:
    lat = rank_one(1)
    return twist_engine(AlgebraInstance(lat),
                        construct_cocycle(omega_superalgebra(lat), lat.subgroup.basis))


def half() -> AlgebraInstance:
    return AlgebraInstance(rank_one(mpq(1, 2)))


def even() -> AlgebraInstance:
    return AlgebraInstance(rank_one(2))


REFERENCE = {"fermion": fermion, "half": half, "even": even}


@pytest.fixture(params=sorted(REFERENCE))
def algebra(request) -> AlgebraInstance:
    return REFERENCE[request.param]()


def random_triple(rng: random.Random, alg: AlgebraInstance, radius: int = 2, depth: int = 3):
    basis = alg.lattice.subgroup.basis
    out = []
    for _ in range(3):
        out.append(random_state(rng, alg.dim, random_charge(rng, basis, radius), depth))
    return out


def random_modes(rng: random.Random, alg: AlgebraInstance, a, b, c):
    from gva.fock import degree_of

    al, be, ga = degree_of(a), degree_of(b), degree_of(c)
    m = random_index(rng, -alg.form(al, ga))
    n = random_index(rng, -alg.form(al, be))
    k = random_index(rng, -alg.form(be, ga))
    return m, n, k
