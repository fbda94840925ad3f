from __future__ import annotations

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from gva.errors import NotHomogeneous, ZeroState
from gva.fock import FockState, degree_of, depth_of, heis_act, translation_apply
from gva.lattice import SpaceSpec
from gva.sampling import pbw_monomials, random_state

SPACE = SpaceSpec(2, ((2, -1), (-1, mpq(1, 2))))


def test_construction_and_gradings():
    v = FockState.monomial([(0, 1), (0, 1), (1, 3)], (1, 0), 2)
    assert degree_of(v) == (1, 0)
    assert depth_of(v) == 5
    assert v.coefficient([(1, 3), (0, 1), (0, 1)], (1, 0)) == 2
    with pytest.raises(ZeroState):
        degree_of(FockState.zero())
    with pytest.raises(NotHomogeneous):
        degree_of(FockState.exp((1, 0)) + FockState.exp((0, 1)))
    assert (v - v) == FockState.zero()
    assert not (v * 0)


def test_pbw_counts():
    # the number of two-coloured partitions of 4 is 20
    assert len(pbw_monomials(2, 4)) == 20
    assert len(pbw_monomials(1, 6)) == 11


def test_heisenberg_values():
    v = FockState.monomial([(0, 2)], (1, 1))
    h = (1, 0)
    # h_2 a_{-2} = 2 (h|a) = 4
    assert heis_act(SPACE, h, 2, v) == FockState.exp((1, 1)) * 4
    # h_0 on charge (1,1): (h|(1,1)) = 2 - 1 = 1
    assert heis_act(SPACE, h, 0, v) == v


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3), st.integers(-3, 3))
def test_heisenberg_commutator(seed, m, n):
    rng = random.Random(seed)
    v = random_state(rng, 2, (mpq(rng.randint(-2, 2)), mpq(rng.randint(-2, 2), 2)), 3)
    h1 = (mpq(rng.randint(-2, 2)), mpq(rng.randint(-2, 2)))
    h2 = (mpq(rng.randint(-2, 2)), mpq(rng.randint(-2, 2)))
    lhs = heis_act(SPACE, h1, m, heis_act(SPACE, h2, n, v)) - heis_act(SPACE, h2, n, heis_act(SPACE, h1, m, v))
    rhs = v * (m * SPACE.form(h1, h2)) if m + n == 0 else FockState.zero()
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_translation_commutes_like_derivation(seed, n):
    # [T, h_n] = -n h_(n-1)
    rng = random.Random(seed)
    v = random_state(rng, 2, (mpq(1), mpq(-1, 2)), 3)
    h = (mpq(1), mpq(2))
    lhs = translation_apply(SPACE, heis_act(SPACE, h, n, v)) - heis_act(SPACE, h, n, translation_apply(SPACE, v))
    assert lhs == heis_act(SPACE, h, n - 1, v) * (-n)
