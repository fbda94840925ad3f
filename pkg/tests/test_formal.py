from __future__ import annotations

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from gva.errors import NonSummable, PrecisionTooSmall
from gva.formal import (
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
    taylor_shift,
)
from gva.scalar import ZERO, frac, general_binomial, root_of_unity

W6 = ExponentWindow(6)


def series2(terms: dict) -> Series2:
    terms = {(mpq(p), mpq(q)): c for (p, q), c in terms.items() if c}
    if not terms:
        return Series2(lambda p, q: ZERO, [], [], Bounds2(ZERO, ZERO, ZERO, ZERO))
    ps = [p for p, _ in terms]
    qs = [q for _, q in terms]
    return Series2(lambda p, q: terms.get((p, q), ZERO), {frac(p) for p in ps},
                   {frac(q) for q in qs}, Bounds2(min(ps), max(ps), min(qs), max(qs)))


def random_localized(rng: random.Random) -> Series2:
    """A finite Laurent polynomial times an expanded power of ``z - w``."""
    dz = mpq(rng.randint(0, 5), 6)
    dw = mpq(rng.randint(0, 3), 4)
    poly = {}
    for _ in range(rng.randint(1, 4)):
        poly[(dz + rng.randint(-2, 2), dw + rng.randint(-2, 2))] = mpq(rng.randint(-4, 4), rng.randint(1, 3))
    M = mpq(rng.randint(-6, 6), rng.choice([1, 2, 3]))
    return series_multiply(series2(poly), iota_expand(M, "first_then_second"))


def test_series1_product_inverse():
    geo = Series1(lambda e: mpq(1), [ZERO], 0)
    one_minus = Series1.from_terms({0: 1, 1: -1})
    prod = series_multiply(geo, one_minus)
    assert prod.terms(W6) == {0: 1}


def test_series1_fractional_cosets():
    a = Series1.from_terms({mpq(-1, 2): 1, mpq(1, 2): 2})
    b = Series1.from_terms({mpq(1, 3): 3})
    assert series_multiply(a, b).terms(W6) == {mpq(-1, 6): 3, mpq(5, 6): 6}


def test_iota_expansion_values():
    s = iota_expand(mpq(1, 2), "first_then_second")
    # (z - w)^{1/2} = z^{1/2} - 1/2 z^{-1/2} w - 1/8 z^{-3/2} w^2 - ...
    assert s[mpq(1, 2), 0] == 1
    assert s[mpq(-1, 2), 1] == mpq(-1, 2)
    assert s[mpq(-3, 2), 2] == mpq(-1, 8)
    r = iota_expand(mpq(1, 2), "second_then_first")
    # (z - w)^{1/2} = e^{i pi/2} (w - z)^{1/2}
    assert r[0, mpq(1, 2)] == root_of_unity(mpq(1, 2))
    assert r[1, mpq(-1, 2)] == -root_of_unity(mpq(1, 2)) * mpq(1, 2)


@pytest.mark.parametrize("N", [-3, -1, mpq(-1, 2), mpq(2, 3), 2, mpq(7, 4)])
@pytest.mark.parametrize("direction", ["first_then_second", "second_then_first"])
def test_iota_inverse_law(N, direction):
    prod = series_multiply(iota_expand(N, direction), iota_expand(-N, direction))
    one = series2({(0, 0): 1})
    assert compare(prod, one, W6)[0]


def test_mixed_directions_not_summable():
    with pytest.raises(NonSummable):
        series_multiply(iota_expand(-1, "first_then_second"), iota_expand(-1, "second_then_first"))


def test_unbounded_enumeration_raises():
    s = Series1(lambda e: mpq(1), [ZERO])
    with pytest.raises(PrecisionTooSmall):
        s.terms(W6)


@pytest.mark.parametrize("k", range(6))
def test_delta_derivative_identity(k):
    lhs = partial_derivative(delta_series(0), 2, k)
    rhs = iota_expand(-k - 1, "first_then_second") - iota_expand(-k - 1, "second_then_first")
    ok, wit, diff, count = compare(lhs, rhs, W6)
    assert ok and count > 0


def test_delta_coefficients():
    d = delta_series(mpq(1, 3))
    assert d[mpq(-4, 3), mpq(1, 3)] == 1
    assert d[mpq(-1, 3), mpq(-2, 3)] == 1
    assert d[mpq(-1, 3), mpq(1, 3)] == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-5, 5), st.sampled_from([1, 2, 3]))
def test_taylor_recomposition(seed, num, den):
    g = random_localized(random.Random(seed))
    N = mpq(num, den)
    lhs = taylor_shift(g, N)
    rhs = series_multiply(g, iota_expand(N, "first_then_second"))
    assert compare(lhs, rhs, W6)[0]


def test_shift_substitute_round_trip():
    g = random_localized(random.Random(3))
    back = shift_substitute(shift_substitute(g, 1), -1)
    assert compare(back, g, W6)[0]


def test_partial_derivative_series1():
    s = Series1.from_terms({mpq(5, 2): 1})
    d = partial_derivative(s, 1, 2)
    assert d.terms(W6) == {mpq(1, 2): general_binomial(mpq(5, 2), 2)}


def test_compare_reports_witness():
    a = series2({(0, 0): 1, (1, 1): 2})
    b = series2({(0, 0): 1, (1, 1): 3})
    ok, wit, diff, count = compare(a, b, W6)
    assert not ok and wit == (1, 1) and diff == -1
