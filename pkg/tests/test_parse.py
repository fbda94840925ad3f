from __future__ import annotations

import json
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from gva.errors import DimensionMismatch, GVAError, ParseError, UnknownBasisName
from gva.fock import FockState
from gva.parse import (
    format_series,
    format_state,
    load_spec,
    parse_rational,
    parse_scalar,
    parse_series,
    parse_state,
    series_json,
)
from gva.sampling import pbw_monomials
from gva.scalar import root_of_unity, simplify

NAMES = ("a", "b")


def random_expression(rng: random.Random) -> FockState:
    out = FockState.zero()
    for _ in range(rng.randint(1, 4)):
        mono = rng.choice(pbw_monomials(2, rng.randint(0, 4)))
        charge = (mpq(rng.randint(-3, 3), rng.choice([1, 2, 3])), mpq(rng.randint(-2, 2)))
        c = mpq(rng.randint(-5, 5), rng.randint(1, 4))
        if rng.random() < 0.4:
            c = simplify(c * root_of_unity(mpq(rng.randint(-6, 6), rng.choice([2, 3, 4]))))
        if rng.random() < 0.2:
            c = simplify(c + root_of_unity(mpq(1, 3)))
        out = out + FockState.monomial(mono, charge, c)
    return out


def test_examples():
    assert parse_state("e(0)") == FockState.vacuum(1)
    assert parse_state("a[-1]^2 e(1)") == FockState.monomial([(0, 1), (0, 1)], (1,))
    v = parse_state("1*u(1/2) * e(0,1) + e(1,0)", NAMES)
    manual = FockState.exp((0, 1), root_of_unity(mpq(1, 2))) + FockState.exp((1, 0))
    assert v == manual
    assert format_state(v, NAMES) == "1*u(1/2)*e(0,1) + e(1,0)"
    w = parse_state("a[-1]^2 b[-3] e(1,0) + 1*u(1/2) * e(0,1)", NAMES)
    assert format_state(w, NAMES) == "1*u(1/2)*e(0,1) + a[-1]^2 b[-3] e(1,0)"


def test_scalar_and_rational_literals():
    assert parse_rational("-3/2") == mpq(-3, 2)
    assert parse_scalar("1*u(1/2)") == root_of_unity(mpq(1, 2))
    assert parse_scalar("1/2 + 1*u(2/3)") == simplify(mpq(1, 2) + root_of_unity(mpq(2, 3)))
    assert parse_state("(1/2 + 1*u(2/3))*e(1)") == FockState.exp((1,), mpq(1, 2) + root_of_unity(mpq(2, 3)))
    assert parse_state("-e(1) + 2*e(1)") == parse_state("e(1)")
    assert parse_state("e(1) - e(1)") == FockState.zero()
    assert format_state(FockState.zero()) == "0"
    assert parse_state("0") == FockState.zero()


@pytest.mark.parametrize("text,pos", [("a[-1] e(1", 9), ("e(1) +", 6), ("a[1] e(0)", 2), ("e(1/0)", 2), ("a[-1] $", 6)])
def test_syntax_errors_have_positions(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_state(text)
    assert exc.value.pos == pos


def test_unknown_name_and_dimension():
    with pytest.raises(UnknownBasisName):
        parse_state("c[-1] e(0,0)", NAMES)
    with pytest.raises(DimensionMismatch):
        parse_state("e(1)", NAMES)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_state_round_trip(seed):
    v = random_expression(random.Random(seed))
    text = format_state(v, NAMES)
    back = parse_state(text, NAMES)
    assert back == v
    assert format_state(back, NAMES) == text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_series_round_trip(seed):
    rng = random.Random(seed)
    terms = {mpq(rng.randint(-8, 8), 2): random_expression(rng) for _ in range(rng.randint(1, 4))}
    terms = {e: v for e, v in terms.items() if v}
    text = format_series(terms, NAMES)
    back = parse_series(text, NAMES)
    assert back == terms
    assert format_series(back, NAMES) == text


def test_series_text_and_json():
    terms = {mpq(-3, 2): parse_state("e(1)"), mpq(-1, 2): parse_state("a[-1] e(1)")}
    assert format_series(terms) == "(e(1))*z^-3/2 + (a[-1] e(1))*z^-1/2"
    assert series_json(terms) == [{"exp": "-3/2", "coeff": "e(1)"}, {"exp": "-1/2", "coeff": "a[-1] e(1)"}]
    two = {(mpq(0), mpq(1, 2)): parse_state("e(1)")}
    assert format_series(two) == "(e(1))*z^0*w^1/2"
    assert parse_series("(e(1))*z^0*w^1/2") == two


def test_load_spec(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"dim": 2, "gram": [["1", "0"], ["0", "1/2"]], "basis_names": ["x", "y"],
                             "group": {"generators": [["1", "0"], ["0", "2"]]},
                             "module": {"coset_rep": ["1/2", "0"]}}))
    spec = load_spec(p)
    assert spec.names == ("x", "y")
    assert spec.coset_rep == (mpq(1, 2), 0)
    assert spec.state("x[-1] e(1,0)") == FockState.monomial([(0, 1)], (1, 0))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(GVAError):
        load_spec(bad)
