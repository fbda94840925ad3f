"""Text forms of scalars, states and series, and the algebra spec file.

State grammar::

    state  := '0' | term (('+' | '-') term)*
    term   := ['-'] [coef '*'] factor* 'e(' rational (',' rational)* ')'
    coef   := rational ['*' 'u(' rational ')'] | '(' scalar ')'
    factor := NAME '[' '-' INT ']' ['^' INT]
    scalar := sterm (('+' | '-') sterm)*
    sterm  := rational ['*' 'u(' rational ')'] | 'u(' rational ')'

A coefficient that is a sum of several roots of unity must be written in
parentheses, which is also how it is printed.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional, Sequence

from gmpy2 import mpq

from .errors import DimensionMismatch, GVAError, ParseError, UnknownBasisName
from .fock import FockState, code_depth, code_index, factor_list, make_creations
from .formal import ExponentWindow, Series1, Series2
from .lattice import CocycleData, LatticeData, SpaceSpec, SubgroupSpec
from .linalg import mat, vec
from .scalar import Q, Rational, Scalar, format_scalar, root_of_unity, simplify

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[-+*/^()\[\],]))"
)


class _Lexer:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("end", "", len(self.text))

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.next()
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2], self.text)
        return t

    def at(self, value: str, k: int = 0) -> bool:
        return self.peek(k)[1] == value

    def done(self) -> bool:
        return self.i >= len(self.toks)


def _rational(lx: _Lexer, allow_sign: bool = True) -> mpq:
    neg = False
    if allow_sign and lx.at("-"):
        lx.next()
        neg = True
    kind, val, pos = lx.next()
    if kind != "rat":
        raise ParseError(f"expected a rational, found {val or 'end of input'!r}", pos, lx.text)
    if val.endswith("/0") or re.fullmatch(r"\d+/0+", val):
        raise ParseError("zero denominator", pos, lx.text)
    x = Q(val)
    return -x if neg else x


def _u(lx: _Lexer):
    lx.expect("u")
    lx.expect("(")
    q = _rational(lx)
    lx.expect(")")
    return root_of_unity(q)


def _sterm(lx: _Lexer):
    if lx.at("u"):
        return _u(lx)
    r = _rational(lx)
    if lx.at("*") and lx.at("u", 1):
        lx.next()
        return simplify(r * _u(lx))
    return r


def _scalar(lx: _Lexer):
    neg = False
    if lx.at("-"):
        lx.next()
        neg = True
    total = _sterm(lx)
    if neg:
        total = -total
    while lx.at("+") or lx.at("-"):
        op = lx.next()[1]
        if lx.at("-"):
            lx.next()
            op = "+" if op == "-" else "-"
        t = _sterm(lx)
        total = total + t if op == "+" else total - t
    return simplify(total)


def parse_scalar(text: str):
    """Parse ``R``, ``R*u(Q)`` or a sum of those."""
    lx = _Lexer(text)
    v = _scalar(lx)
    if not lx.done():
        t = lx.peek()
        raise ParseError(f"unexpected {t[1]!r}", t[2], text)
    return v


def parse_rational(text: str) -> mpq:
    lx = _Lexer(text)
    v = _rational(lx)
    if not lx.done():
        t = lx.peek()
        raise ParseError(f"unexpected {t[1]!r}", t[2], text)
    return v


def parse_vector(text: str) -> tuple:
    """Comma-separated rationals, e.g. ``1/2,0``."""
    lx = _Lexer(text)
    out = [_rational(lx)]
    while lx.at(","):
        lx.next()
        out.append(_rational(lx))
    if not lx.done():
        t = lx.peek()
        raise ParseError(f"unexpected {t[1]!r}", t[2], text)
    return tuple(out)


def parse_vectors(text: str) -> list[tuple]:
    """Semicolon-separated vectors, e.g. ``1,0;0,1/2``."""
    return [parse_vector(part) for part in text.split(";") if part.strip()]


def _coef(lx: _Lexer):
    """Optional coefficient followed by ``*``; returns 1 when absent."""
    if lx.at("("):
        lx.next()
        c = _scalar(lx)
        lx.expect(")")
        lx.expect("*")
        return c
    if lx.peek()[0] == "rat" or lx.at("u"):
        c = _sterm(lx)
        lx.expect("*")
        return c
    return mpq(1)


def _term(lx: _Lexer, names: Sequence[str], dim: int):
    neg = False
    if lx.at("-"):
        lx.next()
        neg = True
    c = _coef(lx)
    factors = []
    while True:
        kind, val, pos = lx.peek()
        if kind != "name":
            raise ParseError(f"expected a factor or e(...), found {val or 'end of input'!r}",
                             pos, lx.text)
        if val == "e" and lx.at("(", 1):
            break
        lx.next()
        if val not in names:
            raise UnknownBasisName(f"unknown basis name {val!r}", pos, lx.text)
        lx.expect("[")
        lx.expect("-")
        kind, depth, dpos = lx.next()
        if kind != "rat" or "/" in depth or int(depth) < 1:
            raise ParseError("oscillator index must be a negative integer", dpos, lx.text)
        lx.expect("]")
        power = 1
        if lx.at("^"):
            lx.next()
            kind, pw, ppos = lx.next()
            if kind != "rat" or "/" in pw or int(pw) < 1:
                raise ParseError("power must be a positive integer", ppos, lx.text)
            power = int(pw)
        factors.extend([(names.index(val), int(depth))] * power)
    lx.next()
    _, _, cpos = lx.expect("(")
    charge = [_rational(lx)]
    while lx.at(","):
        lx.next()
        charge.append(_rational(lx))
    lx.expect(")")
    if len(charge) != dim:
        raise DimensionMismatch(f"charge at position {cpos} has {len(charge)} entries, expected {dim}")
    return (-c if neg else c), make_creations(factors), vec(charge)


def parse_state(text: str, names: Sequence[str] = ("a",), dim: Optional[int] = None) -> FockState:
    """Parse a state expression; ``names`` are the basis names in order."""
    dim = len(names) if dim is None else dim
    lx = _Lexer(text)
    if lx.done():
        raise ParseError("empty state expression", 0, text)
    if lx.peek()[1] == "0" and len(lx.toks) == 1:
        return FockState.zero()
    terms: dict = {}

    def add(c, cr, ch):
        key = (cr, ch)
        s = simplify(terms.get(key, 0) + c)
        if s:
            terms[key] = s
        else:
            terms.pop(key, None)

    add(*_term(lx, names, dim))
    while not lx.done():
        kind, val, pos = lx.next()
        if val not in "+-" or not val:
            raise ParseError(f"expected '+' between terms, found {val!r}", pos, text)
        c, cr, ch = _term(lx, names, dim)
        add(-c if val == "-" else c, cr, ch)
    return FockState(terms)


# ---------------------------------------------------------------- printing


def _format_coef(c) -> str:
    c = simplify(c)
    if isinstance(c, Rational):
        return "" if c == 1 else f"{c}*"
    terms = c.terms()
    if len(terms) == 1:
        return f"{format_scalar(c)}*"
    return f"({format_scalar(c)})*"


def _format_mono(cr, charge, names: Sequence[str]) -> str:
    parts = []
    for i, n, k in factor_list(cr):
        parts.append(f"{names[i]}[-{n}]" + (f"^{k}" if k > 1 else ""))
    parts.append("e(" + ",".join(str(x) for x in charge) + ")")
    return " ".join(parts)


def _sort_key(item):
    (cr, charge), _ = item
    return (charge, [(code_index(c), code_depth(c)) for c in sorted(cr, key=lambda c: (code_index(c), code_depth(c)))])


def format_state(v: FockState, names: Sequence[str] | None = None) -> str:
    """Canonical text of a state (terms ordered by charge, then factors)."""
    if not v.terms:
        return "0"
    if names is None:
        dim = len(next(iter(v.terms))[1])
        from .lattice import default_names

        names = default_names(dim)
    out = []
    for (cr, charge), c in sorted(v.terms.items(), key=_sort_key):
        out.append(_format_coef(c) + _format_mono(cr, charge, names))
    return " + ".join(out)


def format_value(x, names=None) -> str:
    if isinstance(x, FockState):
        return format_state(x, names)
    return format_scalar(x)


def format_series(terms: dict, names=None, variables: Sequence[str] = ("z", "w")) -> str:
    """Render ``{exponent(s): coefficient}`` sorted by exponent."""
    if not terms:
        return "0"
    out = []
    for exps in sorted(terms):
        coeff = terms[exps]
        if not isinstance(exps, tuple):
            exps = (exps,)
        mono = "*".join(f"{v}^{e}" for v, e in zip(variables, exps))
        out.append(f"({format_value(coeff, names)})*{mono}")
    return " + ".join(out)


def series_json(terms: dict, names=None) -> list:
    out = []
    for exps in sorted(terms):
        e = [str(x) for x in exps] if isinstance(exps, tuple) else str(exps)
        out.append({"exp": e, "coeff": format_value(terms[exps], names)})
    return out


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


_MONO = re.compile(r"\s*\*([zw])\^(-?\d+(?:/\d+)?)")


def parse_series(text: str, names: Sequence[str] = ("a",), dim: Optional[int] = None,
                 scalar: bool = False) -> dict:
    """Inverse of :func:`format_series`; returns ``{exponent(s): coefficient}``."""
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    for part in _split_top(text, " + "):
        part = part.strip()
        if not part.startswith("("):
            raise ParseError("series term must start with '('", text.find(part), text)
        depth = 0
        for idx, ch in enumerate(part):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                break
        inner = part[1:idx]
        rest = part[idx + 1:]
        exps = []
        pos = 0
        while pos < len(rest):
            m = _MONO.match(rest, pos)
            if not m:
                raise ParseError("malformed series monomial", text.find(part) + idx + 1 + pos, text)
            exps.append(Q(m.group(2)))
            pos = m.end()
        coeff = parse_scalar(inner) if scalar else parse_state(inner, names, dim)
        key = exps[0] if len(exps) == 1 else tuple(exps)
        out[key] = coeff
    return out


# ---------------------------------------------------------------- spec files


class AlgebraSpec:
    """Parsed algebra spec file."""

    def __init__(self, data: dict) -> None:
        try:
            dim = int(data["dim"])
            gram = mat(data["gram"])
            names = tuple(data.get("basis_names") or ())
            gens = [vec(g) for g in data["group"]["generators"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GVAError(f"malformed algebra spec: {exc}") from None
        self.space = SpaceSpec(dim, gram, names)
        eta = data.get("eta")
        self.lattice = LatticeData(self.space, SubgroupSpec(tuple(gens)),
                                   None if eta is None else mat(eta))
        coc = data.get("cocycle")
        self.cocycle = None if coc is None else CocycleData(mat(coc))
        if self.cocycle is not None and self.cocycle.dim != dim:
            raise DimensionMismatch("cocycle matrix has the wrong size")
        mod = data.get("module")
        self.coset_rep = None if not mod else self.space.check_vector(mod["coset_rep"])
        self.raw = data

    @property
    def names(self) -> tuple[str, ...]:
        return self.space.names

    def state(self, text: str) -> FockState:
        return parse_state(text, self.names, self.space.dim)


def load_spec(path) -> AlgebraSpec:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise GVAError(f"cannot read spec file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise GVAError(f"spec file is not valid JSON: {exc}") from None
    return AlgebraSpec(data)


def matrix_json(M) -> list:
    return [[str(x) for x in row] for row in M]


def vector_text(v) -> str:
    return ",".join(str(x) for x in v)
