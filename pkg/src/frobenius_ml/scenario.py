"""Plain-text scenario files.

A scenario is one block::

    # comments start with '#'
    [orbit-intersect]
    module.free_rank = 2
    module.A_ff = [[2, 0], [0, 2]]
    module.f = [-2, 1]
    orbit.Q = [1, 0]
    orbit.P = [[0, 1]]
    subgroup.generators = [[1, 1], [0, 3]]

Keys are ``section.name``.  Values are decimal integers, bare words
(``[A-Za-z_][A-Za-z0-9_-]*``), bracketed lists, or rational functions written
``[num coeffs] / [den coeffs]``.  Polynomials are coefficient lists with the
constant term first, so ``[-1, -1, 1]`` is ``X^2 - X - 1``.  Lists may span
several lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InputError


class ScenarioError(InputError):
    def __init__(self, message: str, line: int = None, col: int = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)
        self.line, self.col = line, col


@dataclass(frozen=True)
class Rational:
    num: tuple
    den: tuple


# -- schema ------------------------------------------------------------------------------
# kind -> ordered {"section.key": (type, required)}

_MODULE = {
    "module.free_rank": ("int", True),
    "module.torsion_orders": ("ints", False),
    "module.A_ff": ("matrix", False),
    "module.A_tf": ("matrix", False),
    "module.A_tt": ("matrix", False),
    "module.f": ("ints", False),
}

SCHEMA = {
    "orbit-intersect": {
        **_MODULE,
        "orbit.Q": ("ints", True),
        "orbit.P": ("matrix", True),
        "orbit.delta": ("ints", False),
        "subgroup.generators": ("matrix", True),
        "solver.nmax": ("int", False),
        "solver.sieve": ("ints", False),
        "solver.check_box": ("int", False),
    },
    "fset": {
        **_MODULE,
        "fset.base": ("ints", True),
        "fset.terms": ("matrix", False),
        "fset.delta": ("ints", False),
        "fset.subgroup": ("matrix", False),
        "fset.bound": ("int", True),
        "fset.subgroup_box": ("int", False),
        "fset.power": ("int", False),
    },
    "recsolve": {
        "recurrence.f": ("ints", True),
        "recurrence.k": ("int", True),
        "recurrence.steps": ("ints", False),
        "system.congruences": ("list", False),
        "system.equations": ("list", False),
        "periods.moduli": ("ints", False),
        "solver.nmax": ("int", False),
        "solver.sieve": ("ints", False),
    },
    "drinfeld-survey": {
        "drinfeld.q": ("int", True),
        "drinfeld.phi_t": ("ints", True),
        "drinfeld.field_degree": ("int", False),
        "drinfeld.deg_bound": ("int", True),
    },
    "drinfeld-sharp": {
        "drinfeld.q": ("int", True),
        "drinfeld.deg_bound": ("int", True),
    },
    "gm-intersect": {
        "torus.q": ("int", True),
        "torus.generators": ("ratmatrix", True),
        "relation.coeffs": ("rats", True),
        "relation.rhs": ("rat", True),
        "solver.box": ("int", True),
    },
}


@dataclass
class Scenario:
    kind: str
    values: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.values.get(key, default)

    def __getitem__(self, key):
        return self.values[key]

    def echo(self) -> dict:
        return {k: _plain(v) for k, v in self.values.items()}


def _plain(v):
    if isinstance(v, Rational):
        return {"num": list(v.num), "den": list(v.den)}
    if isinstance(v, list):
        return [_plain(x) for x in v]
    return v


# -- tokenizer / parser ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][A-Za-z0-9_-]*)|(\[)|(\])|(,)|(/))")


class _Cursor:
    def __init__(self, text, line, col0):
        self.text, self.line, self.col0, self.pos = text, line, col0, 0
        # text may hold newlines from continuation lines
        self.starts = [0] + [i + 1 for i, ch in enumerate(text) if ch == "\n"]

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        row = max(i for i, s in enumerate(self.starts) if s <= pos)
        col = pos - self.starts[row] + 1 + (self.col0 if row == 0 else 0)
        return self.line + row, col

    def error(self, msg, pos=None):
        line, col = self.where(pos)
        return ScenarioError(msg, line, col)

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            rest = self.text[self.pos:].lstrip()
            if not rest:
                return None, None
            start = len(self.text) - len(self.text[self.pos:].lstrip())
            raise self.error(f"unexpected character {rest[0]!r}", start)
        return m, m.lastindex

    def take(self):
        m, kind = self.peek()
        if m is None:
            raise self.error("unexpected end of value")
        self.pos = m.end()
        return m, kind


def _parse_value(cur: _Cursor):
    v = _parse_atom(cur)
    m, kind = cur.peek()
    if m is not None and kind == 6:
        cur.take()
        den = _parse_atom(cur)
        if not (_is_intlist(v) and _is_intlist(den)):
            raise cur.error("a rational function needs coefficient lists on both sides of '/'")
        if not any(den):
            raise cur.error("zero denominator")
        return Rational(tuple(v), tuple(den))
    return v


def _parse_atom(cur: _Cursor):
    m, kind = cur.take()
    if kind == 1:
        return int(m.group(1))
    if kind == 2:
        return m.group(2)
    if kind == 3:
        items = []
        m2, k2 = cur.peek()
        if m2 is not None and k2 == 4:
            cur.take()
            return items
        while True:
            items.append(_parse_value(cur))
            m2, k2 = cur.take()
            if k2 == 4:
                return items
            if k2 != 5:
                raise cur.error("expected ',' or ']'", m2.start(k2))
    raise cur.error(f"unexpected {m.group(kind)!r}", m.start(kind))


def _is_intlist(v) -> bool:
    return isinstance(v, list) and all(isinstance(x, int) for x in v)


def _balance(s: str) -> int:
    return s.count("[") - s.count("]")


def parse_scenario(text: str) -> Scenario:
    lines = text.splitlines()
    kind = None
    raw = {}
    i = 0
    while i < len(lines):
        line = lines[i]
        lineno = i + 1
        stripped = line.split("#", 1)[0].rstrip()
        i += 1
        if not stripped.strip():
            continue
        head = stripped.strip()
        if head.startswith("["):
            if kind is not None:
                raise ScenarioError("only one scenario block per file", lineno, line.index("[") + 1)
            m = re.fullmatch(r"\[([a-z][a-z-]*)\]", head)
            if not m:
                raise ScenarioError(f"malformed block header {head!r}", lineno, line.index("[") + 1)
            kind = m.group(1)
            if kind not in SCHEMA:
                raise ScenarioError(f"unknown scenario kind {kind!r}", lineno, line.index("[") + 2)
            continue
        if kind is None:
            raise ScenarioError("expected a [kind] header before any key", lineno, 1)
        if "=" not in stripped:
            raise ScenarioError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key_part, val_part = stripped.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if not re.fullmatch(r"[a-z][a-z_]*\.[A-Za-z][A-Za-z0-9_]*", key):
            raise ScenarioError(f"malformed key {key!r}", lineno, key_col)
        if key not in SCHEMA[kind]:
            raise ScenarioError(f"unknown key {key!r} for kind {kind}", lineno, key_col)
        if key in raw:
            raise ScenarioError(f"duplicate key {key!r}", lineno, key_col)
        value_text = val_part
        depth = _balance(value_text)
        while depth > 0 and i < len(lines):
            value_text += "\n" + lines[i].split("#", 1)[0].rstrip()
            depth = _balance(value_text)
            i += 1
        cur = _Cursor(value_text, lineno, len(key_part) + 1)
        value = _parse_value(cur)
        m, _ = cur.peek()
        if m is not None:
            raise cur.error("trailing characters after value")
        raw[key] = (value, lineno, key_col)
    if kind is None:
        raise ScenarioError("empty scenario: no [kind] header")
    for key, (typ, required) in SCHEMA[kind].items():
        if required and key not in raw:
            raise ScenarioError(f"missing required key {key!r} for kind {kind}")
    values = {}
    for key in SCHEMA[kind]:
        if key in raw:
            value, lineno, col = raw[key]
            _check_type(SCHEMA[kind][key][0], value, key, lineno, col)
            values[key] = value
    return Scenario(kind, values)


def _check_type(typ, v, key, line, col):
    def fail(what):
        raise ScenarioError(f"key {key!r} expects {what}", line, col)

    def is_rat(x):
        return isinstance(x, Rational) or _is_intlist(x)

    if typ == "int" and not isinstance(v, int):
        fail("an integer")
    if typ == "ints" and not _is_intlist(v):
        fail("a list of integers")
    if typ == "matrix" and not (isinstance(v, list) and all(_is_intlist(r) for r in v)):
        fail("a list of integer rows")
    if typ == "list" and not isinstance(v, list):
        fail("a list")
    if typ == "rat" and not is_rat(v):
        fail("a polynomial or rational function")
    if typ == "rats" and not (isinstance(v, list) and all(is_rat(x) for x in v)):
        fail("a list of rational functions")
    if typ == "ratmatrix" and not (
        isinstance(v, list) and all(isinstance(r, list) and all(is_rat(x) for x in r) for r in v)
    ):
        fail("a list of rows of rational functions")


# -- serializer ----------------------------------------------------------------------------

def _render(v) -> str:
    if isinstance(v, Rational):
        return f"{_render(list(v.num))} / {_render(list(v.den))}"
    if isinstance(v, list):
        return "[" + ", ".join(_render(x) for x in v) + "]"
    return str(v)


def serialize(sc: Scenario) -> str:
    out = [f"[{sc.kind}]"]
    for key in SCHEMA[sc.kind]:
        if key in sc.values:
            out.append(f"{key} = {_render(sc.values[key])}")
    return "\n".join(out) + "\n"


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
