"""Line-oriented construction language.

Example::

    point A = free(0, 0)
    point B = free(4, 0)
    point C = free(1.5, 3)
    point D = midpoint(B, C)
    point E = midpoint(A, C)
    discover D

Comments run from ``#`` to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .construction import (
    CIRCLE_KINDS,
    LINE_KINDS,
    CircleRef,
    Construction,
    ConstructionError,
    Foot,
    Free,
    Intersect,
    IntersectLineCircle,
    LineRef,
    Midpoint,
    Regular,
    Step,
    UnknownReference,
)

KEYWORDS = {
    "point", "points", "discover", "option", "free", "midpoint", "intersect",
    "near", "foot", "regular", *LINE_KINDS, *CIRCLE_KINDS,
}

# option name -> value kind
OPTIONS = {
    "timeout_ms": "posint",
    "seed": "int",
    "instances": "posint",
    "workers": "posint",
    "epsilon": "posfloat",
    "show_trivial": "bool",
    "normalize": "bool",
}


@dataclass(frozen=True)
class SourceError:
    line: int
    column: int
    message: str
    kind: str  # "Lex", "Syntax" or "Semantic"

    def __str__(self):
        return f"{self.line}:{self.column}: {self.kind.lower()} error: {self.message}"


class ParseError(Exception):
    def __init__(self, errors: list):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<comment>#.*)"
    r"|(?P<num>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[(),=])"
)


@dataclass
class _Tok:
    kind: str  # ident, num, punct, eol
    text: str
    line: int
    col: int


class _Fail(Exception):
    def __init__(self, error: SourceError):
        self.error = error


def _lex_line(text: str, lineno: int):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _Fail(SourceError(lineno, pos + 1, f"unexpected character {text[pos]!r}", "Lex"))
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), lineno, pos + 1))
        pos = m.end()
    toks.append(_Tok("eol", "", lineno, len(text.rstrip("\n")) + 1))
    return toks


class _LineParser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        self.name_token = None
        self.names = []

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        if t.kind != "eol":
            self.i += 1
        return t

    def fail(self, tok, expected):
        found = "end of line" if tok.kind == "eol" else repr(tok.text)
        raise _Fail(SourceError(tok.line, tok.col, f"expected {expected} but found {found}", "Syntax"))

    def expect(self, text):
        t = self.next()
        if t.text != text or t.kind == "num":
            self.fail(t, repr(text))
        return t

    def keyword(self, *choices):
        t = self.next()
        if t.kind != "ident" or t.text not in choices:
            self.fail(t, " or ".join(repr(c) for c in choices))
        return t.text

    def ident(self):
        t = self.next()
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(t, "a point name")
        return t.text

    def number(self):
        t = self.next()
        if t.kind != "num":
            self.fail(t, "a number")
        return Fraction(t.text)

    def integer(self):
        t = self.next()
        if t.kind != "num" or not re.fullmatch(r"-?\d+", t.text):
            self.fail(t, "an integer")
        return int(t.text)

    def end(self):
        t = self.peek()
        if t.kind != "eol":
            self.fail(t, "end of line")

    def args(self, parse_item, count):
        self.expect("(")
        out = []
        for k in range(count):
            if k:
                self.expect(",")
            out.append(parse_item())
        self.expect(")")
        return out

    # -- grammar --

    def statement(self):
        t = self.peek()
        if t.kind == "eol":
            return None
        kw = self.keyword("point", "points", "discover", "option")
        if kw == "point":
            self.name_token = self.peek()
            name = self.ident()
            self.names = [name]
            self.expect("=")
            d = self.pexpr()
            self.end()
            return ("step", Step((name,), d))
        if kw == "points":
            self.name_token = self.peek()
            names = [self.ident()]
            while self.peek().kind == "ident" and self.peek().text not in KEYWORDS:
                names.append(self.ident())
            self.names = names
            self.expect("=")
            self.keyword("regular")
            self.expect("(")
            n = self.integer()
            self.expect(",")
            a = self.ident()
            self.expect(",")
            b = self.ident()
            self.expect(")")
            self.end()
            return ("step", Step(tuple(names), Regular(n, a, b)))
        if kw == "discover":
            self.name_token = self.peek()
            name = self.ident()
            self.end()
            return ("discover", name)
        key_tok = self.peek()
        t = self.next()
        if t.kind != "ident":
            self.fail(t, "an option name")
        self.expect("=")
        v = self.next()
        if v.kind not in ("ident", "num"):
            self.fail(v, "an option value")
        self.end()
        return ("option", (key_tok, t.text, v))

    def pexpr(self):
        kw = self.keyword("free", "midpoint", "intersect", "foot")
        if kw == "free":
            x, y = self.args(self.number, 2)
            return Free(x, y)
        if kw == "midpoint":
            a, b = self.args(self.ident, 2)
            return Midpoint(a, b)
        if kw == "foot":
            p, a, b = self.args(self.ident, 3)
            return Foot(p, a, b)
        self.expect("(")
        first = self.lref()
        self.expect(",")
        t = self.peek()
        if t.kind == "ident" and t.text in CIRCLE_KINDS:
            circle = self.cref()
            self.expect(",")
            self.keyword("near")
            nx, ny = self.args(self.number, 2)
            self.expect(")")
            return IntersectLineCircle(first, circle, (nx, ny))
        second = self.lref()
        self.expect(")")
        return Intersect(first, second)

    def lref(self):
        kind = self.keyword(*LINE_KINDS)
        return LineRef(kind, tuple(self.args(self.ident, LINE_KINDS[kind])))

    def cref(self):
        kind = self.keyword(*CIRCLE_KINDS)
        return CircleRef(kind, tuple(self.args(self.ident, CIRCLE_KINDS[kind])))


def _option_value(kind: str, tok: _Tok):
    text = tok.text
    if kind == "bool":
        if text in ("true", "false"):
            return text == "true"
        raise ValueError("expected true or false")
    if kind in ("int", "posint"):
        if not re.fullmatch(r"-?\d+", text):
            raise ValueError("expected an integer")
        value = int(text)
        if kind == "posint" and value <= 0:
            raise ValueError("expected a positive integer")
        return value
    if tok.kind != "num":
        raise ValueError("expected a number")
    value = float(text)
    if value <= 0:
        raise ValueError("expected a positive number")
    return value


def _find_col(toks, name, default):
    for t in toks:
        if t.kind == "ident" and t.text == name:
            return t.col
    return default


def parse(source: str) -> Construction:
    """Parse program text; raises ParseError listing every diagnosed problem."""
    errors: list = []
    c = Construction()
    poisoned: set = set()
    discovers = []
    for lineno, text in enumerate(source.split("\n"), start=1):
        try:
            toks = _lex_line(text, lineno)
        except _Fail as f:
            errors.append(f.error)
            continue
        lp = _LineParser(toks)
        try:
            stmt = lp.statement()
        except _Fail as f:
            errors.append(f.error)
            poisoned.update(lp.names)
            continue
        if stmt is None:
            continue
        kind, payload = stmt
        if kind == "step":
            try:
                c = c.add_step(payload)
            except ConstructionError as e:
                if isinstance(e, UnknownReference) and e.name in poisoned:
                    poisoned.update(payload.names)
                    continue
                eq = next(i for i, t in enumerate(toks) if t.text == "=")
                col = lp.name_token.col
                if isinstance(e, UnknownReference):
                    col = _find_col(toks[eq + 1:], e.name, col)
                elif e.name:
                    col = _find_col(toks[1:eq], e.name, col)
                errors.append(SourceError(lineno, col, str(e), "Semantic"))
                poisoned.update(payload.names)
        elif kind == "discover":
            discovers.append((payload, lineno, lp.name_token.col))
        else:
            key_tok, key, vtok = payload
            if key not in OPTIONS:
                errors.append(SourceError(lineno, key_tok.col, f"unknown option {key}", "Semantic"))
                continue
            try:
                value = _option_value(OPTIONS[key], vtok)
            except ValueError as e:
                errors.append(SourceError(lineno, vtok.col, f"option {key}: {e}", "Semantic"))
                continue
            c = c.with_option(key, value)
    for name, lineno, col in discovers:
        if name in poisoned:
            continue
        try:
            c = c.add_target(name)
        except ConstructionError:
            errors.append(SourceError(lineno, col, f"unknown target {name}", "Semantic"))
    if not errors and not c.free_points():
        errors.append(SourceError(1, 1, "no free point", "Semantic"))
    if errors:
        raise ParseError(errors)
    return c


# -- unparse --------------------------------------------------------------


def format_number(q: Fraction) -> str:
    """Exact decimal literal for a terminating fraction."""
    q = Fraction(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{q} has no finite decimal expansion")
    digits = max(twos, fives)
    if digits == 0:
        return str(q.numerator)
    scaled = abs(q.numerator) * 10**digits // q.denominator
    body = str(scaled).rjust(digits + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def _format_option(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def format_definition(d) -> str:
    if isinstance(d, Free):
        return f"free({format_number(d.x)}, {format_number(d.y)})"
    if isinstance(d, Midpoint):
        return f"midpoint({d.a}, {d.b})"
    if isinstance(d, Foot):
        return f"foot({d.p}, {d.a}, {d.b})"
    if isinstance(d, Intersect):
        return f"intersect({d.first}, {d.second})"
    if isinstance(d, IntersectLineCircle):
        nx, ny = (format_number(v) for v in d.near)
        return f"intersect({d.line}, {d.circle}, near({nx}, {ny}))"
    if isinstance(d, Regular):
        return f"regular({d.n}, {d.a}, {d.b})"
    raise TypeError(d)


def unparse(c: Construction) -> str:
    lines = [f"option {k} = {_format_option(v)}" for k, v in c.options]
    for s in c.steps:
        if isinstance(s.definition, Regular):
            lines.append(f"points {' '.join(s.names)} = {format_definition(s.definition)}")
        else:
            lines.append(f"point {s.name} = {format_definition(s.definition)}")
    lines.extend(f"discover {t}" for t in c.targets)
    return "\n".join(lines) + "\n"
