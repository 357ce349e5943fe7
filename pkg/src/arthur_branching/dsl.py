"""Text syntax for symbols, segments, multisegments and Speh products.

Grammar (whitespace is insignificant)::

    expr     := (decl ";")* body
    decl     := "decl" NAME INT ["dual" NAME]
    body     := ""  |  product  |  segment  |  multiseg
    product  := factor ("*" factor)*
    factor   := "u(" NAME "," INT "," INT [";" RAT] ")"
              | "ut(" NAME "," INT "," INT "," INT [";" RAT] ")"
    segment  := "[" RAT ".." RAT "]@" NAME
    multiseg := "{" [segment ("," segment)*] "}"

Undeclared names are rank-one symbols; ``1`` is the self-dual trivial
character.  The empty body is the trivial representation of ``G_0``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core_symbols import TRIVIAL, CuspidalSymbol, Multisegment, Segment
from .errors import ParseError
from .speh import ArthurTypeRep, SpehRep

__all__ = [
    "parse",
    "parse_rep",
    "parse_speh",
    "parse_multisegment",
    "parse_segment",
    "to_text",
    "default_symbol",
]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_#~][\w#~]*|\d+[A-Za-z_#~][\w#~]*)"
                    r"|(?P<rat>-?\d+(?:/\d+)?)|(?P<op>\.\.|[()\[\]{},;*@]))")


def default_symbol(name: str) -> CuspidalSymbol:
    if name == TRIVIAL.name:
        return TRIVIAL
    return CuspidalSymbol(name, 1)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character %r" % text[pos:].lstrip()[:1], pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.symbols: dict[str, CuspidalSymbol] = {}

    # token helpers
    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if (kind is not None and tok[0] != kind) or (value is not None and tok[1] != value):
            want = repr(value) if value is not None else kind
            raise ParseError("expected %s, found %r" % (want, tok[1] or "end of input"), tok[2])
        self.i += 1
        return tok

    def at(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok[0] in ("op", "name") and tok[1] == value

    def integer(self) -> int:
        tok = self.take("rat")
        if "/" in tok[1]:
            raise ParseError("expected an integer, found %r" % tok[1], tok[2])
        return int(tok[1])

    def rational(self) -> Fraction:
        return Fraction(self.take("rat")[1])

    def name(self) -> str:
        tok = self.peek()
        if tok[0] == "rat" and "/" not in tok[1] and not tok[1].startswith("-"):
            self.i += 1
            return tok[1]
        return self.take("name")[1]

    def symbol(self, name: str) -> CuspidalSymbol:
        return self.symbols.get(name) or default_symbol(name)

    # grammar
    def declarations(self):
        while self.at("decl") and self.peek(1)[0] in ("name", "rat"):
            self.take()
            pos = self.peek()[2]
            name = self.name()
            rank = self.integer()
            partner = None
            if self.at("dual"):
                self.take()
                partner = self.name()
            if rank < 1:
                raise ParseError("rank must be positive", pos)
            if name in self.symbols:
                raise ParseError("symbol %r declared twice" % name, pos)
            self.symbols[name] = CuspidalSymbol(name, rank, partner)
            self.take("op", ";")

    def factor(self) -> SpehRep:
        tok = self.take("name")
        if tok[1] not in ("u", "ut"):
            raise ParseError("expected u(...) or ut(...), found %r" % tok[1], tok[2])
        self.take("op", "(")
        rho = self.symbol(self.name())
        self.take("op", ",")
        m = self.integer()
        self.take("op", ",")
        d = self.integer()
        k = 0
        if tok[1] == "ut":
            self.take("op", ",")
            k = self.integer()
        twist = Fraction(0)
        if self.at(";"):
            self.take()
            twist = self.rational()
        self.take("op", ")")
        try:
            return SpehRep(rho, m, d, k, twist)
        except ValueError as exc:
            raise ParseError(str(exc), tok[2]) from None

    def product(self) -> list[SpehRep]:
        factors = [self.factor()]
        while self.at("*"):
            self.take()
            factors.append(self.factor())
        return factors

    def segment(self) -> Segment:
        pos = self.take("op", "[")[2]
        a = self.rational()
        self.take("op", "..")
        b = self.rational()
        self.take("op", "]")
        self.take("op", "@")
        base = self.symbol(self.name())
        try:
            return Segment(base, a, b)
        except ValueError as exc:
            raise ParseError(str(exc), pos) from None

    def multisegment(self) -> Multisegment:
        self.take("op", "{")
        segs = []
        if not self.at("}"):
            segs.append(self.segment())
            while self.at(","):
                self.take()
                segs.append(self.segment())
        self.take("op", "}")
        return Multisegment(segs)

    def body(self):
        tok = self.peek()
        if tok[0] == "end":
            return ArthurTypeRep()
        if self.at("["):
            return self.segment()
        if self.at("{"):
            return self.multisegment()
        factors = self.product()
        if len(factors) == 1 and factors[0].k:
            return factors[0]
        if any(f.k for f in factors):
            raise ParseError("essentially Speh factors cannot appear in products", tok[2])
        return ArthurTypeRep(factors)

    def finish(self, value):
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("trailing input %r" % tok[1], tok[2])
        return value


def parse(text: str):
    """Parse any expression: returns an ArthurTypeRep, SpehRep (``ut`` only), Segment or Multisegment."""
    p = _Parser(text)
    p.declarations()
    return p.finish(p.body())


def _expect(text: str, kind, label: str):
    value = parse(text)
    if not isinstance(value, kind):
        raise ParseError("expected %s, got %s" % (label, type(value).__name__), 0)
    return value


def parse_rep(text: str) -> ArthurTypeRep:
    return _expect(text, ArthurTypeRep, "a product of Speh factors")


def parse_speh(text: str) -> SpehRep:
    value = parse(text)
    if isinstance(value, ArthurTypeRep) and len(value) == 1:
        return value.factors[0]
    if not isinstance(value, SpehRep):
        raise ParseError("expected a single Speh factor", 0)
    return value


def parse_multisegment(text: str) -> Multisegment:
    value = parse(text)
    if isinstance(value, Segment):
        return Multisegment([value])
    if not isinstance(value, Multisegment):
        raise ParseError("expected a multisegment", 0)
    return value


def parse_segment(text: str) -> Segment:
    return _expect(text, Segment, "a segment")


# -- printing ------------------------------------------------------------------

def _symbols_of(value) -> list[CuspidalSymbol]:
    if isinstance(value, SpehRep):
        return [value.rho]
    if isinstance(value, Segment):
        return [value.base]
    if isinstance(value, (ArthurTypeRep, Multisegment)):
        return [s for item in value for s in _symbols_of(item)]
    raise TypeError("cannot print %r" % (value,))


def _declarations(value) -> str:
    seen = {}
    for s in _symbols_of(value):
        seen.setdefault(s.name, s)
    out = []
    for name in sorted(seen):
        s = seen[name]
        default = default_symbol(name)
        if s.rank == default.rank and s.partner_name == default.partner_name:
            continue
        decl = "decl %s %d" % (name, s.rank)
        if s.partner_name != CuspidalSymbol(name, s.rank).partner_name or name == TRIVIAL.name:
            decl += " dual %s" % s.partner_name
        out.append(decl + "; ")
    return "".join(out)


def _speh_text(f: SpehRep) -> str:
    twist = ";%s" % f.twist if f.twist else ""
    if f.k:
        return "ut(%s,%d,%d,%d%s)" % (f.rho.name, f.m, f.d, f.k, twist)
    return "u(%s,%d,%d%s)" % (f.rho.name, f.m, f.d, twist)


def _body_text(value) -> str:
    if isinstance(value, SpehRep):
        return _speh_text(value)
    if isinstance(value, ArthurTypeRep):
        return "*".join(_speh_text(f) for f in value)
    if isinstance(value, Segment):
        return str(value)
    return "{%s}" % ",".join(str(s) for s in value)


def to_text(value, declare: bool = True) -> str:
    """Canonical text; ``parse(to_text(v)) == v`` including symbol ranks and dual partners."""
    body = _body_text(value)
    return (_declarations(value) if declare else "") + body
