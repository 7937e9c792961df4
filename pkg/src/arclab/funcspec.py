"""Textual map expressions.

Grammar (documented verbatim in the CLI help):

    expr    := term { ('*' | '/') term }
    term    := atom { '.' atom }          -- '.' is composition: f . g is f o g
    atom    := call | '(' expr ')'
    call    := NAME '(' [args] ')'
    args    := value {',' value}
    value   := complex | list | expr
    complex := REAL [('+'|'-') REAL 'i'] | REAL 'i'
    list    := '[' [value {',' value}] ']'

Composition binds tighter than '*' and '/', both levels associate left.
REAL is an optionally signed decimal with optional exponent.  NAMEs:
z, const, scale, shift, mobius, koebe, exp, powerseries, blaschke_disc,
blaschke_hp, cayley, inv_cayley.

Every syntax problem raises ParseError carrying the byte offset of the
first offending byte (or of the start of its token); composing maps whose
inferred tags clash raises the same typed error as building the tree by
hand.  unparse renders a tree back to text such that parsing the result
reproduces the tree structurally.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ConstructionError, ParseError, StructureError
from .maps import (
    BlaschkeDisc,
    BlaschkeHalfPlane,
    Compose,
    ConstMap,
    ExpMap,
    Identity,
    Koebe,
    LogMap,
    MapExpr,
    MobiusMap,
    PowerSeries,
    Product,
    Quotient,
    Scale,
    Shift,
    cayley_map,
    inv_cayley_map,
)
from .metrics import MobiusTransform

MAX_SOURCE_BYTES = 64 * 1024

_NUMBER = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCT = "()[],*/.+-"


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER, NAME, PUNCT, EOF
    text: str
    pos: int


def _describe(tok: Token) -> str:
    if tok.kind == "EOF":
        return "end of input"
    return f"'{tok.text}'"


def _tokenize(src: str):
    if len(src) > MAX_SOURCE_BYTES:
        raise ParseError(MAX_SOURCE_BYTES, "at most 65536 bytes", "a longer source")
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ord(ch) > 127:
            raise ParseError(i, "an ASCII character", repr(ch))
        if ch in " \t\r\n":
            i += 1
            continue
        m = _NUMBER.match(src, i)
        if m:
            toks.append(Token("NUMBER", m.group(), i))
            i = m.end()
            continue
        m = _NAME.match(src, i)
        if m:
            toks.append(Token("NAME", m.group(), i))
            i = m.end()
            continue
        if ch in _PUNCT:
            toks.append(Token("PUNCT", ch, i))
            i += 1
            continue
        raise ParseError(i, "a token", f"'{ch}'")
    toks.append(Token("EOF", "", n))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        raise ParseError(tok.pos, expected, _describe(tok))

    def at_punct(self, chars) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text in chars

    def expect_punct(self, ch) -> Token:
        if not self.at_punct(ch):
            self.fail(f"'{ch}'")
        return self.advance()

    # expr := term { ('*' | '/') term }
    def expr(self) -> MapExpr:
        node = self.term()
        while self.at_punct("*/"):
            op = self.advance().text
            rhs = self.term()
            node = Product(node, rhs) if op == "*" else Quotient(node, rhs)
        return node

    # term := atom { '.' atom }
    def term(self) -> MapExpr:
        node = self.atom()
        while self.at_punct("."):
            self.advance()
            # tag clashes surface here as the typed composition error
            node = Compose(node, self.atom())
        return node

    # atom := call | '(' expr ')'
    def atom(self) -> MapExpr:
        if self.at_punct("("):
            self.advance()
            node = self.expr()
            self.expect_punct(")")
            return node
        if self.peek().kind == "NAME":
            return self.call()
        self.fail("a map call or '('")

    def call(self) -> MapExpr:
        name_tok = self.advance()
        self.expect_punct("(")
        args = []
        if not self.at_punct(")"):
            args.append(self.value())
            while self.at_punct(","):
                self.advance()
                args.append(self.value())
        self.expect_punct(")")
        return _build(name_tok, args)

    # value := complex | list | expr, disjoint by first token
    def value(self):
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == "[":
            return self.list_value()
        if tok.kind == "NUMBER" or (tok.kind == "PUNCT" and tok.text in "+-"):
            return self.complex_value()
        if tok.kind == "NAME" or (tok.kind == "PUNCT" and tok.text == "("):
            return self.expr()
        self.fail("a value")

    def list_value(self):
        self.expect_punct("[")
        items = []
        if not self.at_punct("]"):
            items.append(self.value())
            while self.at_punct(","):
                self.advance()
                items.append(self.value())
        self.expect_punct("]")
        return items

    def complex_value(self) -> complex:
        sign = 1.0
        if self.at_punct("+-"):
            if self.advance().text == "-":
                sign = -1.0
        if self.peek().kind != "NUMBER":
            self.fail("a number")
        first = sign * float(self.advance().text)
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "i":
            self.advance()
            return complex(0.0, first)
        if self.at_punct("+-"):
            imag_sign = 1.0 if self.advance().text == "+" else -1.0
            if self.peek().kind != "NUMBER":
                self.fail("a number")
            second = imag_sign * float(self.advance().text)
            tok = self.peek()
            if not (tok.kind == "NAME" and tok.text == "i"):
                self.fail("'i'")
            self.advance()
            return complex(first, second)
        return complex(first, 0.0)


def _want_complex(value, pos, what) -> complex:
    if isinstance(value, complex):
        return value
    raise ParseError(pos, f"a complex number as {what}", _kind_of(value))


def _want_real(value, pos, what) -> float:
    v = _want_complex(value, pos, what)
    if v.imag != 0.0:
        raise ParseError(pos, f"a real number as {what}", "a complex one")
    return v.real


def _want_list(value, pos, what) -> list:
    if isinstance(value, list):
        return value
    raise ParseError(pos, f"a list as {what}", _kind_of(value))


def _kind_of(value) -> str:
    if isinstance(value, complex):
        return "a number"
    if isinstance(value, list):
        return "a list"
    return "a map expression"


def _arity(name_tok, args, n):
    if len(args) != n:
        raise ParseError(
            name_tok.pos,
            f"{n} argument(s) for {name_tok.text}",
            f"{len(args)}",
        )


def _build(name_tok, args) -> MapExpr:
    name, pos = name_tok.text, name_tok.pos
    try:
        if name == "z":
            _arity(name_tok, args, 0)
            return Identity()
        if name == "const":
            _arity(name_tok, args, 1)
            return ConstMap(_want_complex(args[0], pos, "the constant"))
        if name == "scale":
            _arity(name_tok, args, 1)
            return Scale(_want_complex(args[0], pos, "the factor"))
        if name == "shift":
            _arity(name_tok, args, 1)
            return Shift(_want_complex(args[0], pos, "the offset"))
        if name == "mobius":
            _arity(name_tok, args, 4)
            a, b, c, d = (
                _want_complex(v, pos, "a coefficient") for v in args
            )
            return MobiusMap(MobiusTransform(a, b, c, d))
        if name == "koebe":
            _arity(name_tok, args, 0)
            return Koebe()
        if name == "exp":
            _arity(name_tok, args, 0)
            return ExpMap()
        if name == "powerseries":
            _arity(name_tok, args, 1)
            coeffs = _want_list(args[0], pos, "the coefficient list")
            return PowerSeries(
                tuple(_want_complex(c, pos, "a coefficient") for c in coeffs)
            )
        if name == "blaschke_disc":
            _arity(name_tok, args, 1)
            zeros = _want_list(args[0], pos, "the zero list")
            return BlaschkeDisc(
                tuple(_want_complex(a, pos, "a zero") for a in zeros)
            )
        if name == "blaschke_hp":
            if len(args) not in (1, 2):
                raise ParseError(
                    pos, "1 or 2 argument(s) for blaschke_hp", f"{len(args)}"
                )
            heights = tuple(
                _want_real(y, pos, "a height")
                for y in _want_list(args[0], pos, "the height list")
            )
            signs = None
            if len(args) == 2:
                signs = tuple(
                    _want_real(s, pos, "a sign")
                    for s in _want_list(args[1], pos, "the sign list")
                )
            return BlaschkeHalfPlane(heights, signs)
        if name == "cayley":
            _arity(name_tok, args, 0)
            return cayley_map()
        if name == "inv_cayley":
            _arity(name_tok, args, 0)
            return inv_cayley_map()
    except ConstructionError as exc:
        raise ParseError(pos, f"valid arguments for {name}", str(exc)) from exc
    raise ParseError(pos, "a known map name", f"'{name}'")


def parse(src: str) -> MapExpr:
    """Parse a map expression; raises ParseError with the byte offset of
    the first problem (tag mismatches raise the typed composition error)."""
    parser = _Parser(_tokenize(src))
    node = parser.expr()
    if parser.peek().kind != "EOF":
        parser.fail("end of input")
    return node


def parse_complex(src: str) -> complex:
    """Parse a standalone complex literal, e.g. '0.5-2i'."""
    parser = _Parser(_tokenize(src))
    tok = parser.peek()
    if not (
        tok.kind == "NUMBER" or (tok.kind == "PUNCT" and tok.text in "+-")
    ):
        parser.fail("a complex literal")
    value = parser.complex_value()
    if parser.peek().kind != "EOF":
        parser.fail("end of input")
    return value


def _real_text(x: float) -> str:
    if not math.isfinite(x):
        raise StructureError("cannot render a non-finite number")
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _complex_text(v: complex) -> str:
    re_part = _real_text(v.real)
    im_sign = "-" if (v.imag < 0 or (v.imag == 0 and math.copysign(1, v.imag) < 0)) else "+"
    return f"{re_part}{im_sign}{_real_text(abs(v.imag))}i"


_PREC_MUL = 1
_PREC_DOT = 2
_PREC_ATOM = 3

_CAYLEY_NODE = cayley_map()
_INV_CAYLEY_NODE = inv_cayley_map()


def _node_prec(f: MapExpr) -> int:
    if isinstance(f, (Product, Quotient)):
        return _PREC_MUL
    if isinstance(f, Compose):
        return _PREC_DOT
    return _PREC_ATOM


def _render(f: MapExpr, parent_prec: int, right_side: bool) -> str:
    prec = _node_prec(f)
    text = _render_bare(f)
    if prec < parent_prec or (prec == parent_prec and right_side and prec < _PREC_ATOM):
        return f"({text})"
    return text


def _render_bare(f: MapExpr) -> str:
    if isinstance(f, Identity):
        return "z()"
    if isinstance(f, ConstMap):
        return f"const({_complex_text(f.value)})"
    if isinstance(f, Scale):
        return f"scale({_complex_text(f.factor)})"
    if isinstance(f, Shift):
        return f"shift({_complex_text(f.offset)})"
    if isinstance(f, Koebe):
        return "koebe()"
    if isinstance(f, ExpMap):
        return "exp()"
    if isinstance(f, LogMap):
        raise StructureError("the grammar has no logarithm leaf")
    if isinstance(f, PowerSeries):
        return f"powerseries([{','.join(_complex_text(c) for c in f.coeffs)}])"
    if isinstance(f, BlaschkeDisc):
        return f"blaschke_disc([{','.join(_complex_text(a) for a in f.zeros)}])"
    if isinstance(f, BlaschkeHalfPlane):
        heights = ",".join(_real_text(y) for y in f.heights)
        if all(s == 1.0 for s in f.signs):
            return f"blaschke_hp([{heights}])"
        signs = ",".join(_real_text(s) for s in f.signs)
        return f"blaschke_hp([{heights}],[{signs}])"
    if isinstance(f, MobiusMap):
        if f == _CAYLEY_NODE:
            return "cayley()"
        if f == _INV_CAYLEY_NODE:
            return "inv_cayley()"
        if f.domain is None and f.codomain is None:
            t = f.transform
            coeffs = ",".join(_complex_text(v) for v in (t.a, t.b, t.c, t.d))
            return f"mobius({coeffs})"
        raise StructureError("a tagged Moebius map has no textual form")
    if isinstance(f, Product):
        return f"{_render(f.left, _PREC_MUL, False)} * {_render(f.right, _PREC_MUL, True)}"
    if isinstance(f, Quotient):
        return (
            f"{_render(f.numerator, _PREC_MUL, False)} / "
            f"{_render(f.denominator, _PREC_MUL, True)}"
        )
    if isinstance(f, Compose):
        return f"{_render(f.outer, _PREC_DOT, False)} . {_render(f.inner, _PREC_DOT, True)}"
    raise StructureError(f"no textual form for {type(f).__name__}")


def unparse(f: MapExpr) -> str:
    """Render a tree so that parse(unparse(f)) is structurally f."""
    return _render(f, 0, False)
